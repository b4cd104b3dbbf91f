#pragma once

#include "csolv/cyclotomic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace csolv {

struct metric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// finite abelian group as a product of cyclic factors; elements are indexed in
// mixed radix with the first factor fastest
struct FiniteAbelianGroup {
    std::vector<uint32_t> orders;

    uint64_t size() const {
        uint64_t s = 1;
        for (uint32_t d : orders) s *= d;
        return s;
    }
    std::vector<uint32_t> tuple(uint64_t idx) const;
    uint64_t index(const std::vector<uint32_t>& t) const;
    uint64_t add(uint64_t a, uint64_t b) const;
    uint64_t neg(uint64_t a) const;
};

// quadratic form theta on K with values in roots of unity; b(a,c) is the
// associated bilinear form theta(a+c)/theta(a)theta(c)
struct MetricGroup {
    FiniteAbelianGroup K;
    std::vector<Cyclotomic> theta;

    Cyclotomic bilinear(uint64_t a, uint64_t c) const;
    bool theta_even() const;       // theta(-a) = theta(a)
    bool bilinear_biadditive() const;
    bool nondegenerate() const;
    void validate() const; // throws metric_error on a malformed form
};

struct ModularData {
    std::vector<std::string> labels;
    std::vector<std::vector<std::vector<uint32_t>>> fusion; // N_{ab}^c
    std::vector<std::vector<Cyclotomic>> S;                 // unnormalized
    std::vector<Cyclotomic> T;                              // diagonal
    std::vector<uint64_t> fpdim;                            // per label
    uint64_t global_dim = 1;

    uint32_t rank() const { return (uint32_t)labels.size(); }
};

// pointed modular category of a metric group: labels K, fusion = group law,
// T = theta, S = bilinear form, global dimension |K|
ModularData pointed_modular(const MetricGroup& m);

// Drinfeld double of a finite abelian group: the metric group is A x A^ with
// theta(a, chi) = chi(a)
ModularData double_abelian(const FiniteAbelianGroup& A);
MetricGroup double_metric_group(const FiniteAbelianGroup& A);

struct ModularReport {
    std::vector<std::pair<std::string, bool>> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.second) return false;
        return true;
    }
    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.second) return c.first;
        return "";
    }
};

// standard modular-data consistency: S symmetric, T roots of unity, S
// unitary up to the global dimension, Verlinde coefficients nonnegative
// integers equal to the declared fusion, FP-dimensions positive integers;
// optionally the global dimension must be a perfect square
ModularReport verify_modular(const ModularData& d, bool require_square_dim = false);

// label permutation induced on a pointed datum by a group automorphism that
// preserves theta; throws if theta is not preserved
std::vector<uint32_t> metric_automorphism_action(const MetricGroup& m, const std::vector<uint32_t>& perm);
std::vector<uint32_t> fixed_labels(const std::vector<uint32_t>& perm);

// automorphism of the double induced by an automorphism of A (given as an
// element permutation of A): (a, chi) -> (phi(a), chi o phi^{-1})
std::vector<uint32_t> double_automorphism(const FiniteAbelianGroup& A, const std::vector<uint32_t>& phi);

// deterministic sampler for randomized verification runs
struct MetricSampler {
    uint64_t state;
    explicit MetricSampler(uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
    uint64_t next();
    MetricGroup sample(uint32_t max_order);
};

uint64_t integer_sqrt(uint64_t n); // floor sqrt

} // namespace csolv
