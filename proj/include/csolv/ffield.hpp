#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace csolv {

struct field_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// element of F_{p^deg}: coefficients over F_p, low-to-high, length deg
struct FieldElement {
    uint32_t deg = 1;
    std::vector<uint32_t> coeffs;

    bool operator==(const FieldElement& o) const { return deg == o.deg && coeffs == o.coeffs; }
    bool is_zero() const {
        for (uint32_t c : coeffs)
            if (c) return false;
        return true;
    }
    // enumeration index: c_0 + c_1 p + ... (lexicographic, low coefficient fastest)
    uint64_t index(uint32_t p) const {
        uint64_t v = 0;
        for (size_t i = coeffs.size(); i-- > 0;) v = v * p + coeffs[i];
        return v;
    }
};

/*
  Tower of finite fields F_{p^k}. Each level k carries the lexicographically
  least monic irreducible polynomial of degree k over F_p; the embedding
  F_{p^a} -> F_{p^ab} sends the level-a generator to the least root of its
  modulus in the bigger field. Levels are added lazily; embeddings compose
  compatibly because each one is pinned to the same deterministic rule.
*/
class FieldTower {
  public:
    FieldTower(uint32_t p, const std::set<uint32_t>& degrees);

    uint32_t characteristic() const { return p_; }
    bool has_degree(uint32_t k) const { return levels_.count(k) != 0; }
    void ensure_degree(uint32_t k);
    std::vector<uint32_t> modulus(uint32_t k) const; // monic, length k+1, low-to-high

    FieldElement zero(uint32_t k) const { return FieldElement{k, std::vector<uint32_t>(k, 0)}; }
    FieldElement one(uint32_t k) const;
    FieldElement from_index(uint32_t k, uint64_t idx) const;

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement inv(const FieldElement& a) const;
    FieldElement pow(const FieldElement& a, unsigned long long e) const;

    // x^(q^m) for q a power of p
    FieldElement frobenius_power(const FieldElement& x, uint64_t q, uint32_t m) const;

    // embed from level `from` into level `to` (from | to)
    FieldElement embed(const FieldElement& a, uint32_t to);
    // inverse of embed; throws if a does not lie in the level-`to` subfield
    FieldElement project(const FieldElement& a, uint32_t to);
    bool lies_in_subfield(const FieldElement& a, uint32_t sub);

    uint64_t multiplicative_order(const FieldElement& a) const;

    // additive Lang: lexicographically least alpha with c * alpha^q - alpha = a,
    // searching extensions lazily; plain kind has c = 1
    FieldElement lang_additive(const FieldElement& a, uint64_t q);
    FieldElement lang_additive_twisted(const FieldElement& c, const FieldElement& a, uint64_t q);
    // multiplicative Lang: least alpha with alpha^(q-1) = a, by exhaustive
    // search in the extension F_{q^s} with (q-1) * ord(a) | q^s - 1
    FieldElement lang_multiplicative(const FieldElement& a, uint64_t q);

    static bool is_prime(uint64_t n);

    uint32_t extension_cap = 64; // max degree over F_p that lazy growth may reach

  private:
    struct Level {
        uint32_t deg;
        std::vector<uint32_t> modulus;
    };
    const Level& level(uint32_t k) const;
    std::vector<uint32_t> poly_mul_mod(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                                       const std::vector<uint32_t>& mod) const;
    FieldElement frobenius_p(const FieldElement& x) const; // x^p

    uint32_t p_;
    std::map<uint32_t, Level> levels_;
    std::map<std::pair<uint32_t, uint32_t>, FieldElement> embed_gen_; // (from,to) -> image of x_from
};

} // namespace csolv
