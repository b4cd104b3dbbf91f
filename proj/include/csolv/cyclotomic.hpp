#pragma once

#include "csolv/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace csolv {

/*
  Exact element of a cyclotomic field Q(zeta_n).

  Representation: conductor n and a dense coefficient vector of length phi(n)
  over the power basis {1, zeta, ..., zeta^{phi(n)-1}}, reduced modulo the n-th
  cyclotomic polynomial. After every operation the conductor is minimized (and
  kept away from n = 2 mod 4), so the representation is canonical: two values
  are equal iff conductor and coefficients agree. Binary operations lift both
  operands to the lcm conductor first.
*/
class Cyclotomic {
  public:
    Cyclotomic() : n_(1), c_{Rational(0)} {}
    Cyclotomic(const Rational& r) : n_(1), c_{r} {}
    Cyclotomic(long long v) : n_(1), c_{Rational(v)} {}

    static Cyclotomic zero() { return Cyclotomic(); }
    static Cyclotomic one() { return Cyclotomic(1); }
    // zeta_n^k
    static Cyclotomic root_of_unity(uint32_t n, long long k);

    uint32_t conductor() const { return n_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const { return n_ == 1; }
    // the rational part (valid only when is_rational())
    Rational rational_value() const;

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    Cyclotomic inverse() const;
    friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

    // field involution zeta_n -> zeta_n^{-1}
    Cyclotomic conjugate() const;
    // Galois twist zeta_n -> zeta_n^a, gcd(a, n) = 1
    Cyclotomic galois(long long a) const;
    Cyclotomic pow(long long e) const;

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return a.n_ == b.n_ && a.c_ == b.c_; }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    // total order used for deterministic conventions: (conductor, coefficient list)
    static bool canonical_less(const Cyclotomic& a, const Cyclotomic& b);

    // (n; c_0, c_1, ..., c_{n-1}) with rationals as p/q, zero-padded past phi(n)
    std::string serialize() const;

    // true iff the value is +-zeta_n^k for some k
    bool is_root_of_unity() const;

    // decimal rendering via zeta_n -> exp(2*pi*i/n); digits <= 50
    std::pair<std::string, std::string> approx_complex(unsigned digits) const;

    friend Cyclotomic mul_root_of_unity(const Cyclotomic& x, uint32_t n, long long k, bool negate);

  private:
    Cyclotomic(uint32_t n, std::vector<Rational> c) : n_(n), c_(std::move(c)) {}
    Cyclotomic lifted_to(uint32_t m) const; // n_ | m, no minimization
    void minimize();

    uint32_t n_;
    std::vector<Rational> c_;
};

// witness zeta (a root of unity) with x = zeta * y, if one exists
std::optional<Cyclotomic> compare_up_to_root_of_unity(const Cyclotomic& x, const Cyclotomic& y);

unsigned long long euler_phi(unsigned long long n);
std::vector<uint32_t> prime_factors(uint32_t n);

} // namespace csolv
