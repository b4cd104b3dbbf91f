#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csolv/cyclotomic.hpp"

#include <cstdint>

using namespace csolv;

namespace {

Cyclotomic zeta(uint32_t n, long long k = 1) { return Cyclotomic::root_of_unity(n, k); }

// deterministic generator for property tests
struct Rng {
    uint64_t s = 0x9e3779b97f4a7c15ULL;
    uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long long range(long long lo, long long hi) { return lo + (long long)(next() % (uint64_t)(hi - lo + 1)); }
};

Cyclotomic random_value(Rng& rng) {
    static const uint32_t conductors[] = {1, 3, 4, 5, 8, 12};
    uint32_t n = conductors[rng.next() % 6];
    Cyclotomic v = Cyclotomic(Rational(rng.range(-4, 4), rng.range(1, 3)));
    v += Cyclotomic(Rational(rng.range(-3, 3))) * zeta(n, rng.range(0, n - 1));
    return v;
}

} // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
    CHECK((Rational(3, 7) * Rational(7, 3)) == Rational(1));
    CHECK(Rational(-1, 3).str() == "-1/3");
    CHECK(Rational(5).str() == "5");
    CHECK_THROWS_AS(Rational(1, 0), arithmetic_error);
    CHECK_THROWS_AS(Rational(0).inverse(), arithmetic_error);
}

TEST_CASE("arith examples") {
    CHECK(zeta(4) * zeta(4) == Cyclotomic(-1));
    Cyclotomic s = Cyclotomic::one();
    for (int i = 1; i < 5; ++i) s += zeta(5, i);
    CHECK(s.is_zero());
    CHECK(zeta(3).inverse() == zeta(3, 2));
    CHECK_THROWS_AS(Cyclotomic::zero().inverse(), arithmetic_error);
}

TEST_CASE("conjugate examples") {
    CHECK(zeta(3).conjugate() == zeta(3, 2));
    Cyclotomic r(Rational(2, 3));
    CHECK(r.conjugate() == r);
    CHECK((Cyclotomic::one() + zeta(8)).conjugate() == Cyclotomic::one() + zeta(8, 7));
    // involution and homomorphism on sampled values
    Rng rng;
    for (int i = 0; i < 40; ++i) {
        Cyclotomic a = random_value(rng), b = random_value(rng);
        CHECK(a.conjugate().conjugate() == a);
        CHECK((a * b).conjugate() == a.conjugate() * b.conjugate());
        CHECK((a + b).conjugate() == a.conjugate() + b.conjugate());
    }
    for (uint32_t n : {3u, 4u, 5u, 8u, 9u, 12u})
        for (uint32_t k = 0; k < n; ++k) {
            Cyclotomic z = zeta(n, k);
            CHECK(z * z.conjugate() == Cyclotomic::one());
        }
}

TEST_CASE("compare up to root of unity") {
    auto w = compare_up_to_root_of_unity(zeta(3), Cyclotomic::one());
    REQUIRE(w.has_value());
    CHECK(*w == zeta(3));

    CHECK(!compare_up_to_root_of_unity(Cyclotomic(2), Cyclotomic::one()).has_value());

    Cyclotomic y = Cyclotomic::one() + zeta(4);
    Cyclotomic x = zeta(8) * y;
    auto w2 = compare_up_to_root_of_unity(x, y);
    REQUIRE(w2.has_value());
    CHECK(*w2 == zeta(8));
    CHECK(*w2 * y == x);

    // -1 is found even at odd conductors
    auto w3 = compare_up_to_root_of_unity(-zeta(3), zeta(3));
    REQUIRE(w3.has_value());
    CHECK(*w3 == Cyclotomic(-1));

    CHECK(!compare_up_to_root_of_unity(Cyclotomic::one() + zeta(5), Cyclotomic::one()).has_value());
}

TEST_CASE("approx rendering") {
    auto [re, im] = zeta(4).approx_complex(6);
    CHECK(re == "0.000000");
    CHECK(im == "1.000000");
    auto [re3, im3] = zeta(3).approx_complex(8);
    CHECK(re3 == "-0.50000000");
    CHECK(im3.substr(0, 6) == "0.8660");
    auto [rem, imm] = Cyclotomic(-1).approx_complex(4);
    CHECK(rem == "-1.0000");
    CHECK(imm == "0.0000");
    // 40-digit request stays exact-looking for a rational
    auto [re40, im40] = Cyclotomic(Rational(1, 4)).approx_complex(40);
    CHECK(re40 == "0.2500000000000000000000000000000000000000");
    CHECK(im40 == "0.0000000000000000000000000000000000000000");
    CHECK_THROWS_AS(zeta(3).approx_complex(51), arithmetic_error);
}

TEST_CASE("serialization") {
    CHECK(zeta(3).serialize() == "(3; 0, 1, 0)");
    CHECK(Cyclotomic(Rational(-2, 3)).serialize() == "(1; -2/3)");
    // minimization: a value entered at conductor 12 that lives at conductor 4
    Cyclotomic z = zeta(12, 3);
    CHECK(z == zeta(4));
    CHECK(z.serialize() == "(4; 0, 1, 0, 0)");
    // conductor 2 normalizes away
    CHECK(zeta(2, 1).serialize() == "(1; -1)");
    CHECK(zeta(6, 1).conductor() == 3); // zeta_6 = -zeta_3^2 lives in Q(zeta_3)
}

TEST_CASE("embedding round trip") {
    for (uint32_t n : {3u, 5u, 8u}) {
        Cyclotomic z = zeta(n) + Cyclotomic(2);
        Cyclotomic big = z * zeta(7) * zeta(7).inverse(); // forces a detour through conductor 7n
        CHECK(big == z);
        CHECK(big.conductor() == z.conductor());
    }
}

TEST_CASE("ring axioms on sampled triples") {
    Rng rng;
    for (int i = 0; i < 30; ++i) {
        Cyclotomic a = random_value(rng), b = random_value(rng), c = random_value(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inverse() == Cyclotomic::one());
    }
}

TEST_CASE("powers and roots") {
    CHECK(zeta(5).pow(5) == Cyclotomic::one());
    CHECK(zeta(5).pow(-1) == zeta(5, 4));
    CHECK(zeta(7, 3).is_root_of_unity());
    CHECK((-zeta(7, 3)).is_root_of_unity());
    CHECK(!(zeta(7) + Cyclotomic::one()).is_root_of_unity());
    CHECK(!Cyclotomic(2).is_root_of_unity());
}

TEST_CASE("high-precision rendering at 50 digits") {
    // cos(2 pi / 7) and sin(2 pi / 7) to 50 places
    auto [re, im] = Cyclotomic::root_of_unity(7, 1).approx_complex(50);
    CHECK(re == "0.62348980185873353052500488400423981063227473089640");
    CHECK(im == "0.78183148246802980870844452667405775023233451870869");
    // a rational combination
    auto [re2, im2] = (Cyclotomic(Rational(1, 3)) + Cyclotomic::root_of_unity(4, 1)).approx_complex(30);
    CHECK(re2 == "0.333333333333333333333333333333");
    CHECK(im2 == "1.000000000000000000000000000000");
}
