#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csolv/ffield.hpp"

using namespace csolv;

TEST_CASE("tower construction and moduli") {
    FieldTower tw(2, {1, 2});
    CHECK(tw.modulus(2) == std::vector<uint32_t>{1, 1, 1}); // x^2 + x + 1
    CHECK_THROWS_AS(FieldTower(4, {1}), field_error);
    FieldTower t3(3, {1});
    CHECK(t3.characteristic() == 3);
}

TEST_CASE("F4 arithmetic and frobenius") {
    FieldTower tw(2, {1, 2});
    FieldElement x{2, {0, 1}};
    // x^2 = x + 1 in F_2[x]/(x^2+x+1)
    CHECK(tw.frobenius_power(x, 2, 1) == FieldElement{2, {1, 1}});
    CHECK(tw.frobenius_power(x, 2, 2) == x); // F^2 = id on F_4
    CHECK(tw.frobenius_power(x, 2, 0) == x);
    // multiplicative group has order 3
    int units = 0;
    for (uint64_t i = 0; i < 4; ++i)
        if (!tw.from_index(2, i).is_zero()) ++units;
    CHECK(units == 3);
    CHECK(tw.pow(x, 3) == tw.one(2));
}

TEST_CASE("embedding F4 into F16 is a ring map") {
    FieldTower tw(2, {1, 2, 4});
    std::vector<FieldElement> f4;
    for (uint64_t i = 0; i < 4; ++i) f4.push_back(tw.from_index(2, i));
    for (const auto& a : f4)
        for (const auto& b : f4) {
            CHECK(tw.embed(tw.mul(a, b), 4) == tw.mul(tw.embed(a, 4), tw.embed(b, 4)));
            CHECK(tw.embed(tw.add(a, b), 4) == tw.add(tw.embed(a, 4), tw.embed(b, 4)));
        }
    // injectivity
    for (size_t i = 0; i < f4.size(); ++i)
        for (size_t j = i + 1; j < f4.size(); ++j) CHECK_FALSE(tw.embed(f4[i], 4) == tw.embed(f4[j], 4));
    // round trip
    for (const auto& a : f4) CHECK(tw.project(tw.embed(a, 4), 2) == a);
}

TEST_CASE("embeddings compose compatibly") {
    FieldTower tw(2, {1, 2, 4, 8});
    for (uint64_t i = 0; i < 4; ++i) {
        FieldElement a = tw.from_index(2, i);
        CHECK(tw.embed(tw.embed(a, 4), 8) == tw.embed(a, 8));
    }
}

TEST_CASE("additive lang solve") {
    FieldTower tw(2, {1, 2});
    // alpha^2 - alpha = 1 has solution x in F_4 (x^2 + x = 1)
    FieldElement a = tw.one(1);
    FieldElement alpha = tw.lang_additive(a, 2);
    CHECK(alpha.deg == 2);
    CHECK(tw.sub(tw.frobenius_power(alpha, 2, 1), alpha) == tw.embed(a, 2));
    CHECK(alpha == FieldElement{2, {0, 1}}); // lexicographically least of {x, x+1}
    // a = 0 -> alpha = 0
    CHECK(tw.lang_additive(tw.zero(1), 2).is_zero());
}

TEST_CASE("twisted additive lang solve") {
    FieldTower tw(3, {1});
    // c*alpha^3 - alpha = a with c = 2
    FieldElement c{1, {2}}, a{1, {1}};
    FieldElement alpha = tw.lang_additive_twisted(c, a, 3);
    FieldElement lhs = tw.sub(tw.mul(tw.embed(c, alpha.deg), tw.frobenius_power(alpha, 3, 1)), alpha);
    CHECK(lhs == tw.embed(a, alpha.deg));
}

TEST_CASE("multiplicative lang solve") {
    FieldTower tw(2, {1});
    // alpha^(q-1) = 1: least is alpha = 1
    CHECK(tw.lang_multiplicative(tw.one(1), 4) == tw.one(2));
    // a generator of F_4^*: solve alpha^3 = a over q = 4
    FieldTower tw2(2, {1, 2});
    FieldElement g{2, {0, 1}};
    FieldElement alpha = tw2.lang_multiplicative(g, 4);
    CHECK(tw2.pow(alpha, 3) == tw2.embed(g, alpha.deg));
    // verify in F_16: 15 = 3*5, ord(g) = 3, (q-1)*ord = 9 does not divide 15 -> goes further up
    CHECK(alpha.deg % 2 == 0);
}

TEST_CASE("unit group orders") {
    FieldTower tw(3, {1, 2});
    FieldElement g{2, {1, 1}};
    uint64_t ord = tw.multiplicative_order(g);
    CHECK(8 % ord == 0);
    int count = 0;
    for (uint64_t i = 1; i < 9; ++i)
        if (!tw.from_index(2, i).is_zero()) ++count;
    CHECK(count == 8); // |F_9^*| = 8
}
