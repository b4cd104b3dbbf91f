#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csolv/sheafdict.hpp"

using namespace csolv;

namespace {

struct Env {
    std::unique_ptr<FieldTower> tower;
    FrobContext ctx;
    Env(Family f, uint32_t p, uint32_t k, uint32_t m, uint32_t rank = 1)
        : tower(std::make_unique<FieldTower>(p, std::set<uint32_t>{1})) {
        GroupSpec spec{f, p, k, rank};
        ctx = build_context(spec, m, *tower);
    }
};

} // namespace

TEST_CASE("case1 idempotent at q=2 is the U-indicator over 8") {
    Env env(Family::BorelSL3, 2, 1, 1);
    auto pair = make_pair(Family::BorelSL3, "case1", 2, 2);
    ResolvedBlock rb = resolve_block(env.ctx, pair, *env.tower);
    // values: 1/8 on classes inside U, 0 outside
    const auto& cd = env.ctx.untwisted().classes;
    for (uint32_t c = 0; c < cd.count(); ++c) {
        bool inU = env.ctx.ambient->in_subgroup("U", env.ctx.untwisted().group->parent_id(cd.reps[c]));
        if (inU) CHECK(rb.T_e.v[0][c] == Cyclotomic(Rational(1, 8)));
        else CHECK(rb.T_e.v[0][c].is_zero());
    }
    CHECK(convolve(rb.T_e, rb.T_e) == rb.T_e);
    CHECK(rb.n_e == 3);
    CHECK(rb.tau_e == 2);
    CHECK(rb.d_e() == 0);
}

TEST_CASE("all five borel blocks give idempotents with positive identity value") {
    for (uint32_t p : {2u, 3u}) {
        Env env(Family::BorelSL3, p, 1, 1);
        for (const auto& pair : standard_pairs(Family::BorelSL3, p, p)) {
            ResolvedBlock rb = resolve_block(env.ctx, pair, *env.tower);
            CHECK(convolve(rb.T_e, rb.T_e) == rb.T_e);
            Cyclotomic at1 = rb.T_e.v[0][0];
            REQUIRE(at1.is_rational());
            CHECK(at1.rational_value().is_positive());
        }
    }
}

TEST_CASE("block invariants per case") {
    Env env(Family::BorelSL3, 2, 1, 1);
    std::map<std::string, std::tuple<long long, uint32_t, long long>> expect = {
        {"case1", {3, 2, 0}}, {"case2", {2, 1, 1}}, {"case3", {2, 1, 1}}, {"case4", {1, 0, 2}}, {"case5", {0, 1, 2}},
    };
    for (const auto& pair : standard_pairs(Family::BorelSL3, 2, 2)) {
        ResolvedBlock rb = resolve_block(env.ctx, pair, *env.tower);
        auto [ne, te, de] = expect[pair.name];
        CHECK(rb.n_e == ne);
        CHECK(rb.tau_e == te);
        CHECK(rb.d_e() == de);
    }
    // heisenberg central pair: d_e = 1; torus: d_e = 0
    Env u3(Family::HeisenbergU3, 2, 1, 1);
    ResolvedBlock rbu = resolve_block(u3.ctx, make_pair(Family::HeisenbergU3, "central(1)", 2, 2), *u3.tower);
    CHECK(rbu.d_e() == 1);
    Env tz(Family::TorusZ2, 3, 1, 1);
    ResolvedBlock rbt = resolve_block(tz.ctx, make_pair(Family::TorusZ2, "torus", 3, 3), *tz.tower);
    CHECK(rbt.d_e() == 0);
}

TEST_CASE("packet idempotents: orthogonal and summing to the block idempotent") {
    for (uint32_t q : {2u, 3u}) {
        Env env(Family::BorelSL3, q, 1, 1);
        for (const auto& pname : {"case1", "case2", "case5"}) {
            auto pair = make_pair(Family::BorelSL3, pname, q, q);
            ResolvedBlock rb = resolve_block(env.ctx, pair, *env.tower);
            FunSpace sum = FunSpace::zero(env.ctx);
            for (uint32_t i = 0; i < rb.packets.size(); ++i) {
                const FunSpace& ti = rb.packets[i].idempotent;
                CHECK(convolve(ti, ti) == ti);
                for (uint32_t j = i + 1; j < rb.packets.size(); ++j)
                    CHECK(convolve(ti, rb.packets[j].idempotent).is_zero());
                sum += ti;
            }
            CHECK(sum == rb.T_e);
        }
    }
}

TEST_CASE("trivial torus pair gives the delta idempotent") {
    Env env(Family::SplitTorus, 2, 2, 1);
    auto pair = make_pair(Family::SplitTorus, "torus", 2, 4);
    ResolvedBlock rb = resolve_block(env.ctx, pair, *env.tower);
    FunSpace delta = FunSpace::zero(env.ctx);
    delta.v[0][0] = Cyclotomic::one();
    CHECK(rb.T_e == delta);
    // averaging idempotent per character
    CHECK(rb.packets.size() == 3);
    for (const auto& pk : rb.packets) {
        Cyclotomic v = pk.idempotent.v[0][0];
        CHECK(v == Cyclotomic(Rational(1, 3)));
    }
}

TEST_CASE("torus packet trace functions are the characters") {
    Env env(Family::SplitTorus, 2, 2, 1);
    ResolvedBlock rb = resolve_block(env.ctx, make_pair(Family::SplitTorus, "torus", 2, 4), *env.tower);
    for (uint32_t i = 0; i < rb.packets.size(); ++i) {
        auto tf = rb.trace_functions(i);
        REQUIRE(tf.size() == 1);
        CHECK(inner_product(tf[0], tf[0]) == Cyclotomic::one());
        // the averaging idempotent fixes its own character
        Cyclotomic lam = Cyclotomic::zero();
        const auto& cd = env.ctx.untwisted().classes;
        for (uint32_t c = 0; c < cd.count(); ++c)
            lam += Cyclotomic(Rational((long long)cd.sizes[c])) * rb.packets[i].idempotent.v[0][c] *
                   tf[0].v[0][cd.inverse_class[c]];
        CHECK(lam == Cyclotomic::one());
    }
}

TEST_CASE("orbit counting on torus-rtimes-z2") {
    for (uint32_t q : {3u, 5u}) {
        Env env(Family::TorusZ2, q, 1, 1);
        auto tcd = torus_character_data(env.ctx, "T", *env.tower);
        CHECK(expected_orbit_count(env.ctx, tcd) == Rational((long long)q));
        CHECK(tcd.f_stable_count() == q);
        // every orbit is F-stable at level 1 here
        CHECK(tcd.orbits.size() == q);
    }
    // q = 3 example from the counting formula: (2 + 4)/2 = 3
    Env env(Family::TorusZ2, 3, 1, 1);
    auto tcd = torus_character_data(env.ctx, "T", *env.tower);
    CHECK(tcd.forms[0].group->size() + tcd.forms[1].group->size() == 6);
}

TEST_CASE("torus-rtimes-z2 packet idempotents partition the block") {
    Env env(Family::TorusZ2, 3, 1, 1);
    ResolvedBlock rb = resolve_block(env.ctx, make_pair(Family::TorusZ2, "torus", 3, 3), *env.tower);
    REQUIRE(rb.packets.size() == 3);
    FunSpace sum = FunSpace::zero(env.ctx);
    for (uint32_t i = 0; i < rb.packets.size(); ++i) {
        const FunSpace& ti = rb.packets[i].idempotent;
        CHECK(convolve(ti, ti) == ti);
        for (uint32_t j = i + 1; j < rb.packets.size(); ++j)
            CHECK(convolve(ti, rb.packets[j].idempotent).is_zero());
        sum += ti;
    }
    CHECK(sum == rb.T_e);
}

TEST_CASE("case4 trace functions at q=4: nine orthonormal functions") {
    Env env(Family::BorelSL3, 2, 2, 1);
    ResolvedBlock rb = resolve_block(env.ctx, make_pair(Family::BorelSL3, "case4", 2, 4), *env.tower);
    REQUIRE(rb.packets.size() == 1);
    CHECK(rb.packet_fixed_count(0) == 9);
    auto tf = rb.trace_functions(0);
    REQUIRE(tf.size() == 9);
    for (uint32_t i = 0; i < 9; ++i)
        for (uint32_t j = i; j < 9; ++j) {
            Cyclotomic ip = inner_product(tf[i], tf[j]);
            if (i == j) CHECK(ip == Cyclotomic::one());
            else CHECK(ip.is_zero());
        }
}

TEST_CASE("case4 at q=2: a single trace function") {
    Env env(Family::BorelSL3, 2, 1, 1);
    ResolvedBlock rb = resolve_block(env.ctx, make_pair(Family::BorelSL3, "case4", 2, 2), *env.tower);
    CHECK(rb.packet_fixed_count(0) == 1);
    auto tf = rb.trace_functions(0);
    REQUIRE(tf.size() == 1);
    CHECK(inner_product(tf[0], tf[0]) == Cyclotomic::one());
    // block idempotent is idempotent
    CHECK(convolve(rb.T_e, rb.T_e) == rb.T_e);
}

TEST_CASE("heisenberg central block") {
    Env env(Family::HeisenbergU3, 3, 1, 1);
    ResolvedBlock rb = resolve_block(env.ctx, make_pair(Family::HeisenbergU3, "central(1)", 3, 3), *env.tower);
    CHECK(convolve(rb.T_e, rb.T_e) == rb.T_e);
    REQUIRE(rb.packets.size() == 1);
    auto tf = rb.trace_functions(0);
    REQUIRE(tf.size() == 1);
    CHECK(inner_product(tf[0], tf[0]) == Cyclotomic::one());
    // the trace function is supported on the center with value q psi(c) up to phase
    const auto& cd = env.ctx.untwisted().classes;
    for (uint32_t c = 0; c < cd.count(); ++c) {
        bool inZ = env.ctx.ambient->in_subgroup("Z", env.ctx.untwisted().group->parent_id(cd.reps[c]));
        if (!inZ) CHECK(tf[0].v[0][c].is_zero());
    }
}

TEST_CASE("mu3 family blocks") {
    Env env(Family::Mu3TimesU3, 2, 2, 1); // q = 4 = 1 mod 3: three forms
    REQUIRE(env.ctx.forms.size() == 3);
    ResolvedBlock rb = resolve_block(env.ctx, make_pair(Family::Mu3TimesU3, "linear(1,1)", 2, 4), *env.tower);
    CHECK(convolve(rb.T_e, rb.T_e) == rb.T_e);
    CHECK(rb.packet_fixed_count(0) == 9);
    auto tf = rb.trace_functions(0);
    REQUIRE(tf.size() == 9);
    for (uint32_t i = 0; i < 9; ++i)
        for (uint32_t j = i; j < 9; ++j) {
            Cyclotomic ip = inner_product(tf[i], tf[j]);
            if (i == j) CHECK(ip == Cyclotomic::one());
            else CHECK(ip.is_zero());
        }
}
