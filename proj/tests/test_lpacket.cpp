#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csolv/lpacket.hpp"

#include <map>

using namespace csolv;

namespace {

struct Env {
    std::unique_ptr<FieldTower> tower;
    FrobContext ctx;
    AllIrreps ai;
    std::vector<ResolvedBlock> blocks;
    Partition part;

    Env(Family f, uint32_t p, uint32_t k, uint32_t m, uint32_t rank = 1)
        : tower(std::make_unique<FieldTower>(p, std::set<uint32_t>{1})) {
        GroupSpec spec{f, p, k, rank};
        ctx = build_context(spec, m, *tower);
        ai = all_irreps(ctx);
        uint64_t q = 1;
        for (uint32_t i = 0; i < k; ++i) q *= p;
        for (const auto& pr : standard_pairs(f, p, q)) blocks.push_back(resolve_block(ctx, pr, *tower));
        part = partition_irreps(ctx, ai, blocks);
    }
};

} // namespace

TEST_CASE("B(F_2): five singleton blocks") {
    Env env(Family::BorelSL3, 2, 1, 1);
    CHECK(env.part.complete);
    CHECK(env.part.oracles_agree);
    std::vector<uint64_t> block_sizes, degs;
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        uint64_t sz = 0;
        for (const auto& pk : env.part.members[b]) sz += pk.size();
        block_sizes.push_back(sz);
    }
    CHECK(block_sizes == std::vector<uint64_t>{1, 1, 1, 1, 1});
    std::map<std::string, uint64_t> deg_by_case;
    for (uint32_t b = 0; b < env.blocks.size(); ++b)
        deg_by_case[env.blocks[b].pair.name] = env.ai.degree(env.part.members[b][0][0]);
    CHECK(deg_by_case["case1"] == 1);
    CHECK(deg_by_case["case2"] == 1);
    CHECK(deg_by_case["case3"] == 1);
    CHECK(deg_by_case["case4"] == 1);
    CHECK(deg_by_case["case5"] == 2);
}

TEST_CASE("B(F_4): block sizes [9,3,3,9,3] with degrees [1,3,3,3,12]") {
    Env env(Family::BorelSL3, 2, 2, 1);
    REQUIRE(env.part.complete);
    REQUIRE(env.part.oracles_agree);
    std::map<std::string, std::pair<uint64_t, uint64_t>> got; // name -> (size, max degree)
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        uint64_t sz = 0, dg = 0;
        for (const auto& pk : env.part.members[b])
            for (uint32_t i : pk) {
                ++sz;
                dg = std::max(dg, env.ai.degree(i));
            }
        got[env.blocks[b].pair.name] = {sz, dg};
    }
    CHECK(got["case1"] == std::pair<uint64_t, uint64_t>{9, 1});
    CHECK(got["case2"] == std::pair<uint64_t, uint64_t>{3, 3});
    CHECK(got["case3"] == std::pair<uint64_t, uint64_t>{3, 3});
    CHECK(got["case4"] == std::pair<uint64_t, uint64_t>{9, 3});
    CHECK(got["case5"] == std::pair<uint64_t, uint64_t>{3, 12});
    // case 5: three singleton packets of degree q(q-1) = 12; case 4: one packet of nine
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        if (env.blocks[b].pair.name == "case5") {
            CHECK(env.part.members[b].size() == 3);
            for (const auto& pk : env.part.members[b]) CHECK(pk.size() == 1);
        }
        if (env.blocks[b].pair.name == "case4") {
            REQUIRE(env.part.members[b].size() == 1);
            CHECK(env.part.members[b][0].size() == 9);
        }
    }
}

TEST_CASE("B(F_3): case 4 is a single degree-4 character (p = 3)") {
    Env env(Family::BorelSL3, 3, 1, 1);
    REQUIRE(env.part.complete);
    REQUIRE(env.part.oracles_agree);
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        if (env.blocks[b].pair.name != "case4") continue;
        REQUIRE(env.part.members[b].size() == 1);
        REQUIRE(env.part.members[b][0].size() == 1);
        CHECK(env.ai.degree(env.part.members[b][0][0]) == 4);
    }
}

TEST_CASE("structural checks pass on borel q=2,3,4") {
    for (auto [p, k] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}, {2, 2}}) {
        Env env(Family::BorelSL3, p, k, 1);
        REQUIRE(env.part.complete);
        for (uint32_t b = 0; b < env.blocks.size(); ++b) {
            CheckList cl = structural_checks(env.ctx, env.blocks[b], env.part, b, env.ai);
            for (const auto& [name, ok] : cl.checks) {
                INFO(name);
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("structural checks on the toys") {
    Env tz(Family::TorusZ2, 3, 1, 1);
    REQUIRE(tz.part.complete);
    CHECK(tz.blocks.size() == 1);
    CHECK(tz.part.members[0].size() == 3); // q packets
    std::multiset<size_t> sizes;
    for (const auto& pk : tz.part.members[0]) sizes.insert(pk.size());
    CHECK(sizes == std::multiset<size_t>{1, 4, 4});
    CheckList cl = structural_checks(tz.ctx, tz.blocks[0], tz.part, 0, tz.ai);
    for (const auto& [name, ok] : cl.checks) {
        INFO(name);
        CHECK(ok);
    }

    Env u3(Family::HeisenbergU3, 3, 1, 1);
    REQUIRE(u3.part.complete);
    REQUIRE(u3.part.oracles_agree);
    for (uint32_t b = 0; b < u3.blocks.size(); ++b) {
        CheckList cl2 = structural_checks(u3.ctx, u3.blocks[b], u3.part, b, u3.ai);
        for (const auto& [name, ok] : cl2.checks) {
            INFO(name);
            CHECK(ok);
        }
    }

    Env mu(Family::Mu3TimesU3, 2, 2, 1);
    REQUIRE(mu.part.complete);
    REQUIRE(mu.part.oracles_agree);
    for (uint32_t b = 0; b < mu.blocks.size(); ++b) {
        CheckList cl3 = structural_checks(mu.ctx, mu.blocks[b], mu.part, b, mu.ai);
        for (const auto& [name, ok] : cl3.checks) {
            INFO(name);
            CHECK(ok);
        }
    }
}

TEST_CASE("S-matrices: torus 1x1") {
    Env env(Family::SplitTorus, 2, 2, 1);
    REQUIRE(env.part.complete);
    for (uint32_t pk = 0; pk < env.part.members[0].size(); ++pk) {
        SMatrixResult r = transition_and_crossed_s(env.ctx, env.blocks[0], 0, pk, env.part, env.ai);
        CHECK(r.checks.pass());
        CHECK(r.dim_m == 1);
        CHECK(r.s_plus[0][0].is_root_of_unity());
    }
}

TEST_CASE("S-matrices: B(F_2) case 4 is [3]") {
    Env env(Family::BorelSL3, 2, 1, 1);
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        if (env.blocks[b].pair.name != "case4") continue;
        SMatrixResult r = transition_and_crossed_s(env.ctx, env.blocks[b], b, 0, env.part, env.ai);
        CHECK(r.checks.pass());
        CHECK(r.dim_m == 9);
        // S+ = sqrt(9) * (unimodular): one entry of modulus 3
        CHECK(r.s_plus[0][0] * r.s_plus[0][0].conjugate() == Cyclotomic(9));
    }
}

TEST_CASE("S-matrices: B(F_4) case 4 matches the double of mu3") {
    Env env(Family::BorelSL3, 2, 2, 1);
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        if (env.blocks[b].pair.name != "case4") continue;
        SMatrixResult r = transition_and_crossed_s(env.ctx, env.blocks[b], b, 0, env.part, env.ai);
        for (const auto& [name, ok] : r.checks.checks) {
            INFO(name);
            CHECK(ok);
        }
        REQUIRE(r.s_plus.size() == 9);
        ModularData d = double_abelian(FiniteAbelianGroup{{3}});
        CHECK(matrices_match_up_to_phases(r.s_plus, d.S));
        // negative control: the toric-code S-matrix padded cannot match
        CHECK(!matrices_match_up_to_phases(r.s_plus, pointed_modular(double_metric_group({{3}})).S == d.S
                                                         ? [&] {
                                                               auto S = d.S;
                                                               S[1][1] = S[1][1] * Cyclotomic::root_of_unity(3, 1);
                                                               S[1][4] = S[1][4] * Cyclotomic::root_of_unity(3, 1);
                                                               return S;
                                                           }()
                                                         : d.S));
    }
}

TEST_CASE("cross-packet inner products vanish") {
    Env env(Family::BorelSL3, 2, 2, 1);
    // trace functions of case 5 packets against case 4 members
    uint32_t b4 = 0, b5 = 0;
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        if (env.blocks[b].pair.name == "case4") b4 = b;
        if (env.blocks[b].pair.name == "case5") b5 = b;
    }
    auto tf5 = env.blocks[b5].trace_functions(0);
    for (uint32_t i : env.part.members[b4][0]) {
        FunSpace chi = env.ai.character(i);
        for (const auto& t : tf5) CHECK(inner_product(t, chi).is_zero());
    }
}

TEST_CASE("mu3 family at q = 2: single form, all blocks singleton") {
    Env env(Family::Mu3TimesU3, 2, 1, 1);
    REQUIRE(env.ctx.forms.size() == 1);
    REQUIRE(env.part.complete);
    REQUIRE(env.part.oracles_agree);
    // q^2 linear blocks + (q-1) central blocks, each one packet of one character
    CHECK(env.blocks.size() == 5);
    for (uint32_t b = 0; b < env.blocks.size(); ++b) {
        REQUIRE(env.part.members[b].size() == 1);
        CHECK(env.part.members[b][0].size() == 1);
        CheckList cl = structural_checks(env.ctx, env.blocks[b], env.part, b, env.ai);
        for (const auto& [name, ok] : cl.checks) {
            INFO(name);
            CHECK(ok);
        }
    }
}

TEST_CASE("S-matrices across all blocks at q = 5") {
    Env env(Family::BorelSL3, 5, 1, 1);
    REQUIRE(env.part.complete);
    for (uint32_t b = 0; b < env.blocks.size(); ++b)
        for (uint32_t pk = 0; pk < env.blocks[b].packets.size(); ++pk) {
            SMatrixResult r = transition_and_crossed_s(env.ctx, env.blocks[b], b, pk, env.part, env.ai);
            for (const auto& [name, ok] : r.checks.checks) {
                std::string tag = env.blocks[b].pair.name + "." + name;
                INFO(tag);
                CHECK(ok);
            }
        }
}
