// Acceptance suite: one line per criterion, everything exact, with the stated
// wall-clock budgets enforced.

#include "csolv/pipeline.hpp"
#include "csolv/shintani.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace csolv;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                   .count() /
               1000.0;
    }
};

void criterion(int n, const std::string& name, double budget_s, const std::function<bool(std::string&)>& body) {
    Timer t;
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    double secs = t.seconds();
    if (secs > budget_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over budget: ") +
                  std::to_string(secs) + "s > " + std::to_string(budget_s) + "s";
    }
    if (!ok) ++g_failures;
    std::printf("CRITERION %d %-34s %s  (%.1fs)%s%s\n", n, name.c_str(), ok ? "PASS" : "FAIL", secs,
                detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
}

struct BorelRun {
    std::unique_ptr<FieldTower> tower;
    FrobContext ctx;
    AllIrreps ai;
    std::vector<ResolvedBlock> blocks;
    Partition part;
    BorelRun(uint32_t p, uint32_t k) : tower(std::make_unique<FieldTower>(p, std::set<uint32_t>{1})) {
        uint64_t q = 1;
        for (uint32_t i = 0; i < k; ++i) q *= p;
        ctx = build_context({Family::BorelSL3, p, k, 1}, 1, *tower);
        ai = all_irreps(ctx);
        for (const auto& pr : standard_pairs(Family::BorelSL3, p, q)) blocks.push_back(resolve_block(ctx, pr, *tower));
        part = partition_irreps(ctx, ai, blocks);
    }
    uint32_t block_index(const std::string& name) const {
        for (uint32_t b = 0; b < blocks.size(); ++b)
            if (blocks[b].pair.name == name) return b;
        throw lpacket_error("no block " + name);
    }
};

bool golden_counts_for(BorelRun& run, uint64_t q, uint32_t p, std::string& why) {
    if (!run.part.complete || !run.part.oracles_agree) {
        why = "partition incomplete at q=" + std::to_string(q);
        return false;
    }
    auto sizes_of = [&](const std::string& name) {
        std::vector<std::pair<size_t, std::multiset<uint64_t>>> out;
        uint32_t b = run.block_index(name);
        for (const auto& pk : run.part.members[b]) {
            std::multiset<uint64_t> degs;
            for (uint32_t i : pk) degs.insert(run.ai.degree(i));
            out.push_back({pk.size(), degs});
        }
        return out;
    };
    auto expect = [&](bool cond, const std::string& msg) {
        if (!cond && why.empty()) why = msg + " at q=" + std::to_string(q);
        return cond;
    };
    bool ok = true;
    // case 5: q-1 singleton packets of degree q(q-1)
    auto c5 = sizes_of("case5");
    ok &= expect(c5.size() == q - 1, "case5 packet count");
    for (auto& [sz, degs] : c5) ok &= expect(sz == 1 && *degs.begin() == q * (q - 1), "case5 packet shape");
    // case 4 by residue
    auto c4 = sizes_of("case4");
    if (p == 3) {
        ok &= expect(c4.size() == 1 && c4[0].first == 1 && *c4[0].second.begin() == (q - 1) * (q - 1),
                     "case4 at p=3");
    } else if (q % 3 == 1) {
        ok &= expect(c4.size() == 1 && c4[0].first == 9, "case4 packet of nine");
        for (uint64_t d : c4[0].second) ok &= expect(d == (q - 1) * (q - 1) / 3, "case4 degree (q-1)^2/3");
    } else {
        ok &= expect(c4.size() == 1 && c4[0].first == 1 && *c4[0].second.begin() == (q - 1) * (q - 1),
                     "case4 single character");
    }
    // case 1: (q-1)^2 linear characters in singleton packets
    auto c1 = sizes_of("case1");
    ok &= expect(c1.size() == (q - 1) * (q - 1), "case1 packet count");
    for (auto& [sz, degs] : c1) ok &= expect(sz == 1 && *degs.begin() == 1, "case1 packet shape");
    // cases 2, 3: q-1 singleton packets of degree q-1
    for (const char* name : {"case2", "case3"}) {
        auto cc = sizes_of(name);
        ok &= expect(cc.size() == q - 1, std::string(name) + " packet count");
        for (auto& [sz, degs] : cc) ok &= expect(sz == 1 && *degs.begin() == q - 1, std::string(name) + " shape");
    }
    // the blocks exhaust Irrep(B(F_q)) with zero tolerance
    uint64_t total = 0;
    for (const auto& blk : run.part.members)
        for (const auto& pk : blk) total += pk.size();
    ok &= expect(total == run.ai.count(), "partition covers Irrep(G,F)");
    return ok;
}

} // namespace

int main() {
    std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<BorelRun>> runs;

    criterion(1, "borel golden counts q=2,3,4,5", 60.0, [&](std::string& why) {
        bool ok = true;
        for (auto [p, k] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
            Timer tq;
            runs[{p, k}] = std::make_unique<BorelRun>(p, k);
            uint64_t q = 1;
            for (uint32_t i = 0; i < k; ++i) q *= p;
            ok &= golden_counts_for(*runs[{p, k}], q, p, why);
            if (q == 5 && tq.seconds() > 60.0) {
                ok = false;
                why = "q=5 run exceeded 60s";
            }
        }
        return ok;
    });

    criterion(2, "dimension formula + sum rules", 120.0, [&](std::string& why) {
        bool ok = true;
        for (auto [p, k] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}, {2, 2}}) {
            BorelRun& run = *runs.at({p, k});
            for (uint32_t b = 0; b < run.blocks.size(); ++b) {
                CheckList cl = structural_checks(run.ctx, run.blocks[b], run.part, b, run.ai);
                for (auto& [name, good] : cl.checks)
                    if (!good) {
                        ok = false;
                        if (why.empty()) why = name;
                    }
            }
            // Heisenberg sub-runs on U_3(F_q): central blocks satisfy sum (dim W)^2 = q^{2 d_e}
            FieldTower tw(p, {1});
            uint64_t q = 1;
            for (uint32_t i = 0; i < k; ++i) q *= p;
            auto ctx = build_context({Family::HeisenbergU3, p, k, 1}, 1, tw);
            AllIrreps ai = all_irreps(ctx);
            std::vector<ResolvedBlock> blocks;
            for (const auto& pr : standard_pairs(Family::HeisenbergU3, p, q))
                blocks.push_back(resolve_block(ctx, pr, tw));
            Partition part = partition_irreps(ctx, ai, blocks);
            if (!part.complete || !part.oracles_agree) {
                ok = false;
                if (why.empty()) why = "heisenberg partition failed";
            }
            for (uint32_t b = 0; b < blocks.size(); ++b) {
                CheckList cl = structural_checks(ctx, blocks[b], part, b, ai);
                for (auto& [name, good] : cl.checks)
                    if (!good) {
                        ok = false;
                        if (why.empty()) why = "heisenberg " + name;
                    }
            }
        }
        return ok;
    });

    criterion(3, "crossed S-matrix at q=4 case4", 60.0, [&](std::string& why) {
        BorelRun& run = *runs.at({2u, 2u});
        uint32_t b = run.block_index("case4");
        SMatrixResult r = transition_and_crossed_s(run.ctx, run.blocks[b], b, 0, run.part, run.ai);
        bool ok = true;
        for (auto& [name, good] : r.checks.checks)
            if (!good) {
                ok = false;
                why = name;
            }
        if (r.s_plus.size() != 9 || r.dim_m != 9) {
            ok = false;
            why = "expected a 9x9 packet of dimension 9";
        }
        ModularData d = double_abelian(FiniteAbelianGroup{{3}});
        if (!matrices_match_up_to_phases(r.s_plus, d.S)) {
            ok = false;
            why = "S+ does not match the double of mu3";
        }
        return ok;
    });

    criterion(4, "modular data verification", 30.0, [&](std::string& why) {
        MetricSampler sampler(0);
        for (int i = 0; i < 20; ++i) {
            MetricGroup m = sampler.sample(16);
            if (m.K.size() > 16) {
                why = "sampled group too large";
                return false;
            }
            if (!verify_modular(pointed_modular(m)).pass()) {
                why = "sampled metric group failed verification";
                return false;
            }
        }
        for (const auto& A : std::vector<FiniteAbelianGroup>{{{1}}, {{2}}, {{3}}, {{4}}, {{2, 2}}}) {
            auto r = verify_modular(double_abelian(A), true);
            if (!r.pass()) {
                why = "double failed: " + r.first_failure();
                return false;
            }
        }
        FiniteAbelianGroup mu3{{3}};
        if (fixed_labels(double_automorphism(mu3, {0, 1, 2})).size() != 9 ||
            fixed_labels(double_automorphism(mu3, {0, 2, 1})).size() != 1) {
            why = "mu3 fixed-point counts (expected 9 and 1)";
            return false;
        }
        // the fixed counts match the case-4 packet sizes at q = 4 and q = 2
        auto size_of_case4 = [&](uint32_t p, uint32_t k) {
            BorelRun& run = *runs.at({p, k});
            uint32_t b = run.block_index("case4");
            return run.part.members[b][0].size();
        };
        if (size_of_case4(2, 2) != 9 || size_of_case4(2, 1) != 1) {
            why = "packet sizes do not match the fixed-point counts";
            return false;
        }
        return true;
    });

    criterion(5, "packet counting on torus x| Z/2", 30.0, [&](std::string& why) {
        for (uint32_t p : {3u, 5u}) {
            FieldTower tw(p, {1});
            auto ctx = build_context({Family::TorusZ2, p, 1, 1}, 1, tw);
            AllIrreps ai = all_irreps(ctx);
            std::vector<ResolvedBlock> blocks;
            for (const auto& pr : standard_pairs(Family::TorusZ2, p, p)) blocks.push_back(resolve_block(ctx, pr, tw));
            Partition part = partition_irreps(ctx, ai, blocks);
            if (!part.complete) {
                why = "partition incomplete at q=" + std::to_string(p);
                return false;
            }
            if (blocks[0].packets.size() != p) {
                why = "packet count " + std::to_string(blocks[0].packets.size()) + " != q = " + std::to_string(p);
                return false;
            }
            auto tcd = torus_character_data(ctx, "T", tw);
            if (!(expected_orbit_count(ctx, tcd) == Rational((long long)p))) {
                why = "orbit-count formula disagrees at q=" + std::to_string(p);
                return false;
            }
        }
        return true;
    });

    criterion(6, "shintani pipeline", 300.0, [&](std::string& why) {
        for (auto [fam, p, mmax] : std::vector<std::tuple<Family, uint32_t, uint32_t>>{
                 {Family::SplitTorus, 2, 6}, {Family::SplitTorus, 3, 6}, {Family::BorelSL3, 2, 3}}) {
            FieldTower tw(p, {1});
            ShintaniOutcome res = run_shintani({fam, p, 1, 1}, mmax, tw);
            for (auto& [name, good] : res.checks.checks)
                if (!good) {
                    why = family_name(fam) + " q=" + std::to_string(p) + ": " + name;
                    return false;
                }
            for (auto& pp : res.periods) {
                if (pp.m0 <= 0) {
                    why = family_name(fam) + " " + pp.pair + "/" + pp.packet + ": no period found";
                    return false;
                }
                if (!pp.almost_characters_match) {
                    why = family_name(fam) + " " + pp.pair + "/" + pp.packet + ": almost characters mismatch";
                    return false;
                }
            }
        }
        return true;
    });

    criterion(7, "property suites + determinism", 120.0, [&](std::string& why) {
        // both block-assignment oracles agree on every configuration already run
        for (auto& [key, run] : runs)
            if (!run->part.oracles_agree || !run->part.complete) {
                why = "oracle disagreement on a borel run";
                return false;
            }
        // norm bijectivity and the |T^{F^m}| = |T^F| |ker| identity at every shipped level
        for (uint32_t p : {2u, 3u}) {
            FieldTower tw(p, {1});
            auto low = build_context({Family::SplitTorus, p, 1, 1}, 1, tw);
            for (uint32_t m = 2; m <= 6; ++m) {
                auto high = build_context({Family::SplitTorus, p, 1, 1}, m, tw);
                NormMap nm(high, low, tw);
                nm.verify_bijectivity();
                const Form& f = high.untwisted();
                uint64_t ker = 0;
                for (uint32_t s = 0; s < f.group->size(); ++s) {
                    uint32_t acc = s, fx = s;
                    for (uint32_t i = 1; i < m; ++i) {
                        fx = f.frob_local[fx];
                        acc = f.group->mul(acc, fx);
                    }
                    if (acc == f.group->identity()) ++ker;
                }
                if (f.group->size() != low.untwisted().group->size() * ker) {
                    why = "norm kernel count failed at q=" + std::to_string(p) + ", m=" + std::to_string(m);
                    return false;
                }
            }
        }
        {
            FieldTower tw(2, {1});
            auto low = build_context({Family::BorelSL3, 2, 1, 1}, 1, tw);
            for (uint32_t m = 2; m <= 3; ++m) {
                auto high = build_context({Family::BorelSL3, 2, 1, 1}, m, tw);
                NormMap nm(high, low, tw);
                nm.verify_bijectivity();
            }
        }
        // byte-identical machine sections across repeated runs
        RunConfig cfg;
        cfg.group = {Family::BorelSL3, 2, 2, 1};
        std::ostringstream a, b;
        if (run_command(cfg, "verify-all", a) != 0 || run_command(cfg, "verify-all", b) != 0) {
            why = "verify-all did not pass";
            return false;
        }
        if (a.str() != b.str() || a.str().find("CHECK") == std::string::npos) {
            why = "reports differ between identical runs";
            return false;
        }
        return true;
    });

    if (g_failures == 0) std::printf("ACCEPTANCE: all 7 criteria PASS\n");
    else std::printf("ACCEPTANCE: %d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
