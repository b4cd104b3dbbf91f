#include "csolv/pipeline.hpp"

#include "csolv/lpacket.hpp"
#include "csolv/shintani.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>

namespace csolv {

namespace {

struct Session {
    RunConfig cfg;
    std::unique_ptr<FieldTower> tower;
    std::unique_ptr<FrobContext> ctx1;
    std::unique_ptr<AllIrreps> ai;
    std::vector<ResolvedBlock> blocks;
    Partition part;
    bool partitioned = false;

    explicit Session(const RunConfig& c) : cfg(c) {
        tower = std::make_unique<FieldTower>(cfg.group.p, std::set<uint32_t>{1});
    }

    std::vector<AdmissiblePairSpec> pair_list() {
        std::vector<AdmissiblePairSpec> out;
        for (const auto& text : cfg.pairs) {
            if (text == "standard") {
                for (auto& p : standard_pairs(cfg.group.family, cfg.group.p, cfg.q())) out.push_back(p);
            } else {
                out.push_back(make_pair(cfg.group.family, text, cfg.group.p, cfg.q()));
            }
        }
        return out;
    }

    void ensure_level1() {
        if (ctx1) return;
        ctx1 = std::make_unique<FrobContext>(build_context(cfg.group, 1, *tower, cfg.cap));
        ai = std::make_unique<AllIrreps>(all_irreps(*ctx1));
    }

    void ensure_partition() {
        if (partitioned) return;
        ensure_level1();
        for (const auto& pr : pair_list()) blocks.push_back(resolve_block(*ctx1, pr, *tower));
        part = partition_irreps(*ctx1, *ai, blocks);
        partitioned = true;
    }
};

void emit_chartable(Session& s, Report& rep) {
    auto ctx = build_context(s.cfg.group, s.cfg.m, *s.tower, s.cfg.cap);
    for (uint32_t t = 0; t < (uint32_t)ctx.forms.size(); ++t) {
        CharacterTable tab(ctx.forms[t].group, ctx.forms[t].classes);
        const std::string base = "chartable.form_" + ctx.forms[t].label;
        rep.note("form " + ctx.forms[t].label + ": |G| = " + std::to_string(ctx.forms[t].group->size()) + ", " +
                 std::to_string(tab.count()) + " classes");
        uint64_t sumsq = 0;
        std::ostringstream degs;
        for (uint32_t i = 0; i < tab.count(); ++i) {
            sumsq += tab.degree(i) * tab.degree(i);
            degs << (i ? " " : "") << tab.degree(i);
        }
        rep.note("degrees: " + degs.str());
        rep.check(base + ".sum_of_squares", sumsq == ctx.forms[t].group->size());
        rep.check(base + ".irreducible_count_eq_class_count", tab.count() == ctx.forms[t].classes.count());
        for (uint32_t i = 0; i < tab.count(); ++i) {
            rep.value(base + ".degree[" + std::to_string(i) + "]", std::to_string(tab.degree(i)));
            for (uint32_t c = 0; c < tab.count(); ++c)
                rep.value(base + ".chi[" + std::to_string(i) + "][" + std::to_string(c) + "]",
                          tab.value(i, c).serialize());
        }
        // exact column orthogonality at desk scale
        if (ctx.forms[t].group->size() <= 3000) {
            bool ok = true;
            for (uint32_t c1 = 0; c1 < tab.count() && ok; ++c1)
                for (uint32_t c2 = c1; c2 < tab.count() && ok; ++c2)
                    if (!tab.column_orthogonality_exact(c1, c2)) ok = false;
            rep.check(base + ".column_orthogonality", ok);
        }
    }
}

void emit_blocks(Session& s, Report& rep) {
    s.ensure_partition();
    rep.check("blocks.partition_complete", s.part.complete);
    rep.check("blocks.assignment_oracles_agree", s.part.oracles_agree);
    for (uint32_t b = 0; b < (uint32_t)s.blocks.size(); ++b) {
        const std::string base = "blocks." + s.blocks[b].pair.name;
        uint64_t sz = 0;
        std::vector<uint64_t> degs;
        for (const auto& pk : s.part.members[b])
            for (uint32_t i : pk) {
                ++sz;
                degs.push_back(s.ai->degree(i));
            }
        std::sort(degs.begin(), degs.end());
        rep.value(base + ".size", std::to_string(sz));
        std::ostringstream dd;
        for (size_t i = 0; i < degs.size(); ++i) dd << (i ? " " : "") << degs[i];
        rep.value(base + ".degrees", dd.str());
        rep.note("block " + s.blocks[b].pair.name + ": " + std::to_string(sz) + " irreducibles, degrees [" +
                 dd.str() + "]");
        rep.check(base + ".idempotent", convolve(s.blocks[b].T_e, s.blocks[b].T_e) == s.blocks[b].T_e);
    }
}

void emit_packets(Session& s, Report& rep) {
    s.ensure_partition();
    rep.check("packets.partition_complete", s.part.complete);
    for (uint32_t b = 0; b < (uint32_t)s.blocks.size(); ++b) {
        const ResolvedBlock& rb = s.blocks[b];
        const std::string base = "packets." + rb.pair.name;
        rep.value(base + ".count", std::to_string(rb.packets.size()));
        rep.value(base + ".n_e", std::to_string(rb.n_e));
        rep.value(base + ".tau_e", std::to_string(rb.tau_e));
        rep.value(base + ".d_e", std::to_string(rb.d_e()));
        for (uint32_t pk = 0; pk < (uint32_t)rb.packets.size(); ++pk) {
            rep.value(base + ".packet." + rb.packets[pk].label + ".size",
                      std::to_string(s.part.members[b][pk].size()));
        }
        if (rb.torus_data) {
            Rational expect = expected_orbit_count(*s.ctx1, *rb.torus_data);
            rep.check(base + ".orbit_count_formula",
                      Rational((long long)rb.torus_data->f_stable_count()) == expect);
        }
        CheckList cl = structural_checks(*s.ctx1, rb, s.part, b, *s.ai);
        for (const auto& [name, ok] : cl.checks) rep.check("packets." + name, ok);
    }
}

void emit_smatrix(Session& s, Report& rep) {
    s.ensure_partition();
    for (uint32_t b = 0; b < (uint32_t)s.blocks.size(); ++b) {
        const ResolvedBlock& rb = s.blocks[b];
        if (!rb.datum_supported()) {
            rep.note("block " + rb.pair.name + ": packet data not in the dictionary, skipping S-matrices");
            continue;
        }
        for (uint32_t pk = 0; pk < (uint32_t)rb.packets.size(); ++pk) {
            const std::string base = "smatrix." + rb.pair.name + "." + rb.packets[pk].label;
            SMatrixResult r = transition_and_crossed_s(*s.ctx1, rb, b, pk, s.part, *s.ai);
            rep.note("packet " + rb.pair.name + "/" + rb.packets[pk].label + ": " +
                     std::to_string(r.s_plus.size()) + "x" + std::to_string(r.s_plus.size()) +
                     " transition matrix, dim M = " + std::to_string(r.dim_m));
            for (const auto& [name, ok] : r.checks.checks) rep.check(base + "." + name, ok);
            rep.value(base + ".dim_m", std::to_string(r.dim_m));
            uint32_t n = (uint32_t)r.s_plus.size();
            for (uint32_t i = 0; i < n; ++i)
                for (uint32_t j = 0; j < n; ++j) {
                    rep.value(base + ".S_tilde[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                              r.s_tilde[i][j].serialize());
                    rep.value(base + ".S_plus[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                              r.s_plus[i][j].serialize());
                }
            if (n == 9) {
                ModularData d = double_abelian(FiniteAbelianGroup{{3}});
                rep.check(base + ".matches_double_mu3", matrices_match_up_to_phases(r.s_plus, d.S));
            }
        }
    }
}

void emit_modular(Session& s, Report& rep) {
    MetricSampler sampler(s.cfg.seed);
    bool sampled_ok = true;
    for (int i = 0; i < 20; ++i) {
        MetricGroup m = sampler.sample(16);
        ModularData d = pointed_modular(m);
        auto r = verify_modular(d);
        if (!r.pass()) sampled_ok = false;
    }
    rep.check("modular.sampled_metric_groups_pass", sampled_ok);
    std::vector<FiniteAbelianGroup> doubles = {{{1}}, {{2}}, {{3}}, {{4}}, {{2, 2}}};
    for (const auto& A : doubles) {
        std::ostringstream name;
        name << "modular.double";
        for (uint32_t d : A.orders) name << "_" << d;
        ModularData d = double_abelian(A);
        auto r = verify_modular(d, true);
        rep.check(name.str() + ".verlinde_and_unitarity", r.pass());
    }
    // Frobenius fixed points on the double of mu3: 9 when q = 1 mod 3, 1 otherwise
    FiniteAbelianGroup mu3{{3}};
    auto perm_id = double_automorphism(mu3, {0, 1, 2});
    auto perm_inv = double_automorphism(mu3, {0, 2, 1});
    rep.check("modular.mu3_identity_fixes_9", fixed_labels(perm_id).size() == 9);
    rep.check("modular.mu3_inversion_fixes_1", fixed_labels(perm_inv).size() == 1);
    ModularData dmu = double_abelian(mu3);
    for (uint32_t i = 0; i < 9; ++i)
        for (uint32_t j = 0; j < 9; ++j)
            rep.value("modular.double_mu3.S[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                      dmu.S[i][j].serialize());
}

void emit_shintani(Session& s, Report& rep) {
    uint32_t m_max = s.cfg.m_max ? s.cfg.m_max : s.cfg.default_m_max();
    ShintaniOutcome res = run_shintani(s.cfg.group, m_max, *s.tower, s.cfg.cap);
    rep.note("descent levels 1.." + std::to_string(m_max) + ", " + std::to_string(res.periods.size()) +
             " F-stable packets");
    for (const auto& p : res.periods)
        rep.note("packet " + p.pair + "/" + p.packet + ": m0 = " + std::to_string(p.m0) +
                 (p.almost_characters_match ? ", Shintani basis matches the trace-function basis"
                                            : ", no trace-basis match"));
    for (const auto& [name, ok] : res.checks.checks) rep.check(name, ok);
    for (const auto& p : res.periods) {
        const std::string base = "shintani." + p.pair + "." + p.packet;
        rep.value(base + ".m0", std::to_string(p.m0));
        rep.check(base + ".almost_characters", p.almost_characters_match);
        for (uint32_t m = 1; m <= (uint32_t)p.matrices.size(); ++m) {
            const auto& M = p.matrices[m - 1];
            for (uint32_t r = 0; r < (uint32_t)M.size(); ++r)
                for (uint32_t c = 0; c < (uint32_t)M[r].size(); ++c)
                    rep.value(base + ".Sh" + std::to_string(m) + "[" + std::to_string(r) + "][" +
                                  std::to_string(c) + "]",
                              M[r][c].serialize());
        }
    }
    for (uint32_t m = 1; m <= m_max; ++m)
        rep.value("shintani.m" + std::to_string(m) + ".basis_size",
                  std::to_string(res.bases_by_level[m - 1].size()));
}

} // namespace

int run_command(const RunConfig& cfg, const std::string& command, std::ostream& os) {
    Report rep;
    set_worker_threads(cfg.threads);
    try {
        Session s(cfg);
        rep.note("family " + family_name(cfg.group.family) + ", q = " + std::to_string(cfg.q()) +
                 (cfg.group.family == Family::SplitTorus ? ", rank " + std::to_string(cfg.group.rank) : ""));
        if (command == "chartable") emit_chartable(s, rep);
        else if (command == "blocks") emit_blocks(s, rep);
        else if (command == "packets") {
            emit_blocks(s, rep);
            emit_packets(s, rep);
        } else if (command == "smatrix") emit_smatrix(s, rep);
        else if (command == "modular") emit_modular(s, rep);
        else if (command == "shintani") emit_shintani(s, rep);
        else if (command == "verify-all") {
            emit_blocks(s, rep);
            emit_packets(s, rep);
            emit_smatrix(s, rep);
            emit_modular(s, rep);
            bool connected = cfg.group.family == Family::BorelSL3 || cfg.group.family == Family::SplitTorus ||
                             cfg.group.family == Family::HeisenbergU3;
            if (cfg.m_max && connected) emit_shintani(s, rep);
        } else {
            os << "error: unknown command '" << command
               << "' (use chartable, blocks, packets, smatrix, shintani, modular, verify-all)\n";
            return 2;
        }
    } catch (const config_error& e) {
        os << "error: " << e.what() << "\n";
        return 2;
    } catch (const size_error& e) {
        os << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        os << "error: " << e.what() << "\n";
        return 2;
    }
    os << rep.render();
    return rep.all_pass() ? 0 : 1;
}

} // namespace csolv
