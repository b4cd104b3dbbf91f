#include "csolv/shintani.hpp"

#include <algorithm>
#include <numeric>

namespace csolv {

std::optional<Cyclotomic> fun_equal_up_to_root(const FunSpace& f, const FunSpace& g) {
    if (!f.same_ambient(g)) return std::nullopt;
    for (size_t t = 0; t < g.v.size(); ++t)
        for (size_t c = 0; c < g.v[t].size(); ++c) {
            if (g.v[t][c].is_zero()) {
                if (!f.v[t][c].is_zero()) return std::nullopt;
                continue;
            }
            auto w = compare_up_to_root_of_unity(f.v[t][c], g.v[t][c]);
            if (!w) return std::nullopt;
            FunSpace scaled = g;
            scaled.scale(*w);
            if (scaled == f) return w;
            return std::nullopt;
        }
    return Cyclotomic::one(); // both zero
}

bool basis_matches_up_to_roots(const std::vector<FunSpace>& a, const std::vector<FunSpace>& b) {
    if (a.size() != b.size()) return false;
    std::vector<char> used(b.size(), 0);
    for (const auto& f : a) {
        bool hit = false;
        for (size_t j = 0; j < b.size() && !hit; ++j) {
            if (used[j]) continue;
            if (fun_equal_up_to_root(f, b[j])) {
                used[j] = 1;
                hit = true;
            }
        }
        if (!hit) return false;
    }
    return true;
}

namespace {

// mod-ell extension chooser; both tables must share the same prime
struct Extensions {
    std::shared_ptr<const SemidirectCyclic> gamma;
    std::shared_ptr<CharacterTable> gamma_table;
    // per base irrep: the chosen extension, by the least serialized value at sigma
    uint32_t choose(const CharacterTable& base_table, uint32_t irrep, uint32_t m) const {
        const CharacterTable& gt = *gamma_table;
        const ClassData& bcd = base_table.classes();
        std::vector<uint32_t> candidates;
        for (uint32_t th = 0; th < gt.count(); ++th) {
            if (gt.degree(th) != base_table.degree(irrep)) continue;
            bool match = true;
            for (uint32_t c = 0; c < bcd.count() && match; ++c) {
                uint32_t packed = gamma->pack(bcd.reps[c], 0);
                if (gt.value_mod(th, gt.classes().class_of[packed]) != base_table.value_mod(irrep, c)) match = false;
            }
            if (match) candidates.push_back(th);
        }
        if (candidates.size() != m)
            throw shintani_error("expected " + std::to_string(m) + " coset extensions, found " +
                                 std::to_string(candidates.size()));
        uint32_t sigma_class = gt.classes().class_of[gamma->pack(gamma->base().identity(), m > 1 ? 1 : 0)];
        uint32_t best = candidates[0];
        for (uint32_t cand : candidates)
            if (Cyclotomic::canonical_less(gt.value(cand, sigma_class), gt.value(best, sigma_class))) best = cand;
        return best;
    }
};

uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

struct LevelData {
    std::unique_ptr<FrobContext> ctx;
    std::shared_ptr<CharacterTable> table; // untwisted form, shared prime with Gamma
    Extensions ext;
    std::vector<uint32_t> frob_perm;
    std::vector<uint32_t> fstable;
    std::vector<FunSpace> descents;          // per fstable, in Fun([G], F)
    std::vector<ResolvedBlock> blocks;       // empty for the torus fast path
    std::vector<std::pair<uint32_t, uint32_t>> assignment; // per fstable: (block, packet at level m)
};

FunSpace descend(const FrobContext& ctx_1, const Extensions& ext, uint32_t theta, const TwistedClassSet& tc,
                 const NormMap& nm) {
    FunSpace out = FunSpace::zero(ctx_1);
    const CharacterTable& gt = *ext.gamma_table;
    uint32_t m = ext.gamma->order_m();
    for (uint32_t c = 0; c < tc.count(); ++c) {
        NormResult r = nm.transfer(tc.reps[c]);
        uint32_t packed = ext.gamma->pack(tc.reps[c], m > 1 ? 1 : 0);
        out.v[r.form][r.class_id] = gt.value(theta, gt.classes().class_of[packed]);
    }
    return out;
}

} // namespace

FunSpace shintani_descent_single(const FrobContext& ctx_m, const FrobContext& ctx_1, FieldTower& tower,
                                 const CharacterTable& table_m, uint32_t irrep) {
    const Form& f = ctx_m.untwisted();
    uint32_t m = ctx_m.m;
    CosetExtension ce = extend_f_stable(f.group, f.frob_local, m, table_m, irrep);
    Extensions ext{ce.gamma, ce.gamma_table};
    TwistedClassSet tc = frobenius_twisted_classes(ctx_m);
    NormMap nm(ctx_m, ctx_1, tower);
    (void)table_m;
    return descend(ctx_1, ext, ce.theta_index, tc, nm);
}

ShintaniOutcome run_shintani(const GroupSpec& spec, uint32_t m_max, FieldTower& tower, uint64_t cap) {
    if (spec.family == Family::Mu3TimesU3 || spec.family == Family::TorusZ2)
        throw shintani_error("Shintani descent is implemented for the connected families only");
    if (m_max < 1) throw shintani_error("m_max must be at least 1");
    ShintaniOutcome out;
    uint64_t q = ipow(spec.p, spec.k);
    bool torus = spec.family == Family::SplitTorus;

    // level 1 scaffolding
    auto ctx1 = std::make_unique<FrobContext>(build_context(spec, 1, tower, cap));
    AllIrreps ai1 = all_irreps(*ctx1);
    std::vector<ResolvedBlock> blocks1;
    for (const auto& pr : standard_pairs(spec.family, spec.p, q)) blocks1.push_back(resolve_block(*ctx1, pr, tower));
    Partition part1 = partition_irreps(*ctx1, ai1, blocks1);
    if (!part1.complete || !part1.oracles_agree) throw shintani_error("level-1 partition failed");
    std::vector<FunSpace> chars1;
    for (uint32_t i = 0; i < ai1.count(); ++i) chars1.push_back(ai1.character(i));
    // level-1 trace functions per (block, packet)
    std::vector<std::vector<std::vector<FunSpace>>> traces1(blocks1.size());
    for (uint32_t b = 0; b < blocks1.size(); ++b) {
        traces1[b].resize(blocks1[b].packets.size());
        for (uint32_t pk = 0; pk < blocks1[b].packets.size(); ++pk) traces1[b][pk] = blocks1[b].trace_functions(pk);
    }

    std::vector<LevelData> levels(m_max);
    for (uint32_t m = 1; m <= m_max; ++m) {
        LevelData& L = levels[m - 1];
        L.ctx = std::make_unique<FrobContext>(build_context(spec, m, tower, cap));
        const Form& f = L.ctx->untwisted();
        if (f.frob_local.empty()) throw shintani_error("Frobenius does not act on the level-m form");
        // shared Dixon prime across the group and its cover
        auto gamma = std::make_shared<SemidirectCyclic>(f.group, f.frob_local, m);
        uint64_t expo = 1;
        for (uint32_t g = 0; g < gamma->size(); ++g) expo = std::lcm(expo, gamma->element_order(g));
        uint64_t lo = 1;
        while (lo * lo <= 4 * (uint64_t)gamma->size()) ++lo;
        uint64_t ell = expo + 1;
        while (ell <= lo || !FieldTower::is_prime(ell)) ell += expo;
        L.table = std::make_shared<CharacterTable>(f.group, f.classes, ell);
        L.ext.gamma = gamma;
        L.ext.gamma_table = std::make_shared<CharacterTable>(gamma, conjugacy_classes(*gamma), ell);
        L.frob_perm = frobenius_action_on_irreps(*L.table, f.frob_local);
        for (uint32_t i = 0; i < L.frob_perm.size(); ++i)
            if (L.frob_perm[i] == i) L.fstable.push_back(i);

        TwistedClassSet tc = frobenius_twisted_classes(*L.ctx);
        NormMap nm(*L.ctx, *ctx1, tower);
        nm.verify_bijectivity();
        out.checks.add("norm.bijective.m" + std::to_string(m), true);
        // |T^{F^m}| = |T^F| |ker(norm map)| on the torus families
        if (torus) {
            uint64_t ker = 0;
            for (uint32_t s = 0; s < f.group->size(); ++s) {
                uint32_t acc = s, fx = s;
                for (uint32_t i = 1; i < m; ++i) {
                    fx = f.frob_local[fx];
                    acc = f.group->mul(acc, fx);
                }
                if (acc == f.group->identity()) ++ker;
            }
            uint64_t t1 = ctx1->untwisted().group->size();
            out.checks.add("norm.kernel_count.m" + std::to_string(m), f.group->size() == t1 * ker);
        }

        for (uint32_t w : L.fstable) {
            uint32_t theta = L.ext.choose(*L.table, w, m);
            L.descents.push_back(descend(*ctx1, L.ext, theta, tc, nm));
        }

        // orthonormality of the m-th Shintani basis
        bool ortho = true;
        for (size_t i = 0; i < L.descents.size() && ortho; ++i)
            for (size_t j = i; j < L.descents.size() && ortho; ++j) {
                Cyclotomic ip = inner_product(L.descents[i], L.descents[j]);
                Cyclotomic want = i == j ? Cyclotomic::one() : Cyclotomic::zero();
                if (!(ip == want)) ortho = false;
            }
        out.checks.add("shintani.orthonormal.m" + std::to_string(m), ortho);

        // level-m packet assignment of the F-stable irreducibles
        if (!torus) {
            for (const auto& pr : standard_pairs(spec.family, spec.p, q))
                L.blocks.push_back(resolve_block(*L.ctx, pr, tower));
            for (uint32_t wi = 0; wi < (uint32_t)L.fstable.size(); ++wi) {
                uint32_t w = L.fstable[wi];
                uint32_t bfound = UINT32_MAX, pfound = UINT32_MAX;
                for (uint32_t b = 0; b < L.blocks.size() && bfound == UINT32_MAX; ++b) {
                    Cyclotomic lam = convolution_scalar(L.blocks[b].T_e, *L.table, 0, w, *L.ctx);
                    if (!(lam == Cyclotomic::one())) continue;
                    bfound = b;
                    for (uint32_t pk = 0; pk < L.blocks[b].packets.size(); ++pk) {
                        Cyclotomic mu = convolution_scalar(L.blocks[b].packets[pk].idempotent, *L.table, 0, w, *L.ctx);
                        if (mu == Cyclotomic::one()) pfound = pk;
                    }
                }
                if (bfound == UINT32_MAX || pfound == UINT32_MAX)
                    throw shintani_error("level-m packet assignment failed");
                L.assignment.push_back({bfound, pfound});
            }
        } else {
            for (uint32_t wi = 0; wi < (uint32_t)L.fstable.size(); ++wi) L.assignment.push_back({0, L.fstable[wi]});
        }
    }

    // parameter transport: expected level-1 packet for each level-m packet
    // torus: chi1 matches when chi1(N_m(t)) = chi_m(t) for every t in T^{F^m}
    // induced blocks: the same comparison on the packet torus T'
    auto transport = [&](LevelData& L, uint32_t wi) -> std::pair<uint32_t, uint32_t> {
        uint32_t m = L.ctx->m;
        auto [bm, pm] = L.assignment[wi];
        const Form& fm = L.ctx->untwisted();
        if (torus) {
            uint32_t w = L.fstable[wi];
            for (uint32_t b1 = 0; b1 < blocks1.size(); ++b1)
                for (uint32_t pk = 0; pk < blocks1[b1].packets.size(); ++pk) {
                    // the level-1 packet is a single character chi1 of T^F
                    const auto& orbit = blocks1[b1].torus_data->orbits[blocks1[b1].packets[pk].orbit];
                    auto [t0, i0] = orbit.members[0];
                    const auto& pf1 = blocks1[b1].torus_data->forms[t0];
                    bool all = true;
                    for (uint32_t x = 0; x < fm.group->size() && all; ++x) {
                        uint32_t acc = x, fx = x;
                        for (uint32_t i = 1; i < m; ++i) {
                            fx = fm.frob_local[fx];
                            acc = fm.group->mul(acc, fx);
                        }
                        // project the norm (an F-fixed element) to level 1
                        const Elt& e = L.ctx->ambient->element(fm.group->parent_id(acc));
                        Elt low{1, 1, 1, 1, 1};
                        uint32_t degm = spec.k * m, deg1 = spec.k;
                        for (uint32_t co = 0; co < spec.rank; ++co)
                            low[co] =
                                (uint32_t)tower.project(tower.from_index(degm, e[co]), deg1).index(spec.p);
                        uint32_t amb1 = ctx1->ambient->index_of(low);
                        uint32_t loc1 = ctx1->untwisted().group->local_of(amb1);
                        Cyclotomic lhs =
                            pf1.table->value(i0, pf1.table->classes().class_of[pf1.group->local_of(
                                                     ctx1->untwisted().group->parent_id(loc1))]);
                        Cyclotomic rhs = L.table->value(L.fstable[wi], L.table->classes().class_of[x]);
                        if (!(lhs == rhs)) all = false;
                    }
                    if (all) return {b1, pk};
                }
            (void)w;
            throw shintani_error("torus parameter transport failed");
        }
        // match the block by pair name, then the packet by the torus-character norm
        const ResolvedBlock& rbm = L.blocks[bm];
        uint32_t b1 = UINT32_MAX;
        for (uint32_t b = 0; b < blocks1.size(); ++b)
            if (blocks1[b].pair.name == rbm.pair.name) b1 = b;
        if (b1 == UINT32_MAX) throw shintani_error("no level-1 block for pair " + rbm.pair.name);
        const ResolvedBlock& rb1 = blocks1[b1];
        if (rb1.packets.size() == 1) return {b1, 0};
        const auto& orbm = rbm.torus_data->orbits[rbm.packets[pm].orbit];
        auto [tm, im] = orbm.members[0];
        const auto& pfm = rbm.torus_data->forms[tm];
        for (uint32_t pk = 0; pk < rb1.packets.size(); ++pk) {
            const auto& orb1 = rb1.torus_data->orbits[rb1.packets[pk].orbit];
            auto [t0, i0] = orb1.members[0];
            const auto& pf1 = rb1.torus_data->forms[t0];
            bool all = true;
            for (uint32_t x = 0; x < pfm.group->size() && all; ++x) {
                // x lives in T'^{F^m}; its norm lands in T'^{F}
                uint32_t amb = pfm.group->parent_id(x);
                uint32_t acc = amb, fx = amb;
                for (uint32_t i = 1; i < m; ++i) {
                    fx = L.ctx->ambient->frobenius(fx);
                    acc = L.ctx->ambient->mul(acc, fx);
                }
                const Elt& e = L.ctx->ambient->element(acc);
                Elt low{1, 1, 0, 0, 0};
                uint32_t degm = spec.k * m, deg1 = spec.k;
                low[0] = (uint32_t)tower.project(tower.from_index(degm, e[0]), deg1).index(spec.p);
                low[1] = (uint32_t)tower.project(tower.from_index(degm, e[1]), deg1).index(spec.p);
                uint32_t amb1 = ctx1->ambient->index_of(low);
                Cyclotomic lhs =
                    pf1.table->value(i0, pf1.table->classes().class_of[pf1.group->local_of(amb1)]);
                Cyclotomic rhs = pfm.table->value(im, pfm.table->classes().class_of[x]);
                if (!(lhs == rhs)) all = false;
            }
            if (all) return {b1, pk};
        }
        throw shintani_error("packet parameter transport failed for pair " + rbm.pair.name);
    };

    // group the descents per level-1 packet; verify block-diagonality and counts
    // key: (block1, packet1) -> per level m: list of descent indices
    std::map<std::pair<uint32_t, uint32_t>, std::vector<std::vector<uint32_t>>> by_packet;
    for (uint32_t m = 1; m <= m_max; ++m) {
        LevelData& L = levels[m - 1];
        for (uint32_t wi = 0; wi < (uint32_t)L.fstable.size(); ++wi) {
            auto key = transport(L, wi);
            auto& slot = by_packet[key];
            if (slot.empty()) slot.resize(m_max);
            slot[m - 1].push_back(wi);
        }
    }

    bool block_respect = true, cross_zero = true, size_match = true, matrices_unitary = true;
    std::map<std::pair<uint32_t, uint32_t>, std::vector<std::vector<std::vector<Cyclotomic>>>> matrices;
    for (auto& [key, per_level] : by_packet) {
        auto [b1, p1] = key;
        const auto& members1 = part1.members[b1][p1];
        for (uint32_t m = 1; m <= m_max; ++m) {
            LevelData& L = levels[m - 1];
            const auto& idxs = per_level[m - 1];
            if (idxs.size() != members1.size()) size_match = false;
            // the descents lie in the span of the packet characters
            std::vector<std::vector<Cyclotomic>> M(idxs.size(), std::vector<Cyclotomic>(members1.size()));
            for (size_t r = 0; r < idxs.size(); ++r) {
                const FunSpace& sh = L.descents[idxs[r]];
                // block respect: T_e * Sh = Sh for the matched block idempotent
                if (!(convolve(blocks1[b1].T_e, sh) == sh)) block_respect = false;
                Cyclotomic norm2 = Cyclotomic::zero();
                for (size_t c = 0; c < members1.size(); ++c) {
                    M[r][c] = inner_product(sh, chars1[members1[c]]);
                    norm2 += M[r][c] * M[r][c].conjugate();
                }
                if (!(norm2 == Cyclotomic::one())) cross_zero = false; // mass escaped the packet span
            }
            matrices[key].push_back(M);
            if (idxs.size() == members1.size()) {
                for (size_t r = 0; r < idxs.size() && matrices_unitary; ++r)
                    for (size_t r2 = 0; r2 < idxs.size() && matrices_unitary; ++r2) {
                        Cyclotomic acc = Cyclotomic::zero();
                        for (size_t c = 0; c < members1.size(); ++c) acc += M[r][c] * M[r2][c].conjugate();
                        Cyclotomic want = r == r2 ? Cyclotomic::one() : Cyclotomic::zero();
                        if (!(acc == want)) matrices_unitary = false;
                    }
            }
        }
    }
    out.checks.add("shintani.respects_blocks", block_respect);
    out.checks.add("shintani.packet_dimension_match", size_match);
    out.checks.add("shintani.block_diagonal", cross_zero);
    out.checks.add("shintani.matrices_unitary", matrices_unitary);

    // period detection and almost characters per packet
    bool any_almost_fail = false;
    for (auto& [key, per_level] : by_packet) {
        auto [b1, p1] = key;
        std::vector<std::vector<FunSpace>> bases(m_max);
        for (uint32_t m = 1; m <= m_max; ++m)
            for (uint32_t wi : per_level[m - 1]) bases[m - 1].push_back(levels[m - 1].descents[wi]);
        int m0 = -1;
        for (uint32_t d = 1; d <= m_max && m0 < 0; ++d) {
            bool ok = true;
            for (uint32_t a = 1; a <= m_max && ok; ++a)
                for (uint32_t b = a + d; b <= m_max && ok; b += d)
                    if ((b - a) % d == 0 && !basis_matches_up_to_roots(bases[a - 1], bases[b - 1])) ok = false;
            if (ok) m0 = (int)d;
        }
        ShintaniOutcome::PacketPeriod pp;
        pp.pair = blocks1[b1].pair.name;
        pp.packet = blocks1[b1].packets[p1].label;
        pp.matrices = matrices[key];
        pp.m0 = m0;
        pp.almost_characters_match = true;
        if (m0 > 0) {
            for (uint32_t m = (uint32_t)m0; m <= m_max; m += (uint32_t)m0)
                if (!basis_matches_up_to_roots(bases[m - 1], traces1[b1][p1])) pp.almost_characters_match = false;
        } else pp.almost_characters_match = false;
        if (!pp.almost_characters_match) any_almost_fail = true;
        out.periods.push_back(std::move(pp));
    }
    out.checks.add("shintani.period_found", std::all_of(out.periods.begin(), out.periods.end(),
                                                        [](const auto& p) { return p.m0 > 0; }));
    out.checks.add("shintani.almost_characters_match_traces", !any_almost_fail);

    // negative control: a basis compared against a wrong packet's trace functions
    if (by_packet.size() >= 2) {
        auto it = by_packet.begin();
        auto [bA, pA] = it->first;
        ++it;
        auto [bB, pB] = it->first;
        std::vector<FunSpace> basisA;
        for (uint32_t wi : by_packet[{bA, pA}][0]) basisA.push_back(levels[0].descents[wi]);
        out.checks.add("shintani.negative_control", !basis_matches_up_to_roots(basisA, traces1[bB][pB]));
    }

    for (uint32_t m = 1; m <= m_max; ++m) out.bases_by_level.push_back(levels[m - 1].descents);
    return out;
}

} // namespace csolv
