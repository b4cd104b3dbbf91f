#include "csolv/lpacket.hpp"

#include <algorithm>
#include <numeric>

namespace csolv {

uint32_t pi0_fixed_order(const FrobContext& ctx) {
    switch (ctx.spec.family) {
        case Family::Mu3TimesU3:
            if (ctx.spec.p == 3) return 1;
            return ctx.qm % 3 == 1 ? 3 : 1;
        case Family::TorusZ2: return 2;
        default: return 1;
    }
}

Partition partition_irreps(const FrobContext& ctx, const AllIrreps& ai, const std::vector<ResolvedBlock>& blocks) {
    Partition part;
    uint32_t n = ai.count();
    part.block_of.assign(n, UINT32_MAX);
    part.packet_of.assign(n, UINT32_MAX);
    part.members.resize(blocks.size());
    for (size_t b = 0; b < blocks.size(); ++b) part.members[b].resize(blocks[b].packets.size());

    bool complete = true, agree = true;
    std::vector<FunSpace> chars;
    chars.reserve(n);
    for (uint32_t i = 0; i < n; ++i) chars.push_back(ai.character(i));

    for (uint32_t i = 0; i < n; ++i) {
        uint32_t form = ai.refs[i].form;
        uint32_t irrep = ai.refs[i].index;
        const CharacterTable& tab = *ai.tables[form];
        Cyclotomic one = Cyclotomic::one();
        for (uint32_t b = 0; b < (uint32_t)blocks.size(); ++b) {
            Cyclotomic lam = convolution_scalar(blocks[b].T_e, tab, form, irrep, ctx);
            bool in_a = lam == one;
            if (!in_a && !lam.is_zero()) {
                // the block idempotent acts by 0 or 1 on irreducibles
                agree = false;
            }
            bool in_b = false;
            for (const auto& ic : blocks[b].induced_block_chars)
                if (!inner_product(ic, chars[i]).is_zero()) in_b = true;
            if (in_a != in_b) agree = false;
            if (!in_a) continue;
            if (part.block_of[i] != UINT32_MAX) {
                complete = false; // doubly assigned
                continue;
            }
            part.block_of[i] = b;
            for (uint32_t pk = 0; pk < (uint32_t)blocks[b].packets.size(); ++pk) {
                Cyclotomic mu = convolution_scalar(blocks[b].packets[pk].idempotent, tab, form, irrep, ctx);
                if (mu == one) {
                    if (part.packet_of[i] != UINT32_MAX) complete = false;
                    part.packet_of[i] = pk;
                    part.members[b][pk].push_back(i);
                }
            }
            if (part.packet_of[i] == UINT32_MAX) complete = false;
        }
        if (part.block_of[i] == UINT32_MAX) complete = false;
    }
    part.complete = complete;
    part.oracles_agree = agree;
    return part;
}

namespace {

uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// |T^{tF}| for the ambient torus of G, per form
uint64_t torus_order(const FrobContext& ctx, uint32_t form) {
    switch (ctx.spec.family) {
        case Family::BorelSL3: return ctx.subgroup_members(form, "T").size();
        case Family::SplitTorus:
        case Family::TorusZ2: return ctx.subgroup_members(form, "T").size();
        default: return 1;
    }
}

// packet dimension dim M: |stab|^2 |K_N| for the shipped families
uint64_t packet_dim_m(const ResolvedBlock& rb, uint32_t packet) {
    Family fam = rb.ctx->spec.family;
    if (fam == Family::TorusZ2) {
        const auto& orbit = rb.torus_data->orbits[rb.packets[packet].orbit];
        bool on0 = false, on1 = false;
        for (auto [t, i] : orbit.members) {
            (void)i;
            if (t == 0) on0 = true;
            else on1 = true;
        }
        return (on0 && on1) ? 4 : 1; // stabilizer Z/2 iff the local system lives on both forms
    }
    bool mu3_block = (fam == Family::BorelSL3 && rb.pair.name == "case4") || fam == Family::Mu3TimesU3;
    if (mu3_block && rb.ctx->spec.p != 3) return 9;
    return 1;
}

uint32_t packet_fixed(const ResolvedBlock& rb, uint32_t packet) {
    Family fam = rb.ctx->spec.family;
    if (fam == Family::TorusZ2) return (uint32_t)packet_dim_m(rb, packet); // F acts trivially on the Z/2 data
    return rb.packet_fixed_count(packet);
}

} // namespace

CheckList structural_checks(const FrobContext& ctx, const ResolvedBlock& rb, const Partition& part,
                            uint32_t block_index, const AllIrreps& ai) {
    CheckList cl;
    uint64_t qm = ctx.qm;
    long long d_e = rb.d_e();
    uint32_t pi0 = pi0_fixed_order(ctx);
    std::string base = "block." + rb.pair.name;

    bool heisenberg_block = rb.pair.normalizer == "G" || rb.pair.normalizer == "B";

    for (uint32_t pk = 0; pk < (uint32_t)rb.packets.size(); ++pk) {
        const auto& mem = part.members[block_index][pk];
        std::string pb = base + ".packet." + rb.packets[pk].label;

        // packet size = number of F-stable simples in the packet datum
        cl.add(pb + ".size_matches_fixed_sheaves", mem.size() == packet_fixed(rb, pk));

        uint64_t dim_m = packet_dim_m(rb, pk);
        uint64_t sq = integer_sqrt(dim_m);
        cl.add(pb + ".dim_perfect_square", sq * sq == dim_m);

        // dimension formula: dim W = (dim+ / sqrt(dim M)) (|T^{tF}|/|T'^{tF}|) |Pi0^{tF}| q^{d_e + tau_e - dim T}
        long long expo = d_e + (long long)rb.tau_e - (long long)rb.dim_T;
        bool integral = true;
        unsigned __int128 sumsq_plus = 0;
        Rational sumsq_w(0);
        for (uint32_t i : mem) {
            uint32_t form = ai.refs[i].form;
            uint64_t dw = ai.degree(i);
            uint64_t tord = torus_order(ctx, form);
            uint64_t tpord = 1;
            if (rb.torus_data) tpord = rb.torus_data->forms[form].group->size();
            Rational dplus = Rational((long long)dw) * Rational((long long)sq) * Rational((long long)tpord) /
                             (Rational((long long)tord) * Rational((long long)pi0));
            Rational qpow = expo >= 0 ? Rational((long long)ipow(qm, (uint32_t)expo))
                                      : Rational(1, (long long)ipow(qm, (uint32_t)(-expo)));
            dplus /= qpow;
            if (!dplus.is_integer() || !dplus.is_positive()) integral = false;
            else sumsq_plus += (unsigned __int128)dplus.num() * dplus.num();
            Rational w((long long)dw, (long long)pi0);
            sumsq_w += w * w;
        }
        cl.add(pb + ".dimplus_positive_integral", integral);
        cl.add(pb + ".dimplus_sumsq_eq_dim", integral && sumsq_plus == dim_m);
        if (heisenberg_block) {
            Rational want = Rational((long long)ipow(qm, (uint32_t)(2 * d_e)));
            cl.add(pb + ".sumsq_eq_q2de", sumsq_w == want);
        }
    }
    return cl;
}

/* ---------------- transition and crossed S ---------------- */

SMatrixResult transition_and_crossed_s(const FrobContext& ctx, const ResolvedBlock& rb, uint32_t block_index,
                                       uint32_t packet, const Partition& part, const AllIrreps& ai) {
    SMatrixResult res;
    const auto& mem = part.members[block_index][packet];
    res.member_irreps = mem;
    auto traces = rb.trace_functions(packet);
    if (traces.size() != mem.size())
        throw lpacket_error("trace-function count differs from packet size: " + std::to_string(traces.size()) +
                            " vs " + std::to_string(mem.size()));
    uint32_t n = (uint32_t)mem.size();
    res.dim_m = packet_dim_m(rb, packet);
    res.sqrt_dim_m = integer_sqrt(res.dim_m);
    if (res.sqrt_dim_m * res.sqrt_dim_m != res.dim_m)
        throw lpacket_error("packet dimension is not a perfect square");
    for (uint32_t r = 0; r < n; ++r) res.row_labels.push_back("C" + std::to_string(r));

    res.transition.assign(n, std::vector<Cyclotomic>(n));
    std::vector<FunSpace> chars;
    for (uint32_t i : mem) chars.push_back(ai.character(i));
    for (uint32_t r = 0; r < n; ++r)
        for (uint32_t c = 0; c < n; ++c) res.transition[r][c] = inner_product(traces[r], chars[c]);

    // exact unitarity
    bool unitary = true;
    for (uint32_t r = 0; r < n && unitary; ++r)
        for (uint32_t r2 = 0; r2 < n && unitary; ++r2) {
            Cyclotomic acc = Cyclotomic::zero();
            for (uint32_t c = 0; c < n; ++c) acc += res.transition[r][c] * res.transition[r2][c].conjugate();
            Cyclotomic want = r == r2 ? Cyclotomic::one() : Cyclotomic::zero();
            if (!(acc == want)) unitary = false;
        }
    res.checks.add("smatrix.unitary", unitary);

    long long d_e = rb.d_e();
    long long expo = (long long)rb.dim_G - d_e; // q^{dim G - d_e}
    Rational down = Rational(1, (long long)ipow(ctx.qm, (uint32_t)expo));
    res.s_tilde.assign(n, std::vector<Cyclotomic>(n));
    res.s_plus.assign(n, std::vector<Cyclotomic>(n));
    bool algint = true;
    for (uint32_t r = 0; r < n; ++r)
        for (uint32_t c = 0; c < n; ++c) {
            res.s_tilde[r][c] = res.transition[r][c] * Cyclotomic(down);
            res.s_plus[r][c] = res.transition[r][c] * Cyclotomic(Rational((long long)res.sqrt_dim_m));
            for (const auto& co : res.s_plus[r][c].coeffs())
                if (!co.is_integer()) algint = false;
        }
    res.checks.add("splus.algebraic_integer_entries", algint);

    // S+ = q^{dim G - d_e} sqrt(dim M) S~ by construction; assert the scaling identity
    bool scaling = true;
    Rational up((long long)ipow(ctx.qm, (uint32_t)expo));
    for (uint32_t r = 0; r < n && scaling; ++r)
        for (uint32_t c = 0; c < n && scaling; ++c)
            if (!(res.s_plus[r][c] ==
                  res.s_tilde[r][c] * Cyclotomic(up) * Cyclotomic(Rational((long long)res.sqrt_dim_m))))
                scaling = false;
    res.checks.add("splus.scaling_identity", scaling);

    bool gram = true;
    for (uint32_t r = 0; r < n && gram; ++r)
        for (uint32_t r2 = 0; r2 < n && gram; ++r2) {
            Cyclotomic acc = Cyclotomic::zero();
            for (uint32_t c = 0; c < n; ++c) acc += res.s_plus[r][c] * res.s_plus[r2][c].conjugate();
            Cyclotomic want = r == r2 ? Cyclotomic(Rational((long long)res.dim_m)) : Cyclotomic::zero();
            if (!(acc == want)) gram = false;
        }
    res.checks.add("splus.gram_eq_dim_identity", gram);

    bool unit_row = true;
    for (uint32_t c = 0; c < n; ++c)
        if (res.s_plus[0][c].is_zero()) unit_row = false;
    res.checks.add("splus.unit_row_nonzero", unit_row);

    return res;
}

/* ---------------- phase/permutation matching ---------------- */

namespace {

bool backtrack_match(const std::vector<std::vector<Cyclotomic>>& N1, const std::vector<std::vector<Cyclotomic>>& N2,
                     std::vector<int>& row_map, std::vector<int>& col_map, uint32_t row) {
    uint32_t n = (uint32_t)N1.size();
    if (row == n) return true;
    if (row_map[row] >= 0) return backtrack_match(N1, N2, row_map, col_map, row + 1);
    std::vector<char> used(n, 0);
    for (uint32_t r = 0; r < n; ++r)
        if (row_map[r] >= 0) used[row_map[r]] = 1;
    for (uint32_t cand = 0; cand < n; ++cand) {
        if (used[cand]) continue;
        // consistency with the partial column map, then lazy assignment of the rest
        bool ok = true;
        std::vector<int> cm = col_map;
        std::vector<char> cused(n, 0);
        for (uint32_t c = 0; c < n; ++c)
            if (cm[c] >= 0) cused[cm[c]] = 1;
        for (uint32_t c = 0; c < n && ok; ++c)
            if (cm[c] >= 0 && !(N1[row][c] == N2[cand][cm[c]])) ok = false;
        if (!ok) continue;
        // greedy assignment of remaining columns for this row, then recurse
        std::function<bool(uint32_t)> assign_cols = [&](uint32_t c) -> bool {
            while (c < n && cm[c] >= 0) ++c;
            if (c == n) {
                row_map[row] = (int)cand;
                std::vector<int> saved = col_map;
                col_map = cm;
                if (backtrack_match(N1, N2, row_map, col_map, row + 1)) return true;
                col_map = saved;
                row_map[row] = -1;
                return false;
            }
            for (uint32_t c2 = 0; c2 < n; ++c2) {
                if (cused[c2]) continue;
                if (!(N1[row][c] == N2[cand][c2])) continue;
                cm[c] = (int)c2;
                cused[c2] = 1;
                if (assign_cols(c + 1)) return true;
                cm[c] = -1;
                cused[c2] = 0;
            }
            return false;
        };
        if (assign_cols(0)) return true;
    }
    return false;
}

} // namespace

bool matrices_match_up_to_phases(const std::vector<std::vector<Cyclotomic>>& A,
                                 const std::vector<std::vector<Cyclotomic>>& B) {
    uint32_t n = (uint32_t)A.size();
    if (B.size() != n) return false;
    // gauge-invariant form: N[i][j] = A[i][j] A[r0][c0] / (A[i][c0] A[r0][j]) kills
    // both diagonal phase factors; try every anchor of B against anchor (0,0) of A
    auto gauge = [&](const std::vector<std::vector<Cyclotomic>>& M, uint32_t r0, uint32_t c0,
                     std::vector<std::vector<Cyclotomic>>& out) -> bool {
        out.assign(n, std::vector<Cyclotomic>(n));
        for (uint32_t i = 0; i < n; ++i)
            if (M[i][c0].is_zero() || M[r0][i].is_zero()) return false;
        Cyclotomic anchor = M[r0][c0];
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = 0; j < n; ++j)
                out[i][j] = M[i][j] * anchor * (M[i][c0] * M[r0][j]).inverse();
        return true;
    };
    std::vector<std::vector<Cyclotomic>> N1;
    if (!gauge(A, 0, 0, N1)) return false;
    for (uint32_t r0 = 0; r0 < n; ++r0)
        for (uint32_t c0 = 0; c0 < n; ++c0) {
            std::vector<std::vector<Cyclotomic>> N2;
            if (!gauge(B, r0, c0, N2)) continue;
            std::vector<int> row_map(n, -1), col_map(n, -1);
            row_map[0] = (int)r0;
            col_map[0] = (int)c0;
            // rebase N2 so that its (r0, c0) plays the role of (0,0): the gauge
            // already guarantees N2[r0][*] = N2[*][c0] = 1, matching N1[0][*] = N1[*][0] = 1
            if (backtrack_match(N1, N2, row_map, col_map, 0)) return true;
        }
    return false;
}

} // namespace csolv
