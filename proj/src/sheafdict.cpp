#include "csolv/sheafdict.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace csolv {

namespace {

uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// base-field parameter (level k index) embedded into the context field
uint32_t embed_param(const FrobContext& ctx, FieldTower& tower, uint32_t idx) {
    uint32_t k = ctx.spec.k;
    uint32_t deg = k * ctx.m * ctx.ambient->closure();
    FieldElement e = tower.from_index(k, idx);
    return (uint32_t)tower.embed(e, deg).index(ctx.spec.p);
}

// absolute trace of the subfield F_{q^m} down to F_p, valid on subfield members
uint32_t trace_qm(const FrobContext& ctx, uint32_t x) {
    const SmallField& F = ctx.ambient->field();
    uint32_t sub = ctx.spec.k * ctx.m;
    uint32_t tr = 0, cur = x;
    for (uint32_t i = 0; i < sub; ++i) {
        tr = F.add(tr, cur);
        cur = F.frob_p_t[cur];
    }
    // the trace lies in the prime field, whose elements are the indices 0..p-1
    if (tr >= F.p) throw sheaf_error("trace escaped the prime field (element not in F_{q^m})");
    return tr;
}

struct DatumEval {
    const FrobContext* ctx;
    FieldTower* tower;
    CharDatum datum;
    uint32_t xe = 0, ye = 0, le = 0; // embedded parameters

    void prepare() {
        if (datum.kind == CharDatum::Kind::ArtinSchreierV) {
            xe = embed_param(*ctx, *tower, datum.x);
            ye = embed_param(*ctx, *tower, datum.y);
        } else if (datum.kind == CharDatum::Kind::ArtinSchreierZ) {
            le = embed_param(*ctx, *tower, datum.lambda);
        }
    }

    // value on an element of H^{tF} (given by ambient id)
    Cyclotomic value(uint32_t ambient_id) const {
        const SmallField& F = ctx->ambient->field();
        const Elt& e = ctx->ambient->element(ambient_id);
        switch (datum.kind) {
            case CharDatum::Kind::Trivial: return Cyclotomic::one();
            case CharDatum::Kind::ArtinSchreierV: {
                uint32_t a = 0, b = 0;
                switch (ctx->spec.family) {
                    case Family::BorelSL3: a = e[2]; b = e[3]; break;
                    case Family::HeisenbergU3: a = e[0]; b = e[1]; break;
                    case Family::Mu3TimesU3: a = e[1]; b = e[2]; break;
                    default: throw sheaf_error("Artin-Schreier datum on a torus family");
                }
                uint32_t arg = F.add(F.mul(xe, a), F.mul(ye, b));
                return Cyclotomic::root_of_unity(ctx->spec.p, trace_qm(*ctx, arg));
            }
            case CharDatum::Kind::ArtinSchreierZ: {
                uint32_t c = 0;
                switch (ctx->spec.family) {
                    case Family::BorelSL3: c = e[4]; break;
                    case Family::HeisenbergU3: c = e[2]; break;
                    case Family::Mu3TimesU3: c = e[3]; break;
                    default: throw sheaf_error("central datum on a torus family");
                }
                return Cyclotomic::root_of_unity(ctx->spec.p, trace_qm(*ctx, F.mul(le, c)));
            }
        }
        throw sheaf_error("bad datum");
    }
};

Elt torus_part(Family fam, const Elt& e) {
    switch (fam) {
        case Family::BorelSL3: return Elt{e[0], e[1], 0, 0, 0};
        case Family::SplitTorus: return e;
        case Family::TorusZ2: return e;
        default: return Elt{};
    }
}

bool has_torus_coords(Family fam) {
    return fam == Family::BorelSL3 || fam == Family::SplitTorus || fam == Family::TorusZ2;
}

// deterministic unit-norm and phase convention: the first supported value is
// rotated to drop its root-of-unity part when it has the form (positive
// rational) * (root of unity); otherwise the phase minimizing the serialized
// value is applied. Comparisons downstream are all modulo roots of unity, so
// the convention is not load-bearing.
void canonicalize_trace(FunSpace& f) {
    Cyclotomic n2 = inner_product(f, f);
    if (!n2.is_rational() || !n2.rational_value().is_positive())
        throw sheaf_error("trace function with non-rational norm");
    Rational r = n2.rational_value();
    if (!(r == Rational(1))) {
        long long ns = (long long)integer_sqrt((uint64_t)r.num());
        long long ds = (long long)integer_sqrt((uint64_t)r.den());
        if (ns * ns != r.num() || ds * ds != r.den())
            throw sheaf_error("trace norm is not a rational square: extend the conductor to take square roots");
        f.scale(Cyclotomic(Rational(ds, ns)));
    }
    for (size_t t = 0; t < f.v.size(); ++t)
        for (size_t c = 0; c < f.v[t].size(); ++c) {
            const Cyclotomic& v = f.v[t][c];
            if (v.is_zero()) continue;
            Cyclotomic vv = v * v.conjugate();
            if (vv.is_rational() && vv.rational_value().is_positive()) {
                Rational m2 = vv.rational_value();
                long long ns = (long long)integer_sqrt((uint64_t)m2.num());
                long long ds = (long long)integer_sqrt((uint64_t)m2.den());
                if (ns * ns == m2.num() && ds * ds == m2.den()) {
                    Cyclotomic zeta = v * Cyclotomic(Rational(ds, ns));
                    if (zeta.is_root_of_unity()) {
                        f.scale(zeta.inverse());
                        return;
                    }
                }
            }
            // fall back: minimize the serialized leading value over candidate phases
            uint32_t L = v.conductor();
            Cyclotomic best = v;
            Cyclotomic best_phase = Cyclotomic::one();
            for (uint32_t k2 = 0; k2 < L; ++k2)
                for (int s = 0; s < 2; ++s) {
                    Cyclotomic cand = mul_root_of_unity(v, L, k2, s == 1);
                    if (Cyclotomic::canonical_less(cand, best)) {
                        best = cand;
                        Cyclotomic z = Cyclotomic::root_of_unity(L, k2);
                        best_phase = s ? -z : z;
                    }
                }
            f.scale(best_phase);
            return;
        }
    throw sheaf_error("zero trace function cannot be normalized");
}

} // namespace

long long ResolvedBlock::d_e() const {
    if (two_d_e % 2 != 0)
        throw sheaf_error("half-integer functional dimension: extend the conductor to adjoin q^(1/2)");
    return two_d_e / 2;
}

std::vector<AdmissiblePairSpec> standard_pairs(Family fam, uint32_t p, uint64_t q) {
    std::vector<AdmissiblePairSpec> out;
    switch (fam) {
        case Family::BorelSL3:
            out.push_back(make_pair(fam, "case1", p, q));
            out.push_back(make_pair(fam, "case2", p, q));
            out.push_back(make_pair(fam, "case3", p, q));
            out.push_back(make_pair(fam, "case4", p, q));
            out.push_back(make_pair(fam, "case5", p, q));
            break;
        case Family::SplitTorus:
        case Family::TorusZ2:
            out.push_back(make_pair(fam, "torus", p, q));
            break;
        case Family::HeisenbergU3:
        case Family::Mu3TimesU3:
            for (uint64_t x = 0; x < q; ++x)
                for (uint64_t y = 0; y < q; ++y)
                    out.push_back(make_pair(fam, "linear(" + std::to_string(x) + "," + std::to_string(y) + ")", p, q));
            for (uint64_t c = 1; c < q; ++c)
                out.push_back(make_pair(fam, "central(" + std::to_string(c) + ")", p, q));
            break;
    }
    return out;
}

AdmissiblePairSpec make_pair(Family fam, const std::string& text, uint32_t p, uint64_t q) {
    AdmissiblePairSpec s;
    s.name = text;
    auto parse_args = [&](const std::string& t) {
        std::vector<uint32_t> args;
        size_t l = t.find('('), r = t.find(')');
        if (l == std::string::npos || r == std::string::npos || r < l)
            throw sheaf_error("malformed pair arguments in '" + t + "'");
        std::string inner = t.substr(l + 1, r - l - 1);
        size_t pos = 0;
        while (pos < inner.size()) {
            size_t comma = inner.find(',', pos);
            if (comma == std::string::npos) comma = inner.size();
            args.push_back((uint32_t)std::stoul(inner.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        return args;
    };
    if (fam == Family::BorelSL3) {
        if (text == "case1") {
            s.subgroup = "U";
            s.datum = {CharDatum::Kind::Trivial, 0, 0, 0};
            s.normalizer = "B";
            s.central_subgroup = "B";
            s.central_abelian = "U";
            s.torus = "T";
            return s;
        }
        if (text == "case2") {
            s.subgroup = "U";
            s.datum = {CharDatum::Kind::ArtinSchreierV, 1, 0, 0};
            s.normalizer = "T12U";
            s.central_subgroup = "T12U";
            s.central_abelian = "U";
            s.torus = "T12";
            return s;
        }
        if (text == "case3") {
            s.subgroup = "U";
            s.datum = {CharDatum::Kind::ArtinSchreierV, 0, 1, 0};
            s.normalizer = "T23U";
            s.central_subgroup = "T23U";
            s.central_abelian = "U";
            s.torus = "T23";
            return s;
        }
        if (text == "case4") {
            s.subgroup = "U";
            s.datum = {CharDatum::Kind::ArtinSchreierV, 1, 1, 0};
            s.normalizer = "mu3U";
            s.central_subgroup = "mu3U";
            s.central_abelian = "U";
            s.torus = "trivial";
            return s;
        }
        if (text == "case5") {
            s.subgroup = "Z";
            s.datum = {CharDatum::Kind::ArtinSchreierZ, 0, 0, 1};
            s.normalizer = "T13U";
            s.central_subgroup = "H13T13";
            s.central_abelian = "H13";
            s.torus = "T13";
            return s;
        }
        throw sheaf_error("unknown borel-sl3 pair '" + text + "' (use case1..case5)");
    }
    if (fam == Family::SplitTorus || fam == Family::TorusZ2) {
        if (text == "torus") {
            s.subgroup = "trivial";
            s.datum = {CharDatum::Kind::Trivial, 0, 0, 0};
            s.normalizer = "G";
            s.central_subgroup = "G";
            s.central_abelian = "trivial";
            s.torus = "T";
            return s;
        }
        throw sheaf_error("unknown torus pair '" + text + "' (use torus)");
    }
    // heisenberg-u3 / mu3-ltimes-u3
    if (text.rfind("linear", 0) == 0) {
        auto a = parse_args(text);
        if (a.size() != 2 || a[0] >= q || a[1] >= q) throw sheaf_error("linear pair needs (x,y) in F_q");
        s.subgroup = "U";
        s.datum = {CharDatum::Kind::ArtinSchreierV, a[0], a[1], 0};
        s.normalizer = "G";
        s.central_subgroup = "U";
        s.central_abelian = "U";
        s.torus = "trivial";
        return s;
    }
    if (text.rfind("central", 0) == 0) {
        auto a = parse_args(text);
        if (a.size() != 1 || a[0] == 0 || a[0] >= q) throw sheaf_error("central pair needs 0 != c in F_q");
        s.subgroup = "Z";
        s.datum = {CharDatum::Kind::ArtinSchreierZ, 0, 0, a[0]};
        s.normalizer = "G";
        s.central_subgroup = "H13";
        s.central_abelian = "H13";
        s.torus = "trivial";
        return s;
    }
    (void)p;
    throw sheaf_error("unknown pair '" + text + "' for " + family_name(fam) +
                      " (use linear(x,y) or central(c))");
}

/* ---------------- torus character data ---------------- */

TorusCharacterData torus_character_data(const FrobContext& ctx, const std::string& torus_name, FieldTower&) {
    TorusCharacterData tcd;
    for (uint32_t t = 0; t < (uint32_t)ctx.forms.size(); ++t) {
        TorusCharacterData::PerForm pf;
        pf.members = ctx.subgroup_members(t, torus_name == "trivial" ? "trivial" : torus_name);
        std::vector<uint32_t> parent_ids;
        for (uint32_t loc : pf.members) parent_ids.push_back(ctx.forms[t].group->parent_id(loc));
        pf.group = std::make_shared<SubgroupView>(ctx.ambient, parent_ids);
        pf.table = std::make_shared<CharacterTable>(pf.group);
        tcd.forms.push_back(std::move(pf));
    }

    // union-find over (form, char)
    std::vector<std::pair<uint32_t, uint32_t>> nodes;
    for (uint32_t t = 0; t < tcd.forms.size(); ++t)
        for (uint32_t i = 0; i < tcd.forms[t].table->count(); ++i) nodes.push_back({t, i});
    auto node_id = [&](uint32_t t, uint32_t i) {
        uint32_t off = 0;
        for (uint32_t s = 0; s < t; ++s) off += tcd.forms[s].table->count();
        return off + i;
    };
    std::vector<uint32_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<uint32_t(uint32_t)> find = [&](uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](uint32_t a, uint32_t b) { parent[find(a)] = find(b); };

    // character of a T'-group matched by a value vector over its elements
    auto match_char = [&](uint32_t t, const std::vector<Cyclotomic>& vals_per_member) -> uint32_t {
        const auto& pf = tcd.forms[t];
        for (uint32_t i = 0; i < pf.table->count(); ++i) {
            bool ok = true;
            for (uint32_t x = 0; x < pf.group->size() && ok; ++x)
                if (!(pf.table->value(i, pf.table->classes().class_of[x]) == vals_per_member[x])) ok = false;
            if (ok) return i;
        }
        throw sheaf_error("character matching failed");
    };

    if (ctx.spec.family == Family::TorusZ2) {
        // Pi0-action on each form: chi -> chi o inversion (conjugation by sigma)
        for (uint32_t t = 0; t < tcd.forms.size(); ++t) {
            const auto& pf = tcd.forms[t];
            for (uint32_t i = 0; i < pf.table->count(); ++i) {
                std::vector<Cyclotomic> twisted(pf.group->size());
                for (uint32_t x = 0; x < pf.group->size(); ++x)
                    twisted[pf.group->local_of(ctx.ambient->inverse(pf.group->parent_id(x)))] =
                        pf.table->value(i, pf.table->classes().class_of[x]);
                unite(node_id(t, i), node_id(t, match_char(t, twisted)));
            }
        }
        // cross-form geometric matching through the level-2m torus: chi on T^F
        // and chi' on T^{sF} describe the same local system iff chi o N_1 = chi' o N_s
        const CoordinateGroup& G = *ctx.ambient;
        std::vector<uint32_t> big_torus;
        for (uint32_t x = 0; x < G.size(); ++x)
            if (G.component_of(x) == 0) big_torus.push_back(x);
        uint32_t sigma = ctx.forms[1].twist_rep;
        auto pullback = [&](uint32_t t, uint32_t i) {
            const auto& pf = tcd.forms[t];
            std::vector<Cyclotomic> out;
            out.reserve(big_torus.size());
            for (uint32_t x : big_torus) {
                uint32_t fx = G.frobenius_m(x);
                uint32_t nx = t == 0 ? G.mul(x, fx) : G.mul(x, G.mul(sigma, G.mul(fx, G.inverse(sigma))));
                out.push_back(pf.table->value(i, pf.table->classes().class_of[pf.group->local_of(nx)]));
            }
            return out;
        };
        for (uint32_t i = 0; i < tcd.forms[0].table->count(); ++i) {
            auto p0 = pullback(0, i);
            for (uint32_t j = 0; j < tcd.forms[1].table->count(); ++j) {
                if (pullback(1, j) == p0) unite(node_id(0, i), node_id(1, j));
            }
        }
    }

    // collect orbits in deterministic order
    std::vector<int> orbit_of(nodes.size(), -1);
    for (uint32_t n = 0; n < nodes.size(); ++n) {
        uint32_t r = find(n);
        if (orbit_of[r] < 0) {
            orbit_of[r] = (int)tcd.orbits.size();
            tcd.orbits.push_back({});
        }
        orbit_of[n] = orbit_of[r];
        tcd.orbits[orbit_of[n]].members.push_back(nodes[n]);
    }
    // F-stability: chi o F stays in the orbit
    for (auto& o : tcd.orbits) {
        o.f_stable = true;
        for (auto [t, i] : o.members) {
            const auto& pf = tcd.forms[t];
            if (ctx.forms[t].frob_local.empty()) {
                o.f_stable = false;
                break;
            }
            std::vector<Cyclotomic> fvals(pf.group->size());
            for (uint32_t x = 0; x < pf.group->size(); ++x) {
                uint32_t fx_form = ctx.forms[t].frob_local[ctx.forms[t].group->local_of(pf.group->parent_id(x))];
                fvals[x] = pf.table->value(i, pf.table->classes().class_of[pf.group->local_of(
                                                  ctx.forms[t].group->parent_id(fx_form))]);
            }
            uint32_t img = match_char(t, fvals);
            bool inside = false;
            for (auto [t2, i2] : o.members)
                if (t2 == t && i2 == img) inside = true;
            if (!inside) {
                o.f_stable = false;
                break;
            }
        }
        auto least = *std::min_element(o.members.begin(), o.members.end());
        o.label = "chi" + std::to_string(least.first) + "." + std::to_string(least.second);
    }
    return tcd;
}

Rational expected_orbit_count(const FrobContext& ctx, const TorusCharacterData& tcd) {
    // (1/|Pi_0|) sum over t in Pi_0 of |T'^{tF}|. The enumerated forms list one
    // representative per twisted class; for the shipped families either the
    // classes exhaust Pi_0 (torus-rtimes-z2, split mu3) or T' is trivial and
    // every element contributes 1.
    uint32_t pi0 = 1;
    switch (ctx.spec.family) {
        case Family::TorusZ2: pi0 = 2; break;
        case Family::Mu3TimesU3: pi0 = ctx.spec.p == 3 ? 1 : 3; break;
        default: pi0 = 1; break;
    }
    Rational acc(0);
    if ((uint32_t)tcd.forms.size() == pi0) {
        for (const auto& pf : tcd.forms) acc += Rational((long long)pf.group->size());
    } else {
        bool trivial_torus = true;
        for (const auto& pf : tcd.forms)
            if (pf.group->size() != 1) trivial_torus = false;
        if (!trivial_torus) throw sheaf_error("orbit-count formula needs one form per component twist");
        acc = Rational((long long)pi0);
    }
    return acc / Rational((long long)pi0);
}

/* ---------------- block resolution ---------------- */

ResolvedBlock resolve_block(const FrobContext& ctx, const AdmissiblePairSpec& pair, FieldTower& tower) {
    ResolvedBlock rb;
    rb.pair = pair;
    rb.ctx = &ctx;
    rb.tower = &tower;
    Family fam = ctx.spec.family;
    uint64_t qm = ctx.qm;

    rb.dim_G = (fam == Family::SplitTorus) ? ctx.spec.rank : CoordinateGroup::group_dim(fam);
    rb.dim_T = (fam == Family::SplitTorus) ? ctx.spec.rank : CoordinateGroup::torus_dim(fam);
    rb.dim_H = (pair.subgroup == "trivial") ? 0 : CoordinateGroup::subgroup_dim(fam, pair.subgroup);
    rb.dim_Gp = (pair.normalizer == "G" && fam == Family::SplitTorus)
                    ? ctx.spec.rank
                    : CoordinateGroup::subgroup_dim(fam, pair.normalizer);
    rb.tau_e = (pair.normalizer == "G" && fam == Family::SplitTorus)
                   ? ctx.spec.rank
                   : CoordinateGroup::subgroup_torus_dim(fam, pair.normalizer);
    rb.n_e = (long long)rb.dim_H - ((long long)rb.dim_G - (long long)rb.dim_Gp);
    rb.two_d_e = (long long)rb.dim_G - rb.n_e - (long long)rb.tau_e;

    DatumEval de{&ctx, &tower, pair.datum, 0, 0, 0};
    de.prepare();

    bool borel_case4 = fam == Family::BorelSL3 && pair.name == "case4";
    bool mu3_case4 = borel_case4 && ctx.spec.p != 3 && qm % 3 == 1;

    Rational qdimH(1, (long long)ipow(qm, rb.dim_H));

    if (!borel_case4) {
        // T_e = ind_{G'}^{G} (T_N delta_H / q^{dim H}) form by form
        rb.T_e = FunSpace::zero(ctx);
        FunSpace indchar = FunSpace::zero(ctx);
        for (uint32_t t = 0; t < (uint32_t)ctx.forms.size(); ++t) {
            auto gp = ctx.subgroup_members(t, pair.normalizer);
            auto h = ctx.subgroup_members(t, pair.subgroup);
            std::vector<char> in_h(ctx.forms[t].group->size(), 0);
            std::vector<Cyclotomic> hval(ctx.forms[t].group->size(), Cyclotomic::zero());
            for (uint32_t loc : h) {
                in_h[loc] = 1;
                hval[loc] = de.value(ctx.forms[t].group->parent_id(loc));
            }
            std::vector<Cyclotomic> on_gp;
            on_gp.reserve(gp.size());
            for (uint32_t loc : gp) on_gp.push_back(in_h[loc] ? hval[loc] * Cyclotomic(qdimH) : Cyclotomic::zero());
            FunSpace te_part = induce_from_subgroup(ctx, t, gp, on_gp);
            rb.T_e.v[t] = te_part.v[t];
            // the block-membership oracle: the plain induced character of T_N from H
            std::vector<Cyclotomic> on_h;
            for (uint32_t loc : h) on_h.push_back(hval[loc]);
            FunSpace ic = induce_from_subgroup(ctx, t, h, on_h);
            indchar.v[t] = ic.v[t];
        }
        rb.induced_block_chars.push_back(std::move(indchar));
    } else {
        // the mu3U block: sum over the F-twisted classes of mu3, transported by Lang elements
        std::vector<uint32_t> lambdas; // field indices of the cube-coset scalings
        if (mu3_case4) {
            const SmallField& F = ctx.ambient->field();
            // omega = least element of multiplicative order 3
            uint32_t omega = 0;
            for (uint32_t x = 2; x < F.size; ++x)
                if (F.mul(x, F.mul(x, x)) == 1 && x != 1) {
                    omega = x;
                    break;
                }
            if (!omega) throw sheaf_error("cube root of unity not found");
            uint32_t deg = ctx.spec.k * ctx.m;
            FieldElement winv = tower.from_index(deg, F.inv(omega));
            FieldElement s = tower.lang_multiplicative(winv, qm);
            FieldElement lam = tower.mul(tower.mul(s, s), s);
            uint32_t lam_idx = (uint32_t)tower.project(lam, deg).index(ctx.spec.p);
            lambdas = {1, F.inv(lam_idx), F.inv(F.mul(lam_idx, lam_idx))};
        } else {
            lambdas = {1};
        }
        rb.case4_lambdas = lambdas;
        rb.T_e = FunSpace::zero(ctx);
        auto gp = ctx.subgroup_members(0, "mu3U");
        auto h = ctx.subgroup_members(0, "U");
        const SmallField& F = ctx.ambient->field();
        for (uint32_t li = 0; li < (uint32_t)lambdas.size(); ++li) {
            // psi_{(1, lambda^{-1})} on U, extended by zero to mu3U, scaled
            std::vector<Cyclotomic> on_gp(gp.size(), Cyclotomic::zero());
            std::vector<Cyclotomic> on_h;
            std::vector<char> ish(ctx.forms[0].group->size(), 0);
            for (uint32_t loc : h) ish[loc] = 1;
            for (uint32_t gi = 0; gi < (uint32_t)gp.size(); ++gi) {
                uint32_t loc = gp[gi];
                if (!ish[loc]) continue;
                const Elt& e = ctx.ambient->element(ctx.forms[0].group->parent_id(loc));
                uint32_t arg = F.add(e[2], F.mul(lambdas[li], e[3]));
                on_gp[gi] = Cyclotomic::root_of_unity(ctx.spec.p, trace_qm(ctx, arg)) * Cyclotomic(qdimH);
            }
            FunSpace part = induce_from_subgroup(ctx, 0, gp, on_gp);
            rb.T_e += part;
            for (uint32_t loc : h) {
                const Elt& e = ctx.ambient->element(ctx.forms[0].group->parent_id(loc));
                uint32_t arg = F.add(e[2], F.mul(lambdas[li], e[3]));
                on_h.push_back(Cyclotomic::root_of_unity(ctx.spec.p, trace_qm(ctx, arg)));
            }
            rb.induced_block_chars.push_back(induce_from_subgroup(ctx, 0, h, on_h));
        }
    }

    /* packets */
    bool single_packet = borel_case4 || fam == Family::Mu3TimesU3;
    if (single_packet) {
        rb.packets.push_back({"f0", -1, rb.T_e});
        return rb;
    }

    rb.torus_data = torus_character_data(ctx, pair.torus, tower);
    const TorusCharacterData& tcd = *rb.torus_data;

    bool torus_family = fam == Family::SplitTorus || fam == Family::TorusZ2;
    for (uint32_t o = 0; o < (uint32_t)tcd.orbits.size(); ++o) {
        const auto& orbit = tcd.orbits[o];
        if (!orbit.f_stable) continue;
        FunSpace idem = FunSpace::zero(ctx);
        if (torus_family) {
            // supported on the identity component: sum of the orbit characters over |T^{tF}|
            for (uint32_t t = 0; t < (uint32_t)ctx.forms.size(); ++t) {
                const auto& pf = tcd.forms[t];
                Rational sc(1, (long long)pf.group->size());
                std::vector<char> seen(ctx.forms[t].classes.count(), 0);
                for (uint32_t x = 0; x < pf.group->size(); ++x) {
                    Cyclotomic v = Cyclotomic::zero();
                    for (auto [t2, i2] : orbit.members)
                        if (t2 == t) v += pf.table->value(i2, pf.table->classes().class_of[x]);
                    v *= Cyclotomic(sc);
                    uint32_t floc = ctx.forms[t].group->local_of(pf.group->parent_id(x));
                    uint32_t cls = ctx.forms[t].classes.class_of[floc];
                    if (!seen[cls]) {
                        idem.v[t][cls] = v;
                        seen[cls] = 1;
                    } else if (!(idem.v[t][cls] == v))
                        throw sheaf_error("packet idempotent not constant on classes");
                }
            }
        } else {
            // induced projector of the extended linear character on the central form K
            for (uint32_t t = 0; t < (uint32_t)ctx.forms.size(); ++t) {
                int charidx = -1;
                for (auto [t2, i2] : orbit.members)
                    if (t2 == t) charidx = (int)i2;
                if (charidx < 0) continue;
                auto K = ctx.subgroup_members(t, pair.central_subgroup);
                auto A = ctx.subgroup_members(t, pair.central_abelian);
                std::vector<char> inA(ctx.forms[t].group->size(), 0);
                for (uint32_t loc : A) inA[loc] = 1;
                const auto& pf = tcd.forms[t];
                std::vector<Cyclotomic> chit(K.size());
                for (uint32_t ki = 0; ki < (uint32_t)K.size(); ++ki) {
                    uint32_t amb = ctx.forms[t].group->parent_id(K[ki]);
                    Elt tp = torus_part(fam, ctx.ambient->element(amb));
                    uint32_t tamb = has_torus_coords(fam) ? ctx.ambient->index_of(tp) : ctx.ambient->identity();
                    uint32_t apart = ctx.ambient->mul(amb, ctx.ambient->inverse(tamb));
                    uint32_t aloc = ctx.forms[t].group->local_of(apart);
                    if (!inA[aloc]) throw sheaf_error("central-form decomposition escaped the abelian part");
                    Cyclotomic psi = de.value(apart);
                    Cyclotomic chi = pf.table->value((uint32_t)charidx,
                                                     pf.table->classes().class_of[pf.group->local_of(tamb)]);
                    chit[ki] = psi * chi;
                }
                FunSpace ind = induce_from_subgroup(ctx, t, K, chit);
                ind.scale(Cyclotomic(Rational(1, (long long)K.size())));
                idem.v[t] = ind.v[t];
            }
        }
        rb.packets.push_back({orbit.label, (int)o, std::move(idem)});
    }
    return rb;
}

/* ---------------- trace functions and packet data ---------------- */

std::vector<FunSpace> ResolvedBlock::trace_functions(uint32_t packet) const {
    const FrobContext& cx = *ctx;
    Family fam = cx.spec.family;
    uint64_t qm = cx.qm;
    std::vector<FunSpace> out;
    const Packet& pk = packets.at(packet);

    if (fam == Family::TorusZ2) throw sheaf_error("family not in dictionary for trace functions: torus-rtimes-z2");

    if (fam == Family::SplitTorus) {
        const auto& tcd = *torus_data;
        const auto& orbit = tcd.orbits[pk.orbit];
        for (auto [t, i] : orbit.members) {
            FunSpace f = FunSpace::zero(cx);
            const auto& pf = tcd.forms[t];
            for (uint32_t x = 0; x < pf.group->size(); ++x) {
                uint32_t floc = cx.forms[t].group->local_of(pf.group->parent_id(x));
                f.v[t][cx.forms[t].classes.class_of[floc]] = pf.table->value(i, pf.table->classes().class_of[x]);
            }
            canonicalize_trace(f);
            out.push_back(std::move(f));
        }
        return out;
    }

    bool borel_case4 = fam == Family::BorelSL3 && pair.name == "case4";
    if (borel_case4) {
        const SmallField& F = cx.ambient->field();
        bool split = cx.spec.p != 3 && qm % 3 == 1;
        auto gp = cx.subgroup_members(0, "mu3U");
        if (!split) {
            auto h = cx.subgroup_members(0, "U");
            std::vector<Cyclotomic> on_h;
            for (uint32_t loc : h) {
                const Elt& e = cx.ambient->element(cx.forms[0].group->parent_id(loc));
                uint32_t arg = F.add(e[2], e[3]);
                on_h.push_back(Cyclotomic::root_of_unity(cx.spec.p, trace_qm(cx, arg)));
            }
            FunSpace f = induce_from_subgroup(cx, 0, h, on_h);
            canonicalize_trace(f);
            out.push_back(std::move(f));
            return out;
        }
        // omega used for component labels
        uint32_t omega = 0;
        for (uint32_t x = 2; x < F.size; ++x)
            if (F.mul(x, F.mul(x, x)) == 1 && x != 1) {
                omega = x;
                break;
            }
        // labels (a, j), a fastest, matching the double of mu3
        for (uint32_t j = 0; j < 3; ++j)
            for (uint32_t a = 0; a < 3; ++a) {
                FunSpace f = FunSpace::zero(cx);
                for (uint32_t tshift = 0; tshift < 3; ++tshift) {
                    std::vector<Cyclotomic> on_gp(gp.size(), Cyclotomic::zero());
                    uint32_t want_t1 = F.pow(omega, a);
                    for (uint32_t gi = 0; gi < (uint32_t)gp.size(); ++gi) {
                        const Elt& e = cx.ambient->element(cx.forms[0].group->parent_id(gp[gi]));
                        if (e[0] != want_t1) continue;
                        uint32_t arg = F.add(e[2], F.mul(case4_lambdas[tshift], e[3]));
                        on_gp[gi] = Cyclotomic::root_of_unity(cx.spec.p, trace_qm(cx, arg));
                    }
                    FunSpace part = induce_from_subgroup(cx, 0, gp, on_gp);
                    part.scale(Cyclotomic::root_of_unity(3, (long long)j * tshift));
                    f += part;
                }
                canonicalize_trace(f);
                out.push_back(std::move(f));
            }
        return out;
    }

    if (fam == Family::Mu3TimesU3) {
        const SmallField& F = cx.ambient->field();
        bool central = pair.subgroup == "Z";
        DatumEval de{&cx, tower, pair.datum, 0, 0, 0};
        de.prepare();
        uint32_t nforms = (uint32_t)cx.forms.size();
        uint32_t ncomp = cx.ambient->component_count();
        for (uint32_t j = 0; j < ncomp; ++j)
            for (uint32_t a = 0; a < ncomp; ++a) {
                FunSpace f = FunSpace::zero(cx);
                for (uint32_t t = 0; t < nforms; ++t) {
                    for (uint32_t x = 0; x < cx.forms[t].group->size(); ++x) {
                        uint32_t amb = cx.forms[t].group->parent_id(x);
                        const Elt& e = cx.ambient->element(amb);
                        if (e[0] != a) continue;
                        Cyclotomic val;
                        if (!central) {
                            uint32_t arg = F.add(F.mul(de.xe, e[1]), F.mul(de.ye, e[2]));
                            val = Cyclotomic::root_of_unity(cx.spec.p, trace_qm(cx, arg));
                        } else {
                            // character of the q-dimensional Heisenberg module: q psi(c) on Z
                            if (e[1] != 0 || e[2] != 0) continue;
                            val = Cyclotomic(Rational((long long)qm)) *
                                  Cyclotomic::root_of_unity(cx.spec.p, trace_qm(cx, F.mul(de.le, e[3])));
                        }
                        val *= Cyclotomic::root_of_unity(3, (long long)j * t);
                        uint32_t cls = cx.forms[t].classes.class_of[x];
                        if (f.v[t][cls].is_zero()) f.v[t][cls] = val;
                        else if (!(f.v[t][cls] == val))
                            throw sheaf_error("trace function not constant on classes");
                    }
                }
                canonicalize_trace(f);
                out.push_back(std::move(f));
            }
        return out;
    }

    // induced singleton packets: the unit-norm trace function is the induced
    // extended character itself
    const auto& tcd = *torus_data;
    const auto& orbit = tcd.orbits[pk.orbit];
    DatumEval de{&cx, tower, pair.datum, 0, 0, 0};
    de.prepare();
    FunSpace f = FunSpace::zero(cx);
    for (uint32_t t = 0; t < (uint32_t)cx.forms.size(); ++t) {
        int charidx = -1;
        for (auto [t2, i2] : orbit.members)
            if (t2 == t) charidx = (int)i2;
        if (charidx < 0) continue;
        auto K = cx.subgroup_members(t, pair.central_subgroup);
        const auto& pf = tcd.forms[t];
        std::vector<Cyclotomic> chit(K.size());
        for (uint32_t ki = 0; ki < (uint32_t)K.size(); ++ki) {
            uint32_t amb = cx.forms[t].group->parent_id(K[ki]);
            Elt tp = torus_part(fam, cx.ambient->element(amb));
            uint32_t tamb = has_torus_coords(fam) ? cx.ambient->index_of(tp) : cx.ambient->identity();
            uint32_t apart = cx.ambient->mul(amb, cx.ambient->inverse(tamb));
            Cyclotomic psi = de.value(apart);
            Cyclotomic chi =
                pf.table->value((uint32_t)charidx, pf.table->classes().class_of[pf.group->local_of(tamb)]);
            chit[ki] = psi * chi;
        }
        FunSpace ind = induce_from_subgroup(cx, t, K, chit);
        f.v[t] = ind.v[t];
    }
    canonicalize_trace(f);
    out.push_back(std::move(f));
    return out;
}

bool ResolvedBlock::datum_supported() const {
    return ctx->spec.family != Family::TorusZ2;
}

ModularData ResolvedBlock::packet_datum(uint32_t packet) const {
    (void)packet;
    Family fam = ctx->spec.family;
    if (fam == Family::TorusZ2)
        throw sheaf_error("family not in dictionary for packet data: torus-rtimes-z2");
    bool mu3_block = (fam == Family::BorelSL3 && pair.name == "case4") || fam == Family::Mu3TimesU3;
    if (mu3_block && ctx->spec.p != 3) return double_abelian(FiniteAbelianGroup{{3}});
    // everything else shipped is a singleton packet with M = Vec
    MetricGroup triv;
    triv.K.orders = {1};
    triv.theta = {Cyclotomic::one()};
    return pointed_modular(triv);
}

uint32_t ResolvedBlock::packet_fixed_count(uint32_t packet) const {
    (void)packet;
    Family fam = ctx->spec.family;
    bool mu3_block = (fam == Family::BorelSL3 && pair.name == "case4") || fam == Family::Mu3TimesU3;
    if (!mu3_block || ctx->spec.p == 3) return 1;
    FiniteAbelianGroup A{{3}};
    uint32_t r = (uint32_t)(ctx->qm % 3);
    std::vector<uint32_t> phi = {0, r % 3, (2 * r) % 3};
    auto perm = double_automorphism(A, phi);
    metric_automorphism_action(double_metric_group(A), perm);
    return (uint32_t)fixed_labels(perm).size();
}


} // namespace csolv
