#include "csolv/groupkit.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace csolv {

std::string family_name(Family f) {
    switch (f) {
        case Family::BorelSL3: return "borel-sl3";
        case Family::SplitTorus: return "split-torus";
        case Family::HeisenbergU3: return "heisenberg-u3";
        case Family::Mu3TimesU3: return "mu3-ltimes-u3";
        case Family::TorusZ2: return "torus-rtimes-z2";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    if (s == "borel-sl3") return Family::BorelSL3;
    if (s == "split-torus") return Family::SplitTorus;
    if (s == "heisenberg-u3") return Family::HeisenbergU3;
    if (s == "mu3-ltimes-u3") return Family::Mu3TimesU3;
    if (s == "torus-rtimes-z2") return Family::TorusZ2;
    throw family_error("unknown family '" + s +
                       "'; supported: borel-sl3, split-torus, heisenberg-u3, mu3-ltimes-u3, torus-rtimes-z2");
}

/* ---------------- SmallField ---------------- */

std::shared_ptr<SmallField> SmallField::make(FieldTower& tower, uint32_t deg) {
    auto sf = std::make_shared<SmallField>();
    sf->p = tower.characteristic();
    sf->deg = deg;
    uint64_t size = 1;
    for (uint32_t i = 0; i < deg; ++i) {
        size *= sf->p;
        if (size > 4096) throw size_error("field too large for table-based enumeration");
    }
    sf->size = (uint32_t)size;
    tower.ensure_degree(deg);
    std::vector<FieldElement> elems(size);
    for (uint64_t i = 0; i < size; ++i) elems[i] = tower.from_index(deg, i);
    sf->mul_t.resize(size * size);
    sf->add_t.resize(size * size);
    sf->inv_t.assign(size, 0);
    sf->neg_t.resize(size);
    sf->frob_p_t.resize(size);
    sf->trace_p.resize(size);
    for (uint64_t i = 0; i < size; ++i) {
        sf->neg_t[i] = (uint32_t)tower.neg(elems[i]).index(sf->p);
        sf->frob_p_t[i] = (uint32_t)tower.pow(elems[i], sf->p).index(sf->p);
        FieldElement tr = tower.zero(deg), f = elems[i];
        for (uint32_t t = 0; t < deg; ++t) {
            tr = tower.add(tr, f);
            f = tower.pow(f, sf->p);
        }
        sf->trace_p[i] = tr.coeffs[0];
        for (uint64_t j = 0; j < size; ++j) {
            sf->mul_t[i * size + j] = (uint32_t)tower.mul(elems[i], elems[j]).index(sf->p);
            sf->add_t[i * size + j] = (uint32_t)tower.add(elems[i], elems[j]).index(sf->p);
        }
        if (i) sf->inv_t[i] = (uint32_t)tower.inv(elems[i]).index(sf->p);
    }
    return sf;
}

uint32_t SmallField::inv(uint32_t a) const {
    if (a == 0) throw field_error("inverse of zero");
    return inv_t[a];
}

uint32_t SmallField::pow(uint32_t a, uint64_t e) const {
    uint32_t acc = 1, base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

uint32_t SmallField::frob(uint32_t a, uint64_t q) const {
    uint32_t r = a;
    while (q > 1) {
        r = frob_p_t[r];
        q /= p;
    }
    return r;
}

/* ---------------- Group generics ---------------- */

uint64_t Group::element_order(uint32_t a) const {
    uint64_t o = 1;
    uint32_t x = a;
    while (x != identity()) {
        x = mul(x, a);
        ++o;
    }
    return o;
}

uint32_t Group::pow(uint32_t a, uint64_t e) const {
    uint32_t acc = identity(), base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

uint64_t Group::exponent() const {
    uint64_t e = 1;
    for (uint32_t a = 0; a < size(); ++a) e = std::lcm(e, element_order(a));
    return e;
}

ClassData conjugacy_classes(const Group& G) {
    uint32_t n = G.size();
    ClassData cd;
    cd.class_of.assign(n, UINT32_MAX);
    auto sweep = [&](uint32_t x) {
        uint32_t cid = (uint32_t)cd.reps.size();
        cd.reps.push_back(x);
        uint64_t count = 0;
        for (uint32_t g = 0; g < n; ++g) {
            uint32_t y = G.mul(G.mul(g, x), G.inverse(g));
            if (cd.class_of[y] == UINT32_MAX) {
                cd.class_of[y] = cid;
                ++count;
            }
        }
        cd.sizes.push_back(count);
    };
    sweep(G.identity());
    for (uint32_t x = 0; x < n; ++x)
        if (cd.class_of[x] == UINT32_MAX) sweep(x);
    cd.inverse_class.resize(cd.reps.size());
    for (uint32_t c = 0; c < cd.reps.size(); ++c) cd.inverse_class[c] = cd.class_of[G.inverse(cd.reps[c])];
    return cd;
}

TwistedClassSet twisted_classes(const Group& G, const std::vector<uint32_t>& twist_map) {
    uint32_t n = G.size();
    TwistedClassSet tc;
    tc.class_of.assign(n, UINT32_MAX);
    for (uint32_t x = 0; x < n; ++x) {
        if (tc.class_of[x] != UINT32_MAX) continue;
        uint32_t cid = (uint32_t)tc.reps.size();
        tc.reps.push_back(x);
        uint64_t count = 0;
        for (uint32_t g = 0; g < n; ++g) {
            uint32_t y = G.mul(G.mul(g, x), G.inverse(twist_map[g]));
            if (tc.class_of[y] == UINT32_MAX) {
                tc.class_of[y] = cid;
                ++count;
            }
        }
        tc.sizes.push_back(count);
    }
    return tc;
}

/* ---------------- CoordinateGroup ---------------- */

namespace {

uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

} // namespace

uint64_t CoordinateGroup::order_formula(const GroupSpec& spec, uint32_t m) {
    uint64_t Q = ipow(ipow(spec.p, spec.k), m);
    switch (spec.family) {
        case Family::BorelSL3: return (Q - 1) * (Q - 1) * Q * Q * Q;
        case Family::SplitTorus: return ipow(Q - 1, spec.rank);
        case Family::HeisenbergU3: return Q * Q * Q;
        case Family::Mu3TimesU3: {
            uint64_t mu = (spec.p == 3) ? 1 : (Q % 3 == 1 ? 3 : 1);
            return mu * Q * Q * Q;
        }
        case Family::TorusZ2: return 2 * (Q - 1);
    }
    return 0;
}

uint32_t CoordinateGroup::group_dim(Family f) {
    switch (f) {
        case Family::BorelSL3: return 5;
        case Family::SplitTorus: return 1;
        case Family::HeisenbergU3: return 3;
        case Family::Mu3TimesU3: return 3;
        case Family::TorusZ2: return 1;
    }
    return 0;
}

uint32_t CoordinateGroup::torus_dim(Family f) {
    switch (f) {
        case Family::BorelSL3: return 2;
        case Family::SplitTorus: return 1;
        case Family::HeisenbergU3: return 0;
        case Family::Mu3TimesU3: return 0;
        case Family::TorusZ2: return 1;
    }
    return 0;
}

uint32_t CoordinateGroup::subgroup_dim(Family f, const std::string& name) {
    if (name == "G") return group_dim(f);
    if (f == Family::BorelSL3) {
        if (name == "B") return 5;
        if (name == "U") return 3;
        if (name == "Z") return 1;
        if (name == "T") return 2;
        if (name == "T12" || name == "T23" || name == "T13") return 1;
        if (name == "mu3") return 0;
        if (name == "H13") return 2;
        if (name == "T12U" || name == "T23U" || name == "T13U") return 4;
        if (name == "mu3U") return 3;
        if (name == "ZT13") return 2;
        if (name == "H13T13") return 3;
    }
    if (f == Family::HeisenbergU3 || f == Family::Mu3TimesU3) {
        if (name == "U") return 3;
        if (name == "Z") return 1;
        if (name == "H13") return 2;
        if (name == "mu3") return 0;
        if (name == "trivial") return 0;
    }
    if (f == Family::SplitTorus || f == Family::TorusZ2) {
        if (name == "T") return 1;
        if (name == "trivial") return 0;
    }
    throw family_error("unknown subgroup '" + name + "' for family " + family_name(f));
}

uint32_t CoordinateGroup::subgroup_torus_dim(Family f, const std::string& name) {
    if (name == "G") return torus_dim(f);
    if (f == Family::BorelSL3) {
        if (name == "B") return 2;
        if (name == "T") return 2;
        if (name == "U" || name == "Z" || name == "H13" || name == "mu3" || name == "mu3U") return 0;
        if (name == "T12" || name == "T23" || name == "T13") return 1;
        if (name == "T12U" || name == "T23U" || name == "T13U" || name == "ZT13" || name == "H13T13") return 1;
    }
    if (f == Family::HeisenbergU3 || f == Family::Mu3TimesU3) return 0;
    if (f == Family::SplitTorus || f == Family::TorusZ2) {
        if (name == "T") return 1;
        if (name == "trivial") return 0;
    }
    throw family_error("unknown subgroup '" + name + "' for family " + family_name(f));
}

CoordinateGroup::CoordinateGroup(const GroupSpec& spec, uint32_t m, FieldTower& tower, uint64_t cap)
    : spec_(spec), m_(m) {
    if (!FieldTower::is_prime(spec.p)) throw family_error("p must be prime");
    q_ = ipow(spec.p, spec.k);
    qm_ = ipow(q_, m);
    closure_ = 1;
    if (spec.family == Family::TorusZ2) closure_ = 2;
    if (spec.family == Family::Mu3TimesU3 && spec.p != 3 && qm_ % 3 != 1) closure_ = 2;
    uint64_t ambient_order = order_formula(spec, m * closure_);
    if (ambient_order > cap)
        throw size_error("enumeration cap exceeded: group order " + std::to_string(ambient_order) + " > cap " +
                         std::to_string(cap));
    uint32_t deg = spec.k * m * closure_;
    F_ = SmallField::make(tower, deg);
    uint32_t N = F_->size;

    auto push = [&](const Elt& e) {
        index_.emplace(e, (uint32_t)elems_.size());
        elems_.push_back(e);
    };
    switch (spec.family) {
        case Family::BorelSL3:
            for (uint32_t t1 = 1; t1 < N; ++t1)
                for (uint32_t t2 = 1; t2 < N; ++t2)
                    for (uint32_t a = 0; a < N; ++a)
                        for (uint32_t b = 0; b < N; ++b)
                            for (uint32_t c = 0; c < N; ++c) push(Elt{t1, t2, a, b, c});
            break;
        case Family::SplitTorus: {
            if (spec.rank < 1 || spec.rank > 5) throw family_error("split-torus rank must be in 1..5");
            std::vector<uint32_t> t(spec.rank, 1);
            bool done = false;
            while (!done) {
                Elt v{1, 1, 1, 1, 1};
                for (uint32_t i = 0; i < spec.rank; ++i) v[i] = t[i];
                push(v);
                uint32_t i = spec.rank;
                done = true;
                while (i-- > 0) {
                    if (++t[i] < N) {
                        done = false;
                        break;
                    }
                    t[i] = 1;
                }
            }
            break;
        }
        case Family::HeisenbergU3:
            for (uint32_t a = 0; a < N; ++a)
                for (uint32_t b = 0; b < N; ++b)
                    for (uint32_t c = 0; c < N; ++c) push(Elt{a, b, c, 0, 0});
            break;
        case Family::Mu3TimesU3: {
            bool mu_present = spec.p != 3 && (ipow(q_, m * closure_) % 3 == 1);
            components_ = mu_present ? 3 : 1;
            for (uint32_t z = 0; z < components_; ++z)
                for (uint32_t a = 0; a < N; ++a)
                    for (uint32_t b = 0; b < N; ++b)
                        for (uint32_t c = 0; c < N; ++c) push(Elt{z, a, b, c, 0});
            break;
        }
        case Family::TorusZ2:
            components_ = 2;
            for (uint32_t eps = 0; eps < 2; ++eps)
                for (uint32_t t = 1; t < N; ++t) push(Elt{eps, t, 0, 0, 0});
            break;
    }

    Elt idelt = mul_elt(elems_[0], inv_elt(elems_[0]));
    id_ = index_.at(idelt);
    assert(id_ == 0);

    frob1_.resize(elems_.size());
    for (uint32_t i = 0; i < elems_.size(); ++i) frob1_[i] = index_.at(frob_elt(elems_[i]));
}

uint32_t CoordinateGroup::index_of(const Elt& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) throw family_error("element not in enumeration");
    return it->second;
}

Elt CoordinateGroup::mul_elt(const Elt& x, const Elt& y) const {
    const SmallField& F = *F_;
    switch (spec_.family) {
        case Family::BorelSL3: {
            uint32_t t1 = x[0], t2 = x[1], a = x[2], b = x[3], c = x[4];
            uint32_t s1 = y[0], s2 = y[1], a2 = y[2], b2 = y[3], c2 = y[4];
            uint32_t s3 = F.inv(F.mul(s1, s2));
            return Elt{F.mul(t1, s1), F.mul(t2, s2), F.add(F.mul(t1, a2), F.mul(a, s2)),
                       F.add(F.mul(t2, b2), F.mul(b, s3)),
                       F.add(F.add(F.mul(t1, c2), F.mul(a, b2)), F.mul(c, s3))};
        }
        case Family::SplitTorus: {
            Elt r{1, 1, 1, 1, 1};
            for (uint32_t i = 0; i < spec_.rank; ++i) r[i] = F.mul(x[i], y[i]);
            return r;
        }
        case Family::HeisenbergU3:
            return Elt{F.add(x[0], y[0]), F.add(x[1], y[1]), F.add(F.add(x[2], y[2]), F.mul(x[0], y[1])), 0, 0};
        case Family::Mu3TimesU3:
            return Elt{(x[0] + y[0]) % components_, F.add(x[1], y[1]), F.add(x[2], y[2]),
                       F.add(F.add(x[3], y[3]), F.mul(x[1], y[2])), 0};
        case Family::TorusZ2:
            return Elt{(x[0] + y[0]) % 2, F.mul(x[1], x[0] ? F.inv(y[1]) : y[1]), 0, 0, 0};
    }
    throw family_error("bad family");
}

Elt CoordinateGroup::inv_elt(const Elt& x) const {
    const SmallField& F = *F_;
    switch (spec_.family) {
        case Family::BorelSL3: {
            uint32_t t1 = x[0], t2 = x[1], a = x[2], b = x[3], c = x[4];
            uint32_t i12 = F.inv(F.mul(t1, t2));
            return Elt{F.inv(t1), F.inv(t2), F.neg(F.mul(a, i12)), F.neg(F.mul(b, t1)),
                       F.sub(F.mul(a, b), F.mul(c, t2))};
        }
        case Family::SplitTorus: {
            Elt r{1, 1, 1, 1, 1};
            for (uint32_t i = 0; i < spec_.rank; ++i) r[i] = F.inv(x[i]);
            return r;
        }
        case Family::HeisenbergU3:
            return Elt{F.neg(x[0]), F.neg(x[1]), F.sub(F.mul(x[0], x[1]), x[2]), 0, 0};
        case Family::Mu3TimesU3:
            return Elt{(components_ - x[0]) % components_, F.neg(x[1]), F.neg(x[2]),
                       F.sub(F.mul(x[1], x[2]), x[3]), 0};
        case Family::TorusZ2:
            return Elt{x[0], x[0] ? x[1] : F.inv(x[1]), 0, 0, 0};
    }
    throw family_error("bad family");
}

Elt CoordinateGroup::frob_elt(const Elt& x) const {
    const SmallField& F = *F_;
    Elt r = x;
    switch (spec_.family) {
        case Family::BorelSL3:
        case Family::SplitTorus:
            for (int i = 0; i < 5; ++i) r[i] = F.frob(x[i], q_);
            break;
        case Family::HeisenbergU3:
            for (int i = 0; i < 3; ++i) r[i] = F.frob(x[i], q_);
            break;
        case Family::Mu3TimesU3:
            r[0] = (uint32_t)((x[0] * (q_ % 3)) % 3) % components_;
            for (int i = 1; i < 4; ++i) r[i] = F.frob(x[i], q_);
            break;
        case Family::TorusZ2:
            r[1] = F.frob(x[1], q_);
            break;
    }
    return r;
}

uint32_t CoordinateGroup::mul(uint32_t a, uint32_t b) const { return index_.at(mul_elt(elems_[a], elems_[b])); }
uint32_t CoordinateGroup::inverse(uint32_t a) const { return index_.at(inv_elt(elems_[a])); }

uint32_t CoordinateGroup::frobenius_m(uint32_t a) const {
    uint32_t r = a;
    for (uint32_t i = 0; i < m_; ++i) r = frob1_[r];
    return r;
}

uint32_t CoordinateGroup::component_of(uint32_t a) const {
    if (spec_.family == Family::Mu3TimesU3 || spec_.family == Family::TorusZ2) return elems_[a][0];
    return 0;
}

bool CoordinateGroup::in_subgroup(const std::string& name, uint32_t idx) const {
    const Elt& e = elems_[idx];
    const SmallField& F = *F_;
    if (name == "G") return true;
    switch (spec_.family) {
        case Family::BorelSL3: {
            uint32_t t1 = e[0], t2 = e[1], a = e[2], b = e[3], c = e[4];
            bool torus = a == 0 && b == 0 && c == 0;
            uint32_t one = F.one();
            if (name == "B") return true;
            if (name == "U") return t1 == one && t2 == one;
            if (name == "Z") return t1 == one && t2 == one && a == 0 && b == 0;
            if (name == "T") return torus;
            if (name == "T12") return torus && t1 == t2;
            if (name == "T23") return torus && F.mul(t1, F.mul(t2, t2)) == one;
            if (name == "T13") return torus && F.mul(F.mul(t1, t1), t2) == one;
            if (name == "mu3") return torus && t1 == t2 && F.mul(F.mul(t1, t1), t1) == one;
            if (name == "H13") return t1 == one && t2 == one && b == 0;
            if (name == "T12U") return t1 == t2;
            if (name == "T23U") return F.mul(t1, F.mul(t2, t2)) == one;
            if (name == "T13U") return F.mul(F.mul(t1, t1), t2) == one;
            if (name == "mu3U") return t1 == t2 && F.mul(F.mul(t1, t1), t1) == one;
            if (name == "ZT13") return F.mul(F.mul(t1, t1), t2) == one && a == 0 && b == 0;
            if (name == "H13T13") return F.mul(F.mul(t1, t1), t2) == one && b == 0;
            break;
        }
        case Family::SplitTorus:
            if (name == "T") return true;
            if (name == "trivial") return idx == id_;
            break;
        case Family::HeisenbergU3:
            if (name == "U") return true;
            if (name == "Z") return e[0] == 0 && e[1] == 0;
            if (name == "H13") return e[1] == 0;
            if (name == "trivial") return idx == id_;
            break;
        case Family::Mu3TimesU3:
            if (name == "U") return e[0] == 0;
            if (name == "Z") return e[0] == 0 && e[1] == 0 && e[2] == 0;
            if (name == "H13") return e[0] == 0 && e[2] == 0;
            if (name == "mu3") return e[1] == 0 && e[2] == 0 && e[3] == 0;
            if (name == "trivial") return idx == id_;
            break;
        case Family::TorusZ2:
            if (name == "T") return e[0] == 0;
            if (name == "trivial") return idx == id_;
            break;
    }
    throw family_error("unknown subgroup '" + name + "' for family " + family_name(spec_.family));
}

/* ---------------- SubgroupView / SemidirectCyclic ---------------- */

SubgroupView::SubgroupView(std::shared_ptr<const Group> parent, std::vector<uint32_t> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    local_.reserve(members_.size());
    for (uint32_t i = 0; i < members_.size(); ++i) local_.emplace(members_[i], i);
    auto it = local_.find(parent_->identity());
    if (it == local_.end()) throw family_error("subgroup view without identity");
    id_ = it->second;
}

uint32_t SubgroupView::local_of(uint32_t parent_idx) const {
    auto it = local_.find(parent_idx);
    if (it == local_.end()) throw family_error("element escapes subgroup view (not closed)");
    return it->second;
}

SemidirectCyclic::SemidirectCyclic(std::shared_ptr<const Group> base, std::vector<uint32_t> frob, uint32_t m)
    : base_(std::move(base)), frob_(std::move(frob)), m_(m) {
    for (uint32_t g = 0; g < base_->size(); ++g) {
        uint32_t x = g;
        for (uint32_t i = 0; i < m_; ++i) x = frob_[x];
        if (x != g) throw family_error("frobenius power is not trivial on the base of the cyclic cover");
    }
}

uint32_t SemidirectCyclic::mul(uint32_t a, uint32_t b) const {
    uint32_t g = base_part(a), i = shift_part(a);
    uint32_t h = base_part(b), j = shift_part(b);
    uint32_t fh = h;
    for (uint32_t t = 0; t < i; ++t) fh = frob_[fh];
    return pack(base_->mul(g, fh), (i + j) % m_);
}

uint32_t SemidirectCyclic::inverse(uint32_t a) const {
    uint32_t g = base_part(a), i = shift_part(a);
    uint32_t gi = base_->inverse(g);
    uint32_t ii = (m_ - i) % m_;
    for (uint32_t t = 0; t < ii; ++t) gi = frob_[gi];
    return pack(gi, ii);
}

/* ---------------- context / forms ---------------- */

FrobContext build_context(const GroupSpec& spec, uint32_t m, FieldTower& tower, uint64_t cap) {
    FrobContext ctx;
    ctx.spec = spec;
    ctx.m = m;
    ctx.ambient = std::make_shared<CoordinateGroup>(spec, m, tower, cap);
    ctx.q = ctx.ambient->q();
    ctx.qm = ctx.ambient->qm();
    const CoordinateGroup& G = *ctx.ambient;

    struct Twist {
        std::string label;
        Elt rep;
    };
    std::vector<Twist> twists;
    switch (spec.family) {
        case Family::Mu3TimesU3: {
            bool split = spec.p != 3 && ctx.qm % 3 == 1;
            twists.push_back({"1", Elt{0, 0, 0, 0, 0}});
            if (split) {
                twists.push_back({"w", Elt{1, 0, 0, 0, 0}});
                twists.push_back({"w2", Elt{2, 0, 0, 0, 0}});
            }
            break;
        }
        case Family::TorusZ2:
            twists.push_back({"1", Elt{0, 1, 0, 0, 0}});
            twists.push_back({"s", Elt{1, 1, 0, 0, 0}});
            break;
        case Family::SplitTorus:
            twists.push_back({"1", Elt{1, 1, 1, 1, 1}});
            break;
        case Family::HeisenbergU3:
            twists.push_back({"1", Elt{0, 0, 0, 0, 0}});
            break;
        case Family::BorelSL3:
            twists.push_back({"1", Elt{1, 1, 0, 0, 0}});
            break;
    }

    for (const auto& tw : twists) {
        Form form;
        form.label = tw.label;
        uint32_t t = G.index_of(tw.rep);
        form.twist_rep = t;
        std::vector<uint32_t> members;
        uint32_t tinv = G.inverse(t);
        for (uint32_t x = 0; x < G.size(); ++x) {
            uint32_t fx = G.frobenius_m(x);
            if (G.mul(G.mul(t, fx), tinv) == x) members.push_back(x);
        }
        form.group = std::make_shared<SubgroupView>(ctx.ambient, std::move(members));
        form.classes = conjugacy_classes(*form.group);
        bool preserved = true;
        std::vector<uint32_t> fl(form.group->size());
        for (uint32_t x = 0; x < form.group->size(); ++x) {
            uint32_t fx = G.frobenius(form.group->parent_id(x));
            if (!form.group->contains_parent(fx)) {
                preserved = false;
                break;
            }
            fl[x] = form.group->local_of(fx);
        }
        if (preserved) form.frob_local = std::move(fl);
        ctx.forms.push_back(std::move(form));
    }
    return ctx;
}

std::vector<uint32_t> FrobContext::subgroup_members(uint32_t f, const std::string& name) const {
    const Form& form = forms.at(f);
    std::vector<uint32_t> out;
    for (uint32_t x = 0; x < form.group->size(); ++x)
        if (ambient->in_subgroup(name, form.group->parent_id(x))) out.push_back(x);
    return out;
}

TwistedClassSet frobenius_twisted_classes(const FrobContext& ctx) {
    const Form& f = ctx.untwisted();
    if (f.frob_local.empty()) throw family_error("Frobenius does not preserve the untwisted form");
    return twisted_classes(*f.group, f.frob_local);
}

/* ---------------- norm map ---------------- */

NormMap::NormMap(const FrobContext& high, const FrobContext& low, FieldTower& tower)
    : high_(high), low_(low), tower_(tower) {
    if (high.spec.family != low.spec.family || high.spec.p != low.spec.p || high.spec.k != low.spec.k)
        throw family_error("norm map endpoints disagree");
    if (low.m != 1) throw family_error("norm map target must be level 1");
    bool connected = high.spec.family == Family::BorelSL3 || high.spec.family == Family::SplitTorus ||
                     high.spec.family == Family::HeisenbergU3;
    if (!connected && high.m != 1)
        throw family_error("norm map for disconnected families is only available at level 1");
}

namespace {

struct TowerElt {
    FieldElement t1, t2, a, b, c;
};

TowerElt tower_embed_all(FieldTower& tw, const TowerElt& x, uint32_t L) {
    return TowerElt{tw.embed(x.t1, L), tw.embed(x.t2, L), tw.embed(x.a, L), tw.embed(x.b, L), tw.embed(x.c, L)};
}

uint32_t common_level(const TowerElt& x, const TowerElt& y) {
    uint32_t L = std::lcm(x.t1.deg, y.t1.deg);
    L = std::lcm(L, std::lcm(x.a.deg, y.a.deg));
    L = std::lcm(L, std::lcm(x.b.deg, y.b.deg));
    L = std::lcm(L, std::lcm(x.c.deg, y.c.deg));
    L = std::lcm(L, std::lcm(x.t2.deg, y.t2.deg));
    return L;
}

TowerElt borel_mul(FieldTower& tw, const TowerElt& xin, const TowerElt& yin) {
    uint32_t L = common_level(xin, yin);
    TowerElt x = tower_embed_all(tw, xin, L), y = tower_embed_all(tw, yin, L);
    FieldElement s3 = tw.inv(tw.mul(y.t1, y.t2));
    TowerElt r;
    r.t1 = tw.mul(x.t1, y.t1);
    r.t2 = tw.mul(x.t2, y.t2);
    r.a = tw.add(tw.mul(x.t1, y.a), tw.mul(x.a, y.t2));
    r.b = tw.add(tw.mul(x.t2, y.b), tw.mul(x.b, s3));
    r.c = tw.add(tw.add(tw.mul(x.t1, y.c), tw.mul(x.a, y.b)), tw.mul(x.c, s3));
    return r;
}

TowerElt borel_inv(FieldTower& tw, const TowerElt& xin) {
    uint32_t L = common_level(xin, xin);
    TowerElt x = tower_embed_all(tw, xin, L);
    FieldElement i12 = tw.inv(tw.mul(x.t1, x.t2));
    TowerElt r;
    r.t1 = tw.inv(x.t1);
    r.t2 = tw.inv(x.t2);
    r.a = tw.neg(tw.mul(x.a, i12));
    r.b = tw.neg(tw.mul(x.b, x.t1));
    r.c = tw.sub(tw.mul(x.a, x.b), tw.mul(x.c, x.t2));
    return r;
}

TowerElt tower_frob(FieldTower& tw, const TowerElt& x, uint64_t q, uint32_t m) {
    return TowerElt{tw.frobenius_power(x.t1, q, m), tw.frobenius_power(x.t2, q, m), tw.frobenius_power(x.a, q, m),
                    tw.frobenius_power(x.b, q, m), tw.frobenius_power(x.c, q, m)};
}

} // namespace

NormResult NormMap::transfer(uint32_t x_local) const {
    const CoordinateGroup& GH = *high_.ambient;
    const CoordinateGroup& GL = *low_.ambient;
    uint32_t deg_m = high_.spec.k * high_.m * GH.closure();
    uint32_t deg_1 = low_.spec.k * GL.closure();
    uint64_t q = high_.q;
    uint32_t m = high_.m;
    const Elt& xe = GH.element(high_.untwisted().group->parent_id(x_local));

    auto fe = [&](uint32_t idx) { return tower_.from_index(deg_m, idx); };
    auto down = [&](const FieldElement& e) { return (uint32_t)tower_.project(e, deg_1).index(high_.spec.p); };

    switch (high_.spec.family) {
        case Family::SplitTorus: {
            Elt beta{1, 1, 1, 1, 1};
            for (uint32_t i = 0; i < high_.spec.rank; ++i) {
                FieldElement xi = fe(xe[i]);
                FieldElement tau = tower_.lang_multiplicative(xi, q);
                FieldElement b = tower_.mul(tower_.frobenius_power(tau, q, m), tower_.inv(tau));
                beta[i] = down(b);
            }
            uint32_t amb = GL.index_of(beta);
            const Form& f0 = low_.untwisted();
            uint32_t loc = f0.group->local_of(amb);
            return {0, f0.classes.class_of[loc]};
        }
        case Family::HeisenbergU3:
        case Family::BorelSL3: {
            bool borel = high_.spec.family == Family::BorelSL3;
            FieldElement t1 = borel ? fe(xe[0]) : tower_.one(deg_m);
            FieldElement t2 = borel ? fe(xe[1]) : tower_.one(deg_m);
            FieldElement xa = fe(xe[borel ? 2 : 0]);
            FieldElement xb = fe(xe[borel ? 3 : 1]);
            FieldElement xc = fe(xe[borel ? 4 : 2]);
            FieldElement t3 = tower_.inv(tower_.mul(t1, t2));
            FieldElement tau1 = borel ? tower_.lang_multiplicative(t1, q) : tower_.one(deg_m);
            FieldElement tau2 = borel ? tower_.lang_multiplicative(t2, q) : tower_.one(deg_m);
            auto up = [&](const FieldElement& e, uint32_t L) { return tower_.embed(e, L); };
            // A^q - t2 A = tau1 a, rewritten as (1/t2) A^q - A = tau1 a / t2
            uint32_t L0 = std::lcm((uint32_t)tau1.deg, deg_m);
            FieldElement inv_t2 = tower_.inv(up(t2, L0));
            FieldElement rhsA = tower_.mul(tower_.mul(up(tau1, L0), up(xa, L0)), inv_t2);
            FieldElement A = tower_.lang_additive_twisted(inv_t2, rhsA, q);
            uint32_t L1 = std::lcm((uint32_t)A.deg, std::lcm(L0, (uint32_t)tau2.deg));
            FieldElement inv_t3 = tower_.inv(up(t3, L1));
            FieldElement rhsB = tower_.mul(tower_.mul(up(tau2, L1), up(xb, L1)), inv_t3);
            FieldElement B = tower_.lang_additive_twisted(inv_t3, rhsB, q);
            uint32_t L2 = std::lcm((uint32_t)B.deg, L1);
            FieldElement inv_t3b = tower_.inv(up(t3, L2));
            FieldElement rhsC = tower_.mul(
                tower_.add(tower_.mul(up(tau1, L2), up(xc, L2)), tower_.mul(up(A, L2), up(xb, L2))), inv_t3b);
            FieldElement C = tower_.lang_additive_twisted(inv_t3b, rhsC, q);
            uint32_t L = std::lcm((uint32_t)C.deg, L2);
            TowerElt alpha{up(tau1, L), up(tau2, L), up(A, L), up(B, L), up(C, L)};
            TowerElt lhs = borel_mul(tower_, borel_inv(tower_, alpha), tower_frob(tower_, alpha, q, 1));
            TowerElt xt{up(t1, L), up(t2, L), up(xa, L), up(xb, L), up(xc, L)};
            uint32_t LL = common_level(lhs, xt);
            TowerElt l2 = tower_embed_all(tower_, lhs, LL), x2 = tower_embed_all(tower_, xt, LL);
            if (!(l2.t1 == x2.t1 && l2.t2 == x2.t2 && l2.a == x2.a && l2.b == x2.b && l2.c == x2.c))
                throw family_error("norm map: Lang section verification failed");
            TowerElt beta = borel_mul(tower_, tower_frob(tower_, alpha, q, m), borel_inv(tower_, alpha));
            Elt be{1, 1, 0, 0, 0};
            if (borel) {
                be = Elt{down(beta.t1), down(beta.t2), down(beta.a), down(beta.b), down(beta.c)};
            } else {
                be = Elt{down(beta.a), down(beta.b), down(beta.c), 0, 0};
            }
            uint32_t amb = GL.index_of(be);
            const Form& f0 = low_.untwisted();
            uint32_t loc = f0.group->local_of(amb);
            return {0, f0.classes.class_of[loc]};
        }
        default: {
            // level 1 only (enforced in the constructor): the transfer is the
            // identity on the untwisted form
            uint32_t amb = GL.index_of(xe);
            const Form& f0 = low_.untwisted();
            return {0, f0.classes.class_of[f0.group->local_of(amb)]};
        }
    }
}

void NormMap::verify_bijectivity() const {
    bool connected = high_.spec.family == Family::BorelSL3 || high_.spec.family == Family::SplitTorus ||
                     high_.spec.family == Family::HeisenbergU3;
    if (!connected) {
        // level 1 only: the twisted Frobenius acts trivially on each form, so the
        // sF-twisted classes of G^{sF} are its ordinary classes and the transfer
        // is the identity form by form
        if (high_.forms.size() != low_.forms.size()) throw family_error("norm map form lists disagree");
        std::vector<std::pair<uint32_t, uint32_t>> hits;
        for (uint32_t fi = 0; fi < (uint32_t)high_.forms.size(); ++fi) {
            const Form& f = high_.forms[fi];
            if (f.label != low_.forms[fi].label) throw family_error("norm map form labels disagree");
            for (uint32_t c = 0; c < f.classes.count(); ++c) {
                uint32_t amb = f.group->parent_id(f.classes.reps[c]);
                hits.push_back({fi, low_.forms[fi].classes.class_of[low_.forms[fi].group->local_of(amb)]});
            }
        }
        std::sort(hits.begin(), hits.end());
        if (std::adjacent_find(hits.begin(), hits.end()) != hits.end())
            throw family_error("norm map not injective on twisted classes");
        uint64_t targets = 0;
        for (const auto& f : low_.forms) targets += f.classes.count();
        if (hits.size() != targets)
            throw family_error("norm map misses classes: " + std::to_string(hits.size()) + " vs " +
                               std::to_string(targets));
        return;
    }
    TwistedClassSet tc = frobenius_twisted_classes(high_);
    std::vector<std::pair<uint32_t, uint32_t>> hits;
    for (uint32_t c = 0; c < tc.count(); ++c) {
        NormResult r = transfer(tc.reps[c]);
        if (tc.sizes[c] > 1) {
            uint32_t other = UINT32_MAX;
            for (uint32_t x = 0; x < (uint32_t)tc.class_of.size() && other == UINT32_MAX; ++x)
                if (tc.class_of[x] == c && x != tc.reps[c]) other = x;
            NormResult r2 = transfer(other);
            if (r2.form != r.form || r2.class_id != r.class_id)
                throw family_error("norm map not constant on a twisted class");
        }
        hits.push_back({r.form, r.class_id});
    }
    std::sort(hits.begin(), hits.end());
    if (std::adjacent_find(hits.begin(), hits.end()) != hits.end())
        throw family_error("norm map not injective on twisted classes");
    uint64_t targets = 0;
    for (const auto& f : low_.forms) targets += f.classes.count();
    if (hits.size() != targets)
        throw family_error("norm map misses classes: " + std::to_string(hits.size()) + " vs " +
                           std::to_string(targets));
}

} // namespace csolv
