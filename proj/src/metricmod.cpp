#include "csolv/metricmod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csolv {

std::vector<uint32_t> FiniteAbelianGroup::tuple(uint64_t idx) const {
    std::vector<uint32_t> t(orders.size());
    for (size_t i = 0; i < orders.size(); ++i) {
        t[i] = (uint32_t)(idx % orders[i]);
        idx /= orders[i];
    }
    return t;
}

uint64_t FiniteAbelianGroup::index(const std::vector<uint32_t>& t) const {
    uint64_t idx = 0;
    for (size_t i = orders.size(); i-- > 0;) idx = idx * orders[i] + (t[i] % orders[i]);
    return idx;
}

uint64_t FiniteAbelianGroup::add(uint64_t a, uint64_t b) const {
    auto ta = tuple(a), tb = tuple(b);
    for (size_t i = 0; i < orders.size(); ++i) ta[i] = (ta[i] + tb[i]) % orders[i];
    return index(ta);
}

uint64_t FiniteAbelianGroup::neg(uint64_t a) const {
    auto t = tuple(a);
    for (size_t i = 0; i < orders.size(); ++i) t[i] = (orders[i] - t[i]) % orders[i];
    return index(t);
}

Cyclotomic MetricGroup::bilinear(uint64_t a, uint64_t c) const {
    return theta[K.add(a, c)] * theta[a].inverse() * theta[c].inverse();
}

bool MetricGroup::theta_even() const {
    for (uint64_t a = 0; a < K.size(); ++a)
        if (!(theta[K.neg(a)] == theta[a])) return false;
    return true;
}

bool MetricGroup::bilinear_biadditive() const {
    uint64_t n = K.size();
    for (uint64_t a = 0; a < n; ++a)
        for (uint64_t c1 = 0; c1 < n; ++c1)
            for (uint64_t c2 = 0; c2 < n; ++c2)
                if (!(bilinear(a, K.add(c1, c2)) == bilinear(a, c1) * bilinear(a, c2))) return false;
    return true;
}

bool MetricGroup::nondegenerate() const {
    uint64_t n = K.size();
    for (uint64_t a = 1; a < n; ++a) {
        bool trivial = true;
        for (uint64_t c = 0; c < n && trivial; ++c)
            if (!(bilinear(a, c) == Cyclotomic::one())) trivial = false;
        if (trivial) return false;
    }
    return true;
}

void MetricGroup::validate() const {
    if (theta.size() != K.size()) throw metric_error("theta values missing");
    if (!(theta[0] == Cyclotomic::one())) throw metric_error("theta(0) != 1");
    for (const auto& t : theta)
        if (!t.is_root_of_unity()) throw metric_error("theta value is not a root of unity");
    if (!theta_even()) throw metric_error("theta(-a) != theta(a)");
    if (!bilinear_biadditive()) throw metric_error("associated form is not biadditive");
}

ModularData pointed_modular(const MetricGroup& m) {
    m.validate();
    if (!m.nondegenerate()) throw metric_error("degenerate metric group: no pointed modular category");
    uint64_t n = m.K.size();
    ModularData d;
    d.global_dim = n;
    for (uint64_t a = 0; a < n; ++a) {
        auto t = m.K.tuple(a);
        std::string lab;
        for (size_t i = 0; i < t.size(); ++i) lab += (i ? "," : "") + std::to_string(t[i]);
        d.labels.push_back("(" + lab + ")");
    }
    d.fusion.assign(n, std::vector<std::vector<uint32_t>>(n, std::vector<uint32_t>(n, 0)));
    for (uint64_t a = 0; a < n; ++a)
        for (uint64_t b = 0; b < n; ++b) d.fusion[a][b][m.K.add(a, b)] = 1;
    d.S.assign(n, std::vector<Cyclotomic>(n));
    for (uint64_t a = 0; a < n; ++a)
        for (uint64_t c = 0; c < n; ++c) d.S[a][c] = m.bilinear(a, c);
    d.T = m.theta;
    d.fpdim.assign(n, 1);
    return d;
}

MetricGroup double_metric_group(const FiniteAbelianGroup& A) {
    MetricGroup m;
    m.K.orders = A.orders;
    for (uint32_t dd : A.orders) m.K.orders.push_back(dd);
    uint64_t n = m.K.size();
    size_t r = A.orders.size();
    m.theta.reserve(n);
    for (uint64_t x = 0; x < n; ++x) {
        auto t = m.K.tuple(x);
        // theta(a, chi) = chi(a) = prod zeta_{d_i}^{a_i e_i}
        Cyclotomic v = Cyclotomic::one();
        for (size_t i = 0; i < r; ++i)
            v *= Cyclotomic::root_of_unity(A.orders[i], (long long)t[i] * t[r + i]);
        m.theta.push_back(v);
    }
    return m;
}

ModularData double_abelian(const FiniteAbelianGroup& A) { return pointed_modular(double_metric_group(A)); }

uint64_t integer_sqrt(uint64_t n) {
    uint64_t r = (uint64_t)std::sqrt((double)n);
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

ModularReport verify_modular(const ModularData& d, bool require_square_dim) {
    ModularReport rep;
    uint32_t n = d.rank();
    bool sym = true;
    for (uint32_t a = 0; a < n && sym; ++a)
        for (uint32_t c = a + 1; c < n && sym; ++c)
            if (!(d.S[a][c] == d.S[c][a])) sym = false;
    rep.checks.push_back({"s.symmetric", sym});

    bool troots = true;
    for (uint32_t a = 0; a < n && troots; ++a)
        if (!d.T[a].is_root_of_unity()) troots = false;
    rep.checks.push_back({"t.roots_of_unity", troots});

    bool unitary = true;
    for (uint32_t a = 0; a < n && unitary; ++a)
        for (uint32_t b = 0; b < n && unitary; ++b) {
            Cyclotomic acc = Cyclotomic::zero();
            for (uint32_t x = 0; x < n; ++x) acc += d.S[a][x] * d.S[b][x].conjugate();
            Cyclotomic want = (a == b) ? Cyclotomic(Rational((long long)d.global_dim)) : Cyclotomic::zero();
            if (!(acc == want)) unitary = false;
        }
    rep.checks.push_back({"s.unitary_up_to_dim", unitary});

    bool ssq = true;
    {
        // S * S must be dim times a permutation matrix squaring to the identity
        std::vector<int> perm(n, -1);
        for (uint32_t a = 0; a < n && ssq; ++a) {
            for (uint32_t b = 0; b < n; ++b) {
                Cyclotomic acc = Cyclotomic::zero();
                for (uint32_t x = 0; x < n; ++x) acc += d.S[a][x] * d.S[x][b];
                if (acc.is_zero()) continue;
                if (!(acc == Cyclotomic(Rational((long long)d.global_dim))) || perm[a] >= 0) {
                    ssq = false;
                    break;
                }
                perm[a] = (int)b;
            }
            if (ssq && perm[a] < 0) ssq = false;
        }
        if (ssq)
            for (uint32_t a = 0; a < n; ++a)
                if (perm[perm[a]] != (int)a) ssq = false;
    }
    rep.checks.push_back({"s.squared_is_dim_times_conjugation", ssq});

    bool verlinde = true;
    Rational dim_inv(1, (long long)d.global_dim);
    for (uint32_t a = 0; a < n && verlinde; ++a)
        for (uint32_t b = 0; b < n && verlinde; ++b)
            for (uint32_t c = 0; c < n && verlinde; ++c) {
                Cyclotomic acc = Cyclotomic::zero();
                for (uint32_t x = 0; x < n; ++x)
                    acc += d.S[a][x] * d.S[b][x] * d.S[c][x].conjugate() * d.S[0][x].inverse();
                acc *= Cyclotomic(dim_inv);
                if (!acc.is_rational() || !acc.rational_value().is_integer() ||
                    acc.rational_value().is_negative() ||
                    acc.rational_value() != Rational((long long)d.fusion[a][b][c]))
                    verlinde = false;
            }
    rep.checks.push_back({"verlinde.integral_nonnegative_matches", verlinde});

    bool fpd = true;
    unsigned __int128 total = 0;
    for (uint32_t a = 0; a < n; ++a) {
        if (d.fpdim[a] == 0) fpd = false;
        total += (unsigned __int128)d.fpdim[a] * d.fpdim[a];
    }
    if (total != d.global_dim) fpd = false;
    rep.checks.push_back({"fpdim.positive_integral_sums_to_dim", fpd});

    if (require_square_dim) {
        uint64_t r = integer_sqrt(d.global_dim);
        rep.checks.push_back({"dim.perfect_square", r * r == d.global_dim});
    }
    return rep;
}

std::vector<uint32_t> metric_automorphism_action(const MetricGroup& m, const std::vector<uint32_t>& perm) {
    uint64_t n = m.K.size();
    if (perm.size() != n) throw metric_error("automorphism size mismatch");
    // must be an automorphism preserving theta
    for (uint64_t a = 0; a < n; ++a)
        for (uint64_t b = 0; b < n; ++b)
            if (perm[m.K.add(a, b)] != m.K.add(perm[a], perm[b]))
                throw metric_error("permutation is not a group automorphism");
    for (uint64_t a = 0; a < n; ++a)
        if (!(m.theta[perm[a]] == m.theta[a])) throw metric_error("automorphism does not preserve theta");
    return perm;
}

std::vector<uint32_t> fixed_labels(const std::vector<uint32_t>& perm) {
    std::vector<uint32_t> out;
    for (uint32_t a = 0; a < perm.size(); ++a)
        if (perm[a] == a) out.push_back(a);
    return out;
}

std::vector<uint32_t> double_automorphism(const FiniteAbelianGroup& A, const std::vector<uint32_t>& phi) {
    size_t r = A.orders.size();
    uint64_t nA = A.size();
    // phi^{-1}
    std::vector<uint32_t> phinv(nA);
    for (uint64_t a = 0; a < nA; ++a) phinv[phi[a]] = (uint32_t)a;
    FiniteAbelianGroup K;
    K.orders = A.orders;
    for (uint32_t dd : A.orders) K.orders.push_back(dd);
    std::vector<uint32_t> out(K.size());
    for (uint64_t x = 0; x < K.size(); ++x) {
        auto t = K.tuple(x);
        std::vector<uint32_t> a(t.begin(), t.begin() + r), e(t.begin() + r, t.end());
        auto fa = A.tuple(phi[A.index(a)]);
        // chi' = chi o phi^{-1}: exponent e'_i with chi'(g_i) = chi(phi^{-1}(g_i));
        // in additive Q/Z coordinates e'_i = d_i * sum_j e_j (phi^{-1} g_i)_j / d_j mod d_i
        std::vector<uint32_t> e2(r);
        for (size_t i = 0; i < r; ++i) {
            std::vector<uint32_t> gi(r, 0);
            gi[i] = 1 % A.orders[i];
            auto y = A.tuple(phinv[A.index(gi)]);
            Rational acc(0);
            for (size_t j = 0; j < r; ++j) acc += Rational((long long)e[j] * y[j], (long long)A.orders[j]);
            acc *= Rational((long long)A.orders[i]);
            // reduce mod d_i; acc is an integer because chi' is a character
            if (!acc.is_integer()) throw metric_error("contragradient action produced a non-integer exponent");
            long long v = acc.num() % (long long)A.orders[i];
            if (v < 0) v += A.orders[i];
            e2[i] = (uint32_t)v;
        }
        std::vector<uint32_t> t2(fa);
        t2.insert(t2.end(), e2.begin(), e2.end());
        out[x] = (uint32_t)K.index(t2);
    }
    return out;
}

uint64_t MetricSampler::next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

MetricGroup MetricSampler::sample(uint32_t max_order) {
    for (;;) {
        // random cyclic factors with product <= max_order
        std::vector<uint32_t> orders;
        uint64_t sz = 1;
        uint32_t nf = 1 + (uint32_t)(next() % 2);
        for (uint32_t i = 0; i < nf; ++i) {
            uint32_t d = 2 + (uint32_t)(next() % 7);
            if (sz * d > max_order) break;
            orders.push_back(d);
            sz *= d;
        }
        if (orders.empty()) continue;
        MetricGroup m;
        m.K.orders = orders;
        size_t r = orders.size();
        // quadratic form: theta(x) = prod_i zeta^{t_i x_i^2} * prod_{i<j} zeta^{b_ij x_i x_j}
        std::vector<Rational> diag(r);
        std::vector<std::vector<Rational>> off(r, std::vector<Rational>(r, Rational(0)));
        for (size_t i = 0; i < r; ++i) {
            uint32_t d = orders[i];
            if (d % 2 == 0) diag[i] = Rational((long long)(next() % (2 * d)), 2LL * d);
            else diag[i] = Rational((long long)(next() % d), (long long)d);
        }
        for (size_t i = 0; i < r; ++i)
            for (size_t j = i + 1; j < r; ++j) {
                uint32_t g = std::gcd(orders[i], orders[j]);
                off[i][j] = Rational((long long)(next() % g), (long long)g);
            }
        m.theta.resize(m.K.size());
        for (uint64_t x = 0; x < m.K.size(); ++x) {
            auto t = m.K.tuple(x);
            Rational e(0);
            for (size_t i = 0; i < r; ++i) {
                e += diag[i] * Rational((long long)t[i] * t[i]);
                for (size_t j = i + 1; j < r; ++j) e += off[i][j] * Rational((long long)t[i] * t[j]);
            }
            // root of unity exp(2 pi i e)
            long long den = e.den(), num = ((e.num() % den) + den) % den;
            m.theta[x] = Cyclotomic::root_of_unity((uint32_t)den, num);
        }
        if (!(m.theta[0] == Cyclotomic::one())) continue;
        if (!m.theta_even() || !m.bilinear_biadditive()) continue;
        if (!m.nondegenerate()) continue;
        return m;
    }
}

} // namespace csolv
