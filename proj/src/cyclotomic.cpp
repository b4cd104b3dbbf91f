#include "csolv/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace csolv {

unsigned long long euler_phi(unsigned long long n) {
    unsigned long long r = n;
    for (unsigned long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            r -= r / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

std::vector<uint32_t> prime_factors(uint32_t n) {
    std::vector<uint32_t> ps;
    for (uint32_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

namespace {

long long checked_ll(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw arithmetic_error("cyclotomic integer coefficient overflow");
    return static_cast<long long>(v);
}

// x^n - 1 divided exactly by all Phi_d, d | n, d < n
std::vector<long long> cyclotomic_poly(uint32_t n, std::map<uint32_t, std::vector<long long>>& cache) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<long long> poly(n + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    for (uint32_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        std::vector<long long> phi_d = cyclotomic_poly(d, cache);
        // exact division poly /= phi_d
        std::vector<long long> q(poly.size() - phi_d.size() + 1, 0);
        std::vector<long long> r = poly;
        for (size_t i = q.size(); i-- > 0;) {
            long long coef = r[i + phi_d.size() - 1]; // leading coeff of phi_d is 1
            q[i] = coef;
            if (coef == 0) continue;
            for (size_t j = 0; j < phi_d.size(); ++j)
                r[i + j] = checked_ll(static_cast<__int128>(r[i + j]) - static_cast<__int128>(coef) * phi_d[j]);
        }
        poly = q;
    }
    cache[n] = poly;
    return poly;
}

struct CycCtx {
    uint32_t n;
    uint32_t phi;
    std::vector<long long> mod;              // Phi_n, degree phi
    std::vector<std::vector<long long>> red; // red[k] = x^k mod Phi_n, k in [0, n)
};

struct DescentSolver {
    // solves A*d = v where columns of A are red_n[j*(n/m)] (the lifted power
    // basis of Q(zeta_m)); built once per (n, m)
    uint32_t n = 0, m = 0, phin = 0, phim = 0;
    std::vector<std::vector<Rational>> elim;  // row-reduced [A | I] right half
    std::vector<std::vector<Rational>> rowsA; // row-reduced left half
    std::vector<int> pivot_col_of_row;

    // returns coefficients over Q(zeta_m) power basis, or nullopt if v is not
    // in the subfield
    std::optional<std::vector<Rational>> solve(const std::vector<Rational>& v) const {
        std::vector<Rational> w(phin);
        for (uint32_t j = 0; j < phin; ++j) {
            if (v[j].is_zero()) continue;
            for (uint32_t i = 0; i < phin; ++i) {
                if (!elim[i][j].is_zero()) w[i] += elim[i][j] * v[j];
            }
        }
        std::vector<Rational> d(phim);
        for (uint32_t i = phin; i-- > 0;) {
            int pc = pivot_col_of_row[i];
            if (pc < 0) {
                if (!w[i].is_zero()) return std::nullopt;
                continue;
            }
            Rational acc = w[i];
            for (uint32_t j = pc + 1; j < phim; ++j)
                if (!rowsA[i][j].is_zero()) acc -= rowsA[i][j] * d[j];
            d[pc] = acc / rowsA[i][pc];
        }
        return d;
    }
};

class Registry {
  public:
    static Registry& get() {
        static Registry r;
        return r;
    }

    std::shared_ptr<const CycCtx> ctx(uint32_t n) {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = ctxs_.find(n);
        if (it != ctxs_.end()) return it->second;
        auto c = std::make_shared<CycCtx>();
        c->n = n;
        c->phi = static_cast<uint32_t>(euler_phi(n));
        c->mod = cyclotomic_poly(n, poly_cache_);
        c->red.resize(n);
        for (uint32_t k = 0; k < c->phi && k < n; ++k) {
            c->red[k].assign(c->phi, 0);
            c->red[k][k] = 1;
        }
        for (uint32_t k = c->phi; k < n; ++k) {
            // x * red[k-1] reduced by Phi_n
            std::vector<long long> t(c->phi + 1, 0);
            for (uint32_t i = 0; i < c->phi; ++i) t[i + 1] = c->red[k - 1][i];
            long long lead = t[c->phi];
            if (lead != 0)
                for (uint32_t i = 0; i <= c->phi; ++i)
                    t[i] = checked_ll(static_cast<__int128>(t[i]) - static_cast<__int128>(lead) * c->mod[i]);
            t.resize(c->phi);
            c->red[k] = std::move(t);
        }
        ctxs_[n] = c;
        return c;
    }

    std::shared_ptr<const DescentSolver> descent(uint32_t n, uint32_t m) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = descents_.find({n, m});
            if (it != descents_.end()) return it->second;
        }
        auto cn = ctx(n);
        auto ds = std::make_shared<DescentSolver>();
        ds->n = n;
        ds->m = m;
        ds->phin = cn->phi;
        ds->phim = static_cast<uint32_t>(euler_phi(m));
        uint32_t step = n / m;
        ds->rowsA.assign(ds->phin, std::vector<Rational>(ds->phim));
        for (uint32_t j = 0; j < ds->phim; ++j) {
            const auto& col = cn->red[(static_cast<uint64_t>(j) * step) % n];
            for (uint32_t i = 0; i < ds->phin; ++i) ds->rowsA[i][j] = Rational(col[i]);
        }
        ds->elim.assign(ds->phin, std::vector<Rational>(ds->phin));
        for (uint32_t i = 0; i < ds->phin; ++i) ds->elim[i][i] = Rational(1);
        ds->pivot_col_of_row.assign(ds->phin, -1);
        uint32_t row = 0;
        for (uint32_t col = 0; col < ds->phim && row < ds->phin; ++col) {
            uint32_t piv = row;
            while (piv < ds->phin && ds->rowsA[piv][col].is_zero()) ++piv;
            if (piv == ds->phin) continue;
            std::swap(ds->rowsA[piv], ds->rowsA[row]);
            std::swap(ds->elim[piv], ds->elim[row]);
            for (uint32_t i = row + 1; i < ds->phin; ++i) {
                if (ds->rowsA[i][col].is_zero()) continue;
                Rational f = ds->rowsA[i][col] / ds->rowsA[row][col];
                for (uint32_t j = col; j < ds->phim; ++j) ds->rowsA[i][j] -= f * ds->rowsA[row][j];
                for (uint32_t j = 0; j < ds->phin; ++j)
                    if (!ds->elim[row][j].is_zero()) ds->elim[i][j] -= f * ds->elim[row][j];
            }
            ds->pivot_col_of_row[row] = static_cast<int>(col);
            ++row;
        }
        std::lock_guard<std::mutex> lk(mu_);
        descents_[{n, m}] = ds;
        return ds;
    }

  private:
    std::mutex mu_;
    std::map<uint32_t, std::shared_ptr<const CycCtx>> ctxs_;
    std::map<std::pair<uint32_t, uint32_t>, std::shared_ptr<const DescentSolver>> descents_;
    std::map<uint32_t, std::vector<long long>> poly_cache_;
};

} // namespace

Cyclotomic Cyclotomic::root_of_unity(uint32_t n, long long k) {
    if (n == 0) throw arithmetic_error("root_of_unity with conductor 0");
    long long kk = ((k % n) + n) % n;
    uint32_t g = std::gcd<unsigned long long>(n, kk == 0 ? n : kk);
    uint32_t ord = n / g;
    kk /= g;
    if (ord == 1) return Cyclotomic(1);
    if (ord == 2) return Cyclotomic(-1);
    auto ctx = Registry::get().ctx(ord);
    std::vector<Rational> c(ctx->phi);
    const auto& r = ctx->red[kk % ord];
    for (uint32_t i = 0; i < ctx->phi; ++i) c[i] = Rational(r[i]);
    Cyclotomic z(ord, std::move(c));
    z.minimize();
    return z;
}

bool Cyclotomic::is_zero() const {
    for (const auto& r : c_)
        if (!r.is_zero()) return false;
    return true;
}

Rational Cyclotomic::rational_value() const {
    if (n_ != 1) throw arithmetic_error("rational_value on non-rational cyclotomic");
    return c_[0];
}

Cyclotomic Cyclotomic::lifted_to(uint32_t m) const {
    if (m == n_) return *this;
    if (m % n_ != 0) throw arithmetic_error("lift to non-multiple conductor");
    auto ctx = Registry::get().ctx(m);
    uint32_t step = m / n_;
    std::vector<Rational> c(ctx->phi);
    for (uint32_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        const auto& r = ctx->red[(static_cast<uint64_t>(i) * step) % m];
        for (uint32_t j = 0; j < ctx->phi; ++j)
            if (r[j] != 0) c[j] += c_[i] * Rational(r[j]);
    }
    return Cyclotomic(m, std::move(c));
}

void Cyclotomic::minimize() {
    if (n_ == 1) return;
    bool all_zero_past_0 = true;
    for (uint32_t i = 1; i < c_.size(); ++i)
        if (!c_[i].is_zero()) { all_zero_past_0 = false; break; }
    if (all_zero_past_0) {
        Rational r = c_[0];
        n_ = 1;
        c_.assign(1, r);
        return;
    }
    bool changed = true;
    while (changed && n_ > 1) {
        changed = false;
        for (uint32_t p : prime_factors(n_)) {
            uint32_t m = n_ / p;
            auto ds = Registry::get().descent(n_, m);
            auto d = ds->solve(c_);
            if (d) {
                n_ = m;
                c_ = std::move(*d);
                if (n_ == 1) return;
                changed = true;
                break;
            }
        }
    }
}

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    uint32_t L = static_cast<uint32_t>(std::lcm<unsigned long long>(a.n_, b.n_));
    Cyclotomic x = a.lifted_to(L), y = b.lifted_to(L);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    x.minimize();
    return x;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    uint32_t L = static_cast<uint32_t>(std::lcm<unsigned long long>(a.n_, b.n_));
    Cyclotomic x = a.lifted_to(L), y = b.lifted_to(L);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
    x.minimize();
    return x;
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic x = *this;
    for (auto& r : x.c_) r = -r;
    return x;
}

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    uint32_t L = static_cast<uint32_t>(std::lcm<unsigned long long>(a.n_, b.n_));
    Cyclotomic x = a.lifted_to(L), y = b.lifted_to(L);
    auto ctx = Registry::get().ctx(L);
    std::vector<Rational> out(ctx->phi);
    for (uint32_t i = 0; i < x.c_.size(); ++i) {
        if (x.c_[i].is_zero()) continue;
        for (uint32_t j = 0; j < y.c_.size(); ++j) {
            if (y.c_[j].is_zero()) continue;
            Rational prod = x.c_[i] * y.c_[j];
            const auto& r = ctx->red[(i + j) % L];
            for (uint32_t t = 0; t < ctx->phi; ++t)
                if (r[t] != 0) out[t] += prod * Rational(r[t]);
        }
    }
    Cyclotomic z(L, std::move(out));
    z.minimize();
    return z;
}

Cyclotomic mul_root_of_unity(const Cyclotomic& x, uint32_t n, long long k, bool negate) {
    uint32_t L = static_cast<uint32_t>(std::lcm<unsigned long long>(x.n_, n));
    Cyclotomic a = x.lifted_to(L);
    long long shift = ((k % n) + n) % n * (L / n);
    auto ctx = Registry::get().ctx(L);
    std::vector<Rational> out(ctx->phi);
    for (uint32_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        const auto& r = ctx->red[(i + shift) % L];
        for (uint32_t t = 0; t < ctx->phi; ++t)
            if (r[t] != 0) out[t] += a.c_[i] * Rational(r[t]);
    }
    if (negate)
        for (auto& v : out) v = -v;
    Cyclotomic z(L, std::move(out));
    z.minimize();
    return z;
}

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw arithmetic_error("inverse of zero cyclotomic");
    if (n_ == 1) return Cyclotomic(c_[0].inverse());
    // try the cheap route first: x * conj(x) rational
    Cyclotomic cj = conjugate();
    Cyclotomic nrm = *this * cj;
    if (nrm.is_rational()) {
        Rational r = nrm.rational_value();
        Cyclotomic out = cj;
        for (auto& v : out.c_) v /= r;
        out.minimize();
        return out;
    }
    // general case: solve (this) * x = 1 over the power basis
    auto ctx = Registry::get().ctx(n_);
    uint32_t phi = ctx->phi;
    std::vector<std::vector<Rational>> M(phi, std::vector<Rational>(phi + 1));
    for (uint32_t j = 0; j < phi; ++j) {
        // column j = this * zeta^j
        for (uint32_t i = 0; i < phi; ++i) {
            if (c_[i].is_zero()) continue;
            const auto& r = ctx->red[(i + j) % n_];
            for (uint32_t t = 0; t < phi; ++t)
                if (r[t] != 0) M[t][j] += c_[i] * Rational(r[t]);
        }
    }
    M[0][phi] = Rational(1);
    for (uint32_t col = 0, row = 0; col < phi && row < phi; ++col, ++row) {
        uint32_t piv = row;
        while (piv < phi && M[piv][col].is_zero()) ++piv;
        if (piv == phi) throw arithmetic_error("singular multiplication matrix");
        std::swap(M[piv], M[row]);
        for (uint32_t i = 0; i < phi; ++i) {
            if (i == row || M[i][col].is_zero()) continue;
            Rational f = M[i][col] / M[row][col];
            for (uint32_t j = col; j <= phi; ++j) M[i][j] -= f * M[row][j];
        }
    }
    std::vector<Rational> x(phi);
    for (uint32_t i = 0; i < phi; ++i) x[i] = M[i][phi] / M[i][i];
    Cyclotomic out(n_, std::move(x));
    out.minimize();
    return out;
}

Cyclotomic Cyclotomic::galois(long long a) const {
    if (n_ == 1) return *this;
    long long aa = ((a % n_) + n_) % n_;
    if (std::gcd<long long>(aa, n_) != 1) throw arithmetic_error("galois twist not coprime to conductor");
    auto ctx = Registry::get().ctx(n_);
    std::vector<Rational> out(ctx->phi);
    for (uint32_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        const auto& r = ctx->red[(static_cast<uint64_t>(i) * aa) % n_];
        for (uint32_t t = 0; t < ctx->phi; ++t)
            if (r[t] != 0) out[t] += c_[i] * Rational(r[t]);
    }
    Cyclotomic z(n_, std::move(out));
    z.minimize();
    return z;
}

Cyclotomic Cyclotomic::conjugate() const { return galois(static_cast<long long>(n_) - 1); }

Cyclotomic Cyclotomic::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    Cyclotomic acc = Cyclotomic::one();
    Cyclotomic base = *this;
    unsigned long long k = static_cast<unsigned long long>(e);
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

bool Cyclotomic::canonical_less(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    }
    return false;
}

std::string Cyclotomic::serialize() const {
    std::ostringstream os;
    os << "(" << n_ << ";";
    for (uint32_t i = 0; i < n_; ++i) {
        os << " " << (i < c_.size() ? c_[i].str() : std::string("0"));
        if (i + 1 < n_) os << ",";
    }
    os << ")";
    return os.str();
}

bool Cyclotomic::is_root_of_unity() const {
    if (is_zero()) return false;
    if (n_ == 1) return c_[0] == Rational(1) || c_[0] == Rational(-1);
    for (long long k = 0; k < n_; ++k) {
        Cyclotomic z = Cyclotomic::root_of_unity(n_, k);
        if (*this == z || *this == -z) return true;
    }
    return false;
}

std::optional<Cyclotomic> compare_up_to_root_of_unity(const Cyclotomic& x, const Cyclotomic& y) {
    if (y.is_zero()) {
        if (x.is_zero()) return Cyclotomic::one();
        return std::nullopt;
    }
    if (x.is_zero()) return std::nullopt;
    uint32_t L = static_cast<uint32_t>(std::lcm<unsigned long long>(x.conductor(), y.conductor()));
    for (long long k = 0; k < L; ++k) {
        for (int s = 0; s < 2; ++s) {
            Cyclotomic cand = mul_root_of_unity(y, L, k, s == 1);
            if (cand == x) {
                Cyclotomic z = Cyclotomic::root_of_unity(L, k);
                return s == 1 ? -z : z;
            }
        }
    }
    return std::nullopt;
}

/* ---------------- decimal rendering ---------------- */

namespace {

// fixed-point decimals, base 1e9 limbs, value = sign * limbs / 10^(9*frac_limbs)
struct Fixed {
    static constexpr uint32_t kFrac = 9; // 81 fractional digits
    int sign = 0;
    std::vector<uint32_t> mag;           // little-endian, limb 0 least significant; kFrac fractional limbs
    Fixed() : mag(kFrac + 2, 0) {}

    static Fixed from_ll(long long v) {
        Fixed f;
        unsigned long long a = v < 0 ? -(unsigned long long)v : v;
        f.sign = v == 0 ? 0 : (v < 0 ? -1 : 1);
        size_t i = kFrac;
        while (a) {
            if (i >= f.mag.size()) f.mag.resize(i + 1, 0);
            f.mag[i++] = a % 1000000000ULL;
            a /= 1000000000ULL;
        }
        return f;
    }
    static int cmp_mag(const Fixed& a, const Fixed& b) {
        size_t n = std::max(a.mag.size(), b.mag.size());
        for (size_t i = n; i-- > 0;) {
            uint32_t x = i < a.mag.size() ? a.mag[i] : 0;
            uint32_t y = i < b.mag.size() ? b.mag[i] : 0;
            if (x != y) return x < y ? -1 : 1;
        }
        return 0;
    }
    static Fixed add_mag(const Fixed& a, const Fixed& b) {
        Fixed r;
        r.mag.assign(std::max(a.mag.size(), b.mag.size()) + 1, 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < r.mag.size(); ++i) {
            uint64_t s = carry;
            if (i < a.mag.size()) s += a.mag[i];
            if (i < b.mag.size()) s += b.mag[i];
            r.mag[i] = s % 1000000000ULL;
            carry = s / 1000000000ULL;
        }
        return r;
    }
    static Fixed sub_mag(const Fixed& a, const Fixed& b) { // |a| >= |b|
        Fixed r;
        r.mag.assign(a.mag.size(), 0);
        int64_t borrow = 0;
        for (size_t i = 0; i < a.mag.size(); ++i) {
            int64_t s = (int64_t)a.mag[i] - borrow - (i < b.mag.size() ? b.mag[i] : 0);
            if (s < 0) { s += 1000000000; borrow = 1; } else borrow = 0;
            r.mag[i] = (uint32_t)s;
        }
        return r;
    }
    friend Fixed operator+(const Fixed& a, const Fixed& b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        Fixed r;
        if (a.sign == b.sign) { r = add_mag(a, b); r.sign = a.sign; }
        else {
            int c = cmp_mag(a, b);
            if (c == 0) return Fixed();
            if (c > 0) { r = sub_mag(a, b); r.sign = a.sign; }
            else { r = sub_mag(b, a); r.sign = b.sign; }
        }
        r.trim();
        return r;
    }
    friend Fixed operator-(const Fixed& a, const Fixed& b) {
        Fixed nb = b;
        nb.sign = -nb.sign;
        return a + nb;
    }
    friend Fixed operator*(const Fixed& a, const Fixed& b) {
        Fixed r;
        if (a.sign == 0 || b.sign == 0) return r;
        std::vector<uint64_t> acc(a.mag.size() + b.mag.size() + 1, 0);
        for (size_t i = 0; i < a.mag.size(); ++i) {
            if (!a.mag[i]) continue;
            uint64_t carry = 0;
            for (size_t j = 0; j < b.mag.size(); ++j) {
                uint64_t cur = acc[i + j] + (uint64_t)a.mag[i] * b.mag[j] + carry;
                acc[i + j] = cur % 1000000000ULL;
                carry = cur / 1000000000ULL;
            }
            size_t j = i + b.mag.size();
            while (carry) { uint64_t cur = acc[j] + carry; acc[j] = cur % 1000000000ULL; carry = cur / 1000000000ULL; ++j; }
        }
        // drop kFrac fractional limbs (truncation toward zero)
        r.mag.assign(acc.begin() + kFrac, acc.end());
        r.sign = a.sign * b.sign;
        r.trim();
        return r;
    }
    Fixed div_small(uint64_t d) const {
        Fixed r;
        r.mag.assign(mag.size(), 0);
        unsigned __int128 rem = 0;
        for (size_t i = mag.size(); i-- > 0;) {
            unsigned __int128 cur = rem * 1000000000ULL + mag[i];
            r.mag[i] = (uint32_t)(cur / d);
            rem = cur % d;
        }
        r.sign = sign;
        r.trim();
        return r;
    }
    void trim() {
        while (mag.size() > kFrac + 1 && mag.back() == 0) mag.pop_back();
        bool z = true;
        for (uint32_t limb : mag)
            if (limb) { z = false; break; }
        if (z) sign = 0;
    }
    std::string str(unsigned digits) const {
        // round half up at the requested digit count
        Fixed r = *this;
        size_t drop = kFrac * 9 - digits - 1;
        uint64_t carry = 5;
        for (size_t d = 0; d < drop % 9; ++d) carry *= 10;
        for (size_t i = drop / 9; i < r.mag.size() && carry; ++i) {
            uint64_t cur = r.mag[i] + carry;
            r.mag[i] = cur % 1000000000ULL;
            carry = cur / 1000000000ULL;
        }
        if (carry) r.mag.push_back((uint32_t)carry);
        size_t hi = r.mag.size();
        while (hi > kFrac + 1 && r.mag[hi - 1] == 0) --hi;
        std::string ip;
        for (size_t i = hi; i-- > kFrac;) {
            char buf[16];
            snprintf(buf, sizeof buf, ip.empty() ? "%u" : "%09u", r.mag[i]);
            ip += buf;
        }
        std::string fp;
        for (size_t i = kFrac; i-- > 0 && fp.size() < digits + 9;) {
            char buf[16];
            snprintf(buf, sizeof buf, "%09u", r.mag[i]);
            fp += buf;
        }
        fp.resize(digits, '0');
        bool printed_zero = ip == "0" && fp.find_first_not_of('0') == std::string::npos;
        std::string s = (sign < 0 && !printed_zero ? "-" : "") + ip;
        if (digits) s += "." + fp;
        return s;
    }
};

const char* kPiDigits = "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

Fixed pi_fixed() {
    Fixed r;
    r.sign = 1;
    // parse digit string into base-1e9 fraction limbs
    std::string digits(kPiDigits);
    digits.erase(1, 1); // drop '.'
    // integer part '3'
    r.mag[Fixed::kFrac] = 3;
    std::string frac = digits.substr(1, Fixed::kFrac * 9);
    frac.resize(Fixed::kFrac * 9, '0');
    for (uint32_t i = 0; i < Fixed::kFrac; ++i)
        r.mag[Fixed::kFrac - 1 - i] = (uint32_t)std::stoul(frac.substr(i * 9, 9));
    return r;
}

void sincos_fixed(const Fixed& angle, Fixed& c, Fixed& s) {
    // Taylor series; |angle| <= 2*pi so terms vanish fast
    c = Fixed::from_ll(1);
    s = angle;
    Fixed term_c = Fixed::from_ll(1);
    Fixed term_s = angle;
    Fixed a2 = angle * angle;
    for (uint64_t k = 1; k < 140; ++k) {
        term_c = term_c * a2;
        term_c = term_c.div_small(2 * k - 1).div_small(2 * k);
        term_c.sign = -term_c.sign;
        c = c + term_c;
        term_s = term_s * a2;
        term_s = term_s.div_small(2 * k).div_small(2 * k + 1);
        term_s.sign = -term_s.sign;
        s = s + term_s;
        if (term_c.sign == 0 && term_s.sign == 0) break;
    }
}

} // namespace

std::pair<std::string, std::string> Cyclotomic::approx_complex(unsigned digits) const {
    if (digits > 50) throw arithmetic_error("approx_complex supports at most 50 digits");
    Fixed re, im;
    Fixed two_pi = pi_fixed() + pi_fixed();
    for (uint32_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        Fixed coef = Fixed::from_ll(c_[i].num()).div_small((uint64_t)c_[i].den());
        Fixed angle = two_pi * Fixed::from_ll(i).div_small(n_);
        Fixed co, si;
        sincos_fixed(angle, co, si);
        re = re + coef * co;
        im = im + coef * si;
    }
    return {re.str(digits), im.str(digits)};
}

} // namespace csolv
