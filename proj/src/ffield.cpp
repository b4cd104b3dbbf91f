#include "csolv/ffield.hpp"

#include <algorithm>
#include <numeric>

namespace csolv {

namespace {

// trial-division factorization; fine at desk scale
std::vector<std::pair<uint64_t, uint32_t>> factorize(uint64_t n) {
    std::vector<std::pair<uint64_t, uint32_t>> fs;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        uint32_t e = 0;
        while (n % p == 0) { n /= p; ++e; }
        fs.push_back({p, e});
    }
    if (n > 1) fs.push_back({n, 1});
    return fs;
}

} // namespace

bool FieldTower::is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FieldTower::FieldTower(uint32_t p, const std::set<uint32_t>& degrees) : p_(p) {
    if (!is_prime(p)) throw field_error("characteristic must be prime, got " + std::to_string(p));
    ensure_degree(1);
    for (uint32_t k : degrees) ensure_degree(k);
}

void FieldTower::ensure_degree(uint32_t k) {
    if (k == 0) throw field_error("degree 0 requested");
    if (k > extension_cap) throw field_error("field tower cap exceeded at degree " + std::to_string(k));
    if (levels_.count(k)) return;
    Level lv;
    lv.deg = k;
    if (k == 1) {
        lv.modulus = {0, 1}; // x
        levels_[1] = lv;
        return;
    }
    // lexicographically least monic irreducible of degree k (c_0 varies fastest)
    std::vector<uint32_t> c(k, 0);
    for (;;) {
        std::vector<uint32_t> mod(c);
        mod.push_back(1);
        auto poly_mod = [&](std::vector<uint32_t> a) {
            while (a.size() >= mod.size()) {
                uint32_t lead = a.back();
                if (lead) {
                    size_t off = a.size() - mod.size();
                    for (size_t i = 0; i < mod.size(); ++i)
                        a[off + i] = (a[off + i] + (uint64_t)(p_ - 1) * lead % p_ * mod[i]) % p_;
                }
                a.pop_back();
            }
            return a;
        };
        auto mulmod = [&](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
            std::vector<uint32_t> r(a.size() + b.size() - 1, 0);
            for (size_t i = 0; i < a.size(); ++i) {
                if (!a[i]) continue;
                for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + (uint64_t)a[i] * b[j]) % p_;
            }
            return poly_mod(r);
        };
        auto polygcd = [&](std::vector<uint32_t> a, std::vector<uint32_t> b) {
            auto norm = [&](std::vector<uint32_t>& v) {
                while (!v.empty() && v.back() == 0) v.pop_back();
            };
            norm(a);
            norm(b);
            while (!b.empty()) {
                while (!a.empty() && a.size() >= b.size()) {
                    uint32_t lead = a.back();
                    if (lead) {
                        uint64_t binv = 1, base = b.back(), e = p_ - 2;
                        while (e) { if (e & 1) binv = binv * base % p_; base = base * base % p_; e >>= 1; }
                        uint64_t f = lead * binv % p_;
                        size_t off = a.size() - b.size();
                        for (size_t i = 0; i < b.size(); ++i)
                            a[off + i] = (a[off + i] + (p_ - 1) * f % p_ * b[i]) % p_;
                    }
                    norm(a);
                }
                std::swap(a, b);
                norm(b);
            }
            return a;
        };
        bool irred = true;
        std::vector<uint32_t> xp = {0, 1}; // becomes x^(p^d) mod f
        for (uint32_t d = 1; d <= k && irred; ++d) {
            std::vector<uint32_t> acc = {1};
            std::vector<uint32_t> base = xp;
            uint64_t e = p_;
            while (e) {
                if (e & 1) acc = mulmod(acc, base);
                base = mulmod(base, base);
                e >>= 1;
            }
            xp = acc;
            std::vector<uint32_t> diff = xp;
            if (diff.size() < 2) diff.resize(2, 0);
            diff[1] = (diff[1] + p_ - 1) % p_; // x^(p^d) - x
            if (d <= k / 2) {
                auto g = polygcd(diff, mod);
                if (g.size() != 1) irred = false;
            } else if (d == k) {
                for (uint32_t v : diff)
                    if (v) { irred = false; break; }
            }
        }
        if (irred) {
            lv.modulus = mod;
            break;
        }
        size_t i = 0;
        while (i < k && ++c[i] == p_) c[i++] = 0;
        if (i == k) throw field_error("no irreducible polynomial found (impossible)");
    }
    levels_[k] = lv;
}

const FieldTower::Level& FieldTower::level(uint32_t k) const {
    auto it = levels_.find(k);
    if (it == levels_.end()) throw field_error("degree " + std::to_string(k) + " not in tower");
    return it->second;
}

std::vector<uint32_t> FieldTower::modulus(uint32_t k) const { return level(k).modulus; }

FieldElement FieldTower::one(uint32_t k) const {
    FieldElement e = zero(k);
    e.coeffs[0] = 1;
    return e;
}

FieldElement FieldTower::from_index(uint32_t k, uint64_t idx) const {
    FieldElement e = zero(k);
    for (uint32_t i = 0; i < k; ++i) {
        e.coeffs[i] = idx % p_;
        idx /= p_;
    }
    return e;
}

FieldElement FieldTower::add(const FieldElement& a, const FieldElement& b) const {
    if (a.deg != b.deg) throw field_error("add at mismatched degrees");
    FieldElement r = a;
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = (r.coeffs[i] + b.coeffs[i]) % p_;
    return r;
}

FieldElement FieldTower::sub(const FieldElement& a, const FieldElement& b) const { return add(a, neg(b)); }

FieldElement FieldTower::neg(const FieldElement& a) const {
    FieldElement r = a;
    for (auto& c : r.coeffs) c = (p_ - c) % p_;
    return r;
}

std::vector<uint32_t> FieldTower::poly_mul_mod(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                                               const std::vector<uint32_t>& mod) const {
    std::vector<uint32_t> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + (uint64_t)a[i] * b[j]) % p_;
    }
    size_t k = mod.size() - 1;
    for (size_t i = r.size(); i-- > k;) {
        uint32_t lead = r[i];
        if (!lead) continue;
        r[i] = 0;
        for (size_t j = 0; j < k; ++j) r[i - k + j] = (r[i - k + j] + (uint64_t)(p_ - 1) * lead % p_ * mod[j]) % p_;
    }
    r.resize(k);
    return r;
}

FieldElement FieldTower::mul(const FieldElement& a, const FieldElement& b) const {
    if (a.deg != b.deg) throw field_error("mul at mismatched degrees");
    if (a.deg == 1) return FieldElement{1, {(uint32_t)((uint64_t)a.coeffs[0] * b.coeffs[0] % p_)}};
    return FieldElement{a.deg, poly_mul_mod(a.coeffs, b.coeffs, level(a.deg).modulus)};
}

FieldElement FieldTower::pow(const FieldElement& a, unsigned long long e) const {
    FieldElement acc = one(a.deg), base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

FieldElement FieldTower::inv(const FieldElement& a) const {
    if (a.is_zero()) throw field_error("inverse of zero field element");
    uint64_t n = 1;
    for (uint32_t i = 0; i < a.deg; ++i) n *= p_;
    return pow(a, n - 2);
}

FieldElement FieldTower::frobenius_p(const FieldElement& x) const { return pow(x, p_); }

FieldElement FieldTower::frobenius_power(const FieldElement& x, uint64_t q, uint32_t m) const {
    uint64_t qq = q;
    uint32_t j = 0;
    while (qq > 1) {
        if (qq % p_) throw field_error("frobenius base is not a power of the characteristic");
        qq /= p_;
        ++j;
    }
    FieldElement r = x;
    for (uint32_t i = 0; i < j * m; ++i) r = frobenius_p(r);
    return r;
}

FieldElement FieldTower::embed(const FieldElement& a, uint32_t to) {
    uint32_t from = a.deg;
    if (from == to) return a;
    if (to % from != 0) throw field_error("embedding target degree not a multiple");
    ensure_degree(to);
    auto key = std::make_pair(from, to);
    auto it = embed_gen_.find(key);
    if (it == embed_gen_.end()) {
        // least root of modulus(from), searched inside the fixed field of phi^from
        const auto& fmod = level(from).modulus;
        std::vector<std::vector<uint32_t>> M(to, std::vector<uint32_t>(to, 0));
        for (uint32_t j = 0; j < to; ++j) {
            FieldElement e = zero(to);
            e.coeffs[j] = 1;
            FieldElement f = e;
            for (uint32_t t = 0; t < from; ++t) f = frobenius_p(f);
            for (uint32_t i = 0; i < to; ++i) M[i][j] = (f.coeffs[i] + p_ - (i == j ? 1u : 0u)) % p_;
        }
        std::vector<int> pivot_of_col(to, -1);
        uint32_t row = 0;
        for (uint32_t col = 0; col < to && row < to; ++col) {
            uint32_t piv = row;
            while (piv < to && M[piv][col] == 0) ++piv;
            if (piv == to) continue;
            std::swap(M[piv], M[row]);
            uint64_t inv_ = 1, base = M[row][col], e = p_ - 2;
            while (e) { if (e & 1) inv_ = inv_ * base % p_; base = base * base % p_; e >>= 1; }
            for (uint32_t j2 = 0; j2 < to; ++j2) M[row][j2] = (uint32_t)((uint64_t)M[row][j2] * inv_ % p_);
            for (uint32_t i = 0; i < to; ++i) {
                if (i == row || M[i][col] == 0) continue;
                uint64_t f = M[i][col];
                for (uint32_t j2 = 0; j2 < to; ++j2) M[i][j2] = (M[i][j2] + (p_ - 1) * f % p_ * M[row][j2]) % p_;
            }
            pivot_of_col[col] = row;
            ++row;
        }
        std::vector<FieldElement> kernel;
        for (uint32_t col = 0; col < to; ++col) {
            if (pivot_of_col[col] >= 0) continue;
            FieldElement v = zero(to);
            v.coeffs[col] = 1;
            for (uint32_t c2 = 0; c2 < to; ++c2)
                if (pivot_of_col[c2] >= 0) v.coeffs[c2] = (p_ - M[pivot_of_col[c2]][col] % p_) % p_;
            kernel.push_back(v);
        }
        if (kernel.size() != from) throw field_error("subfield dimension mismatch");
        uint64_t count = 1;
        for (uint32_t i = 0; i < from; ++i) count *= p_;
        FieldElement best = zero(to);
        bool found = false;
        uint64_t best_idx = 0;
        for (uint64_t idx = 0; idx < count; ++idx) {
            FieldElement cand = zero(to);
            uint64_t t = idx;
            for (const auto& kv : kernel) {
                uint32_t digit = t % p_;
                t /= p_;
                if (digit) {
                    FieldElement scaled = kv;
                    for (auto& c2 : scaled.coeffs) c2 = (uint32_t)((uint64_t)c2 * digit % p_);
                    cand = add(cand, scaled);
                }
            }
            FieldElement val = zero(to);
            for (size_t i = fmod.size(); i-- > 0;) {
                val = mul(val, cand);
                if (fmod[i]) {
                    FieldElement c0 = zero(to);
                    c0.coeffs[0] = fmod[i];
                    val = add(val, c0);
                }
            }
            if (val.is_zero()) {
                uint64_t ci = cand.index(p_);
                if (!found || ci < best_idx) {
                    best = cand;
                    best_idx = ci;
                    found = true;
                }
            }
        }
        if (!found) throw field_error("no root of modulus in extension (impossible)");
        it = embed_gen_.emplace(key, best).first;
    }
    FieldElement r = zero(to);
    for (size_t i = a.coeffs.size(); i-- > 0;) {
        r = mul(r, it->second);
        if (a.coeffs[i]) {
            FieldElement c0 = zero(to);
            c0.coeffs[0] = a.coeffs[i];
            r = add(r, c0);
        }
    }
    return r;
}

bool FieldTower::lies_in_subfield(const FieldElement& a, uint32_t sub) {
    FieldElement f = a;
    for (uint32_t t = 0; t < sub; ++t) f = frobenius_p(f);
    return f == a;
}

FieldElement FieldTower::project(const FieldElement& a, uint32_t to) {
    if (a.deg == to) return a;
    if (a.deg % to != 0) throw field_error("projection target degree does not divide");
    if (!lies_in_subfield(a, to)) throw field_error("element not in requested subfield");
    ensure_degree(to);
    uint64_t count = 1;
    for (uint32_t i = 0; i < to; ++i) count *= p_;
    for (uint64_t idx = 0; idx < count; ++idx) {
        FieldElement cand = from_index(to, idx);
        if (embed(cand, a.deg) == a) return cand;
    }
    throw field_error("projection failed (incompatible embedding)");
}

uint64_t FieldTower::multiplicative_order(const FieldElement& a) const {
    if (a.is_zero()) throw field_error("multiplicative order of zero");
    uint64_t n = 1;
    for (uint32_t i = 0; i < a.deg; ++i) n *= p_;
    uint64_t ord = n - 1;
    for (auto [pp, e] : factorize(n - 1)) {
        for (uint32_t i = 0; i < e; ++i) {
            if (pow(a, ord / pp) == one(a.deg)) ord /= pp;
            else break;
        }
    }
    return ord;
}

FieldElement FieldTower::lang_additive(const FieldElement& a, uint64_t q) {
    return lang_additive_twisted(one(a.deg), a, q);
}

FieldElement FieldTower::lang_additive_twisted(const FieldElement& c, const FieldElement& a, uint64_t q) {
    uint64_t qq = q;
    uint32_t k = 0;
    while (qq > 1) {
        if (qq % p_) throw field_error("lang base not a power of characteristic");
        qq /= p_;
        ++k;
    }
    uint32_t base = std::lcm(std::lcm(a.deg, c.deg), std::max(k, 1u));
    for (uint32_t L = base; L <= extension_cap; L += base) {
        ensure_degree(L);
        FieldElement cL = embed(c, L), aL = embed(a, L);
        std::vector<std::vector<uint32_t>> M(L, std::vector<uint32_t>(L + 1, 0));
        for (uint32_t j = 0; j < L; ++j) {
            FieldElement e = zero(L);
            e.coeffs[j] = 1;
            FieldElement f = mul(cL, frobenius_power(e, q, 1));
            for (uint32_t i = 0; i < L; ++i) M[i][j] = (f.coeffs[i] + p_ - (i == j ? 1u : 0u)) % p_;
        }
        for (uint32_t i = 0; i < L; ++i) M[i][L] = aL.coeffs[i];
        std::vector<int> pivot_of_col(L, -1);
        uint32_t row = 0;
        for (uint32_t col = 0; col < L && row < L; ++col) {
            uint32_t piv = row;
            while (piv < L && M[piv][col] == 0) ++piv;
            if (piv == L) continue;
            std::swap(M[piv], M[row]);
            uint64_t inv_ = 1, b2 = M[row][col], e = p_ - 2;
            while (e) { if (e & 1) inv_ = inv_ * b2 % p_; b2 = b2 * b2 % p_; e >>= 1; }
            for (uint32_t j2 = col; j2 <= L; ++j2) M[row][j2] = (uint32_t)((uint64_t)M[row][j2] * inv_ % p_);
            for (uint32_t i = 0; i < L; ++i) {
                if (i == row || M[i][col] == 0) continue;
                uint64_t f = M[i][col];
                for (uint32_t j2 = col; j2 <= L; ++j2) M[i][j2] = (M[i][j2] + (p_ - 1) * f % p_ * M[row][j2]) % p_;
            }
            pivot_of_col[col] = row;
            ++row;
        }
        bool consistent = true;
        for (uint32_t i = row; i < L; ++i)
            if (M[i][L]) { consistent = false; break; }
        if (!consistent) continue;
        FieldElement part = zero(L);
        for (uint32_t col = 0; col < L; ++col)
            if (pivot_of_col[col] >= 0) part.coeffs[col] = M[pivot_of_col[col]][L];
        std::vector<FieldElement> kernel;
        for (uint32_t col = 0; col < L; ++col) {
            if (pivot_of_col[col] >= 0) continue;
            FieldElement v = zero(L);
            v.coeffs[col] = 1;
            for (uint32_t c2 = 0; c2 < L; ++c2)
                if (pivot_of_col[c2] >= 0) v.coeffs[c2] = (p_ - M[pivot_of_col[c2]][col] % p_) % p_;
            kernel.push_back(v);
        }
        uint64_t kcount = 1;
        for (size_t i = 0; i < kernel.size(); ++i) {
            kcount *= p_;
            if (kcount > 100000) throw field_error("lang kernel too large to canonicalize");
        }
        FieldElement best = part;
        uint64_t best_idx = part.index(p_);
        for (uint64_t idx = 1; idx < kcount; ++idx) {
            FieldElement cand = part;
            uint64_t t = idx;
            for (const auto& kv : kernel) {
                uint32_t digit = t % p_;
                t /= p_;
                if (digit) {
                    FieldElement scaled = kv;
                    for (auto& c2 : scaled.coeffs) c2 = (uint32_t)((uint64_t)c2 * digit % p_);
                    cand = add(cand, scaled);
                }
            }
            uint64_t ci = cand.index(p_);
            if (ci < best_idx) { best = cand; best_idx = ci; }
        }
        FieldElement check = sub(mul(cL, frobenius_power(best, q, 1)), best);
        if (!(check == aL)) throw field_error("lang additive postcondition failed");
        return best;
    }
    throw field_error("no additive Lang solution within tower cap");
}

FieldElement FieldTower::lang_multiplicative(const FieldElement& a, uint64_t q) {
    if (a.is_zero()) throw field_error("multiplicative Lang of zero");
    uint64_t qq = q;
    uint32_t k = 0;
    while (qq > 1) {
        if (qq % p_) throw field_error("lang base not a power of characteristic");
        qq /= p_;
        ++k;
    }
    if (q == 1) throw field_error("multiplicative Lang needs q > 1");
    uint64_t ord = multiplicative_order(a);
    uint64_t target = (q - 1) * ord;
    for (uint32_t s = 1;; ++s) {
        uint32_t L = k * s;
        if (L > extension_cap) throw field_error("no multiplicative Lang solution within tower cap");
        if (L % a.deg != 0) continue;
        unsigned __int128 qs = 1;
        for (uint32_t i = 0; i < s; ++i) {
            qs *= q;
            if (qs > ((unsigned __int128)1 << 100)) throw field_error("multiplicative Lang extension too large");
        }
        if ((uint64_t)((qs - 1) % target) != 0) continue;
        uint64_t size = (uint64_t)qs;
        if (size > 4000000) throw field_error("multiplicative Lang search space exceeds cap");
        ensure_degree(L);
        FieldElement aL = embed(a, L);
        for (uint64_t idx = 1; idx < size; ++idx) {
            FieldElement cand = from_index(L, idx);
            if (pow(cand, q - 1) == aL) return cand;
        }
        throw field_error("multiplicative Lang root not found (impossible)");
    }
}

} // namespace csolv
