#include "csolv/chartab.hpp"

#include <algorithm>
#include <functional>
#include <atomic>
#include <cassert>
#include <numeric>
#include <thread>

namespace csolv {

namespace {
std::atomic<uint32_t> g_worker_threads{1};
}

void set_worker_threads(uint32_t n) { g_worker_threads.store(n ? n : 1); }
uint32_t worker_threads() { return g_worker_threads.load(); }

namespace {

// chunked parallel loop with deterministic per-index writes
void parallel_classes(uint32_t count, uint64_t work_per_item, const std::function<void(uint32_t)>& body) {
    uint32_t nt = std::min<uint32_t>(worker_threads(), count);
    if (nt <= 1 || work_per_item * count < 200000) {
        for (uint32_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<uint32_t> next{0};
    std::vector<std::thread> pool;
    for (uint32_t t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (;;) {
                uint32_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace

namespace {

uint64_t mod_pow(uint64_t b, uint64_t e, uint64_t m) {
    unsigned __int128 acc = 1, base = b % m;
    while (e) {
        if (e & 1) acc = acc * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return (uint64_t)acc;
}

uint64_t mod_inv(uint64_t a, uint64_t m) { return mod_pow(a % m, m - 2, m); }

uint64_t mod_mul(uint64_t a, uint64_t b, uint64_t m) { return (uint64_t)((unsigned __int128)a * b % m); }

uint64_t mod_sub(uint64_t a, uint64_t b, uint64_t m) { return (a + m - b % m) % m; }

// smallest prime  = 1 mod e exceeding lo
uint64_t dixon_prime(uint64_t e, uint64_t lo) {
    uint64_t ell = e + 1;
    while (ell <= lo || !FieldTower::is_prime(ell)) ell += e;
    return ell;
}

uint64_t primitive_root(uint64_t ell) {
    uint64_t n = ell - 1;
    std::vector<uint64_t> ps;
    uint64_t t = n;
    for (uint64_t p = 2; p * p <= t; ++p)
        if (t % p == 0) {
            ps.push_back(p);
            while (t % p == 0) t /= p;
        }
    if (t > 1) ps.push_back(t);
    for (uint64_t g = 2; g < ell; ++g) {
        bool ok = true;
        for (uint64_t p : ps)
            if (mod_pow(g, n / p, ell) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw chartab_error("no primitive root (impossible)");
}

uint64_t sqrt_mod(uint64_t a, uint64_t ell) {
    a %= ell;
    if (a == 0) return 0;
    if (mod_pow(a, (ell - 1) / 2, ell) != 1) throw chartab_error("square root does not exist mod ell");
    if (ell % 4 == 3) return mod_pow(a, (ell + 1) / 4, ell);
    // Tonelli-Shanks
    uint64_t qq = ell - 1, s = 0;
    while (qq % 2 == 0) { qq /= 2; ++s; }
    uint64_t z = 2;
    while (mod_pow(z, (ell - 1) / 2, ell) == 1) ++z;
    uint64_t mm = s, c = mod_pow(z, qq, ell), tt = mod_pow(a, qq, ell), r = mod_pow(a, (qq + 1) / 2, ell);
    while (tt != 1) {
        uint64_t i = 0, t2 = tt;
        while (t2 != 1) { t2 = mod_mul(t2, t2, ell); ++i; }
        uint64_t b = mod_pow(c, 1ULL << (mm - i - 1), ell);
        mm = i;
        c = mod_mul(b, b, ell);
        tt = mod_mul(tt, c, ell);
        r = mod_mul(r, b, ell);
    }
    return r;
}

using Mat = std::vector<std::vector<uint64_t>>;

// characteristic polynomial mod ell via Hessenberg reduction, coefficients low-to-high
std::vector<uint64_t> char_poly(Mat A, uint64_t ell) {
    uint32_t n = (uint32_t)A.size();
    // similarity reduction to upper Hessenberg
    for (uint32_t c = 0; c + 2 < n; ++c) {
        uint32_t piv = c + 1;
        while (piv < n && A[piv][c] == 0) ++piv;
        if (piv == n) continue;
        if (piv != c + 1) {
            std::swap(A[piv], A[c + 1]);
            for (uint32_t i = 0; i < n; ++i) std::swap(A[i][piv], A[i][c + 1]);
        }
        uint64_t inv = mod_inv(A[c + 1][c], ell);
        for (uint32_t r = c + 2; r < n; ++r) {
            if (A[r][c] == 0) continue;
            uint64_t f = mod_mul(A[r][c], inv, ell);
            for (uint32_t j = 0; j < n; ++j) A[r][j] = mod_sub(A[r][j], mod_mul(f, A[c + 1][j], ell), ell);
            for (uint32_t i = 0; i < n; ++i) A[i][c + 1] = (A[i][c + 1] + mod_mul(f, A[i][r], ell)) % ell;
        }
    }
    // p_k = charpoly of leading k x k minor
    std::vector<std::vector<uint64_t>> p(n + 1);
    p[0] = {1};
    for (uint32_t k = 1; k <= n; ++k) {
        p[k].assign(k + 1, 0);
        // (x - A[k-1][k-1]) * p[k-1]
        for (uint32_t j = 0; j < k; ++j) {
            p[k][j + 1] = (p[k][j + 1] + p[k - 1][j]) % ell;
            p[k][j] = mod_sub(p[k][j], mod_mul(A[k - 1][k - 1], p[k - 1][j], ell), ell);
        }
        uint64_t run = 1;
        for (uint32_t i = k - 1; i-- > 0;) {
            run = mod_mul(run, A[i + 1][i], ell);
            if (A[i][k - 1] == 0 || run == 0) {
                if (run == 0) break;
                continue;
            }
            uint64_t coef = mod_mul(A[i][k - 1], run, ell);
            for (uint32_t j = 0; j <= i; ++j) p[k][j] = mod_sub(p[k][j], mod_mul(coef, p[i][j], ell), ell);
        }
    }
    return p[n];
}

std::vector<uint64_t> poly_roots(const std::vector<uint64_t>& poly, uint64_t ell) {
    std::vector<uint64_t> roots;
    for (uint64_t x = 0; x < ell; ++x) {
        uint64_t acc = 0;
        for (size_t i = poly.size(); i-- > 0;) acc = (mod_mul(acc, x, ell) + poly[i]) % ell;
        if (acc == 0) roots.push_back(x);
    }
    return roots;
}

// kernel basis (RREF rows) of M over F_ell
std::vector<std::vector<uint64_t>> kernel_basis(Mat M, uint64_t ell) {
    uint32_t rows = (uint32_t)M.size(), cols = (uint32_t)M[0].size();
    std::vector<int> pivot_of_col(cols, -1);
    uint32_t rank = 0;
    for (uint32_t c = 0; c < cols && rank < rows; ++c) {
        uint32_t piv = rank;
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[rank]);
        uint64_t inv = mod_inv(M[rank][c], ell);
        for (uint32_t j = 0; j < cols; ++j) M[rank][j] = mod_mul(M[rank][j], inv, ell);
        for (uint32_t r = 0; r < rows; ++r) {
            if (r == rank || M[r][c] == 0) continue;
            uint64_t f = M[r][c];
            for (uint32_t j = 0; j < cols; ++j) M[r][j] = mod_sub(M[r][j], mod_mul(f, M[rank][j], ell), ell);
        }
        pivot_of_col[c] = (int)rank;
        ++rank;
    }
    std::vector<std::vector<uint64_t>> ker;
    for (uint32_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<uint64_t> v(cols, 0);
        v[c] = 1;
        for (uint32_t c2 = 0; c2 < cols; ++c2)
            if (pivot_of_col[c2] >= 0) v[c2] = mod_sub(0, M[pivot_of_col[c2]][c], ell) % ell;
        for (auto& x : v) x %= ell;
        ker.push_back(v);
    }
    return ker;
}

} // namespace

CharacterTable::CharacterTable(std::shared_ptr<const Group> G) : G_(std::move(G)) {
    classes_ = conjugacy_classes(*G_);
    compute();
}

CharacterTable::CharacterTable(std::shared_ptr<const Group> G, ClassData classes)
    : G_(std::move(G)), classes_(std::move(classes)) {
    compute();
}

CharacterTable::CharacterTable(std::shared_ptr<const Group> G, ClassData classes, uint64_t forced_ell)
    : G_(std::move(G)), classes_(std::move(classes)), forced_ell_(forced_ell) {
    compute();
}

void CharacterTable::compute() {
    const Group& G = *G_;
    uint32_t nc = classes_.count();
    uint64_t n = G.size();

    expo_ = 1;
    for (uint32_t c = 0; c < nc; ++c) expo_ = std::lcm(expo_, G.element_order(classes_.reps[c]));
    uint64_t lo = 1;
    while (lo * lo <= 4 * n) ++lo; // lo > 2 sqrt(n)
    if (forced_ell_) {
        if ((expo_ > 1 && forced_ell_ % expo_ != 1) || forced_ell_ <= lo || !FieldTower::is_prime(forced_ell_))
            throw chartab_error("forced prime unsuitable for this group");
        ell_ = forced_ell_;
    } else ell_ = dixon_prime(expo_, lo);
    zgen_ = mod_pow(primitive_root(ell_), (ell_ - 1) / expo_, ell_);

    // member lists per class
    std::vector<std::vector<uint32_t>> members(nc);
    for (uint32_t x = 0; x < n; ++x) members[classes_.class_of[x]].push_back(x);

    // processing order: class size ascending, ties by representative id; skip identity
    std::vector<uint32_t> order;
    for (uint32_t c = 1; c < nc; ++c) order.push_back(c);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (classes_.sizes[a] != classes_.sizes[b]) return classes_.sizes[a] < classes_.sizes[b];
        return classes_.reps[a] < classes_.reps[b];
    });

    // subspaces of F_ell^nc, each a list of basis rows; start with everything
    std::vector<std::vector<std::vector<uint64_t>>> spaces;
    {
        std::vector<std::vector<uint64_t>> full;
        for (uint32_t i = 0; i < nc; ++i) {
            std::vector<uint64_t> e(nc, 0);
            e[i] = 1;
            full.push_back(e);
        }
        spaces.push_back(full);
    }

    for (uint32_t oi = 0; oi < order.size(); ++oi) {
        bool all_split = true;
        for (const auto& s : spaces)
            if (s.size() > 1) all_split = false;
        if (all_split) break;
        uint32_t ci = order[oi];
        // class matrix transpose action: (M_i^T v)_j = sum_k c_{i j k} v_k with
        // c_{ijk} = #{a in C_i : class(a^{-1} rep_k) = j}
        Mat MT(nc, std::vector<uint64_t>(nc, 0));
        for (uint32_t k = 0; k < nc; ++k) {
            for (uint32_t a : members[ci]) {
                uint32_t j = classes_.class_of[G.mul(G.inverse(a), classes_.reps[k])];
                MT[j][k] = (MT[j][k] + 1) % ell_;
            }
        }
        std::vector<std::vector<std::vector<uint64_t>>> next;
        for (auto& basis : spaces) {
            uint32_t d = (uint32_t)basis.size();
            if (d == 1) {
                next.push_back(std::move(basis));
                continue;
            }
            // restrict MT to the subspace: images of basis rows in basis coordinates
            // solve [basis^T] * coords = image for each image
            Mat images(d, std::vector<uint64_t>(nc, 0));
            for (uint32_t r = 0; r < d; ++r)
                for (uint32_t j = 0; j < nc; ++j) {
                    if (basis[r][j] == 0) continue;
                    for (uint32_t i2 = 0; i2 < nc; ++i2)
                        images[r][i2] = (images[r][i2] + mod_mul(basis[r][j], MT[i2][j], ell_)) % ell_;
                }
            // express each image in the basis: solve basis^T x = image^T
            Mat solveM(nc, std::vector<uint64_t>(d, 0));
            for (uint32_t r = 0; r < d; ++r)
                for (uint32_t j = 0; j < nc; ++j) solveM[j][r] = basis[r][j];
            // gaussian elimination once with d right-hand sides
            Mat rhs(nc, std::vector<uint64_t>(d, 0));
            for (uint32_t r = 0; r < d; ++r)
                for (uint32_t i2 = 0; i2 < nc; ++i2) rhs[i2][r] = images[r][i2];
            // RREF of [solveM | rhs]
            std::vector<int> pivot_of_col(d, -1);
            uint32_t rank = 0;
            for (uint32_t c = 0; c < d && rank < nc; ++c) {
                uint32_t piv = rank;
                while (piv < nc && solveM[piv][c] == 0) ++piv;
                if (piv == nc) continue;
                std::swap(solveM[piv], solveM[rank]);
                std::swap(rhs[piv], rhs[rank]);
                uint64_t inv = mod_inv(solveM[rank][c], ell_);
                for (uint32_t j = 0; j < d; ++j) solveM[rank][j] = mod_mul(solveM[rank][j], inv, ell_);
                for (uint32_t j = 0; j < d; ++j) rhs[rank][j] = mod_mul(rhs[rank][j], inv, ell_);
                for (uint32_t r2 = 0; r2 < nc; ++r2) {
                    if (r2 == rank || solveM[r2][c] == 0) continue;
                    uint64_t f = solveM[r2][c];
                    for (uint32_t j = 0; j < d; ++j) {
                        solveM[r2][j] = mod_sub(solveM[r2][j], mod_mul(f, solveM[rank][j], ell_), ell_);
                        rhs[r2][j] = mod_sub(rhs[r2][j], mod_mul(f, rhs[rank][j], ell_), ell_);
                    }
                }
                pivot_of_col[c] = (int)rank;
                ++rank;
            }
            Mat A(d, std::vector<uint64_t>(d, 0)); // A[x][r]: coefficient of basis x in image of r
            for (uint32_t c = 0; c < d; ++c) {
                if (pivot_of_col[c] < 0) throw chartab_error("subspace basis degenerate");
                for (uint32_t r = 0; r < d; ++r) A[c][r] = rhs[pivot_of_col[c]][r];
            }
            // eigen split of A^T? A maps coords: image_of_r = sum_x A[x][r] basis_x, so matrix acting
            // on coordinate vectors is A itself (columns indexed by r).
            auto cp = char_poly(A, ell_);
            auto roots = poly_roots(cp, ell_);
            std::sort(roots.begin(), roots.end());
            if (roots.empty()) throw chartab_error("class matrix with no eigenvalues (impossible)");
            for (uint64_t lam : roots) {
                Mat Ashift = A;
                for (uint32_t i2 = 0; i2 < d; ++i2) Ashift[i2][i2] = mod_sub(Ashift[i2][i2], lam, ell_);
                auto ker = kernel_basis(Ashift, ell_);
                if (ker.empty()) continue;
                std::vector<std::vector<uint64_t>> sub;
                for (const auto& kv : ker) {
                    std::vector<uint64_t> vec(nc, 0);
                    for (uint32_t r = 0; r < d; ++r) {
                        if (kv[r] == 0) continue;
                        for (uint32_t j = 0; j < nc; ++j)
                            vec[j] = (vec[j] + mod_mul(kv[r], basis[r][j], ell_)) % ell_;
                    }
                    sub.push_back(vec);
                }
                next.push_back(std::move(sub));
            }
        }
        spaces = std::move(next);
    }

    for (const auto& s : spaces)
        if (s.size() != 1) throw chartab_error("eigen splitting incomplete");

    // normalize eigenvectors into character rows
    table_mod_.clear();
    degrees_.clear();
    uint64_t n_mod = n % ell_;
    for (const auto& s : spaces) {
        std::vector<uint64_t> v = s[0];
        // the common eigenvectors carry omega_k = |C_k| chi(g_k) / chi(1);
        // divide out the class sizes to reach character values up to scale
        for (uint32_t j = 0; j < nc; ++j) v[j] = mod_mul(v[j], mod_inv(classes_.sizes[j] % ell_, ell_), ell_);
        uint64_t norm = 0;
        for (uint32_t j = 0; j < nc; ++j) {
            uint64_t term = mod_mul(classes_.sizes[j] % ell_, mod_mul(v[j], v[classes_.inverse_class[j]], ell_), ell_);
            norm = (norm + term) % ell_;
        }
        if (norm == 0) throw chartab_error("isotropic eigenvector (impossible)");
        uint64_t c2 = mod_mul(n_mod, mod_inv(norm, ell_), ell_);
        uint64_t c = sqrt_mod(c2, ell_);
        // choose the sign that makes the degree lift to (0, ell/2)
        uint64_t deg = mod_mul(c, v[0], ell_);
        if (deg == 0) throw chartab_error("zero degree (impossible)");
        if (deg > ell_ / 2) {
            c = ell_ - c;
            deg = ell_ - deg;
        }
        std::vector<uint64_t> row(nc);
        for (uint32_t j = 0; j < nc; ++j) row[j] = mod_mul(c, v[j], ell_);
        table_mod_.push_back(std::move(row));
        degrees_.push_back(deg);
    }

    // deterministic row order
    std::vector<uint32_t> idx(table_mod_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
        if (degrees_[a] != degrees_[b]) return degrees_[a] < degrees_[b];
        return table_mod_[a] < table_mod_[b];
    });
    std::vector<std::vector<uint64_t>> tm;
    std::vector<uint64_t> dg;
    for (uint32_t i : idx) {
        tm.push_back(table_mod_[i]);
        dg.push_back(degrees_[i]);
    }
    table_mod_ = std::move(tm);
    degrees_ = std::move(dg);

    if (table_mod_.size() != nc) throw chartab_error("irreducible count differs from class count");
    unsigned __int128 sumsq = 0;
    for (uint64_t d : degrees_) sumsq += (unsigned __int128)d * d;
    if (sumsq != n) throw chartab_error("sum of squared degrees differs from group order");
    // full mod-ell row orthogonality
    for (uint32_t i = 0; i < nc; ++i)
        for (uint32_t j = i; j < nc; ++j) {
            uint64_t acc = 0;
            for (uint32_t k = 0; k < nc; ++k) {
                uint64_t t = mod_mul(classes_.sizes[k] % ell_,
                                     mod_mul(table_mod_[i][k], table_mod_[j][classes_.inverse_class[k]], ell_), ell_);
                acc = (acc + t) % ell_;
            }
            uint64_t want = (i == j) ? n_mod : 0;
            if (acc != want) throw chartab_error("mod-ell orthogonality failed");
        }

    lifted_.assign(nc, std::vector<std::optional<Cyclotomic>>(nc));
    power_class_.assign(nc, {});
}

void CharacterTable::lift_class_powers(uint32_t c) const {
    if (!power_class_[c].empty()) return;
    const Group& G = *G_;
    uint32_t rep = classes_.reps[c];
    std::vector<uint32_t> pc;
    uint32_t x = G.identity();
    do {
        pc.push_back(classes_.class_of[x]);
        x = G.mul(x, rep);
    } while (x != G.identity());
    power_class_[c] = std::move(pc);
}

const Cyclotomic& CharacterTable::value(uint32_t i, uint32_t c) const {
    auto& slot = lifted_[i][c];
    if (slot) return *slot;
    lift_class_powers(c);
    const auto& pc = power_class_[c];
    uint64_t o = pc.size();
    uint64_t zo = mod_pow(zgen_, expo_ / o, ell_);
    uint64_t oinv = mod_inv(o % ell_, ell_);
    Cyclotomic val = Cyclotomic::zero();
    for (uint64_t k = 0; k < o; ++k) {
        uint64_t mk = 0;
        for (uint64_t e = 0; e < o; ++e) {
            uint64_t ze = mod_pow(zo, (o - k % o) * e % o, ell_);
            mk = (mk + mod_mul(table_mod_[i][pc[e]], ze, ell_)) % ell_;
        }
        mk = mod_mul(mk, oinv, ell_);
        if (mk == 0) continue;
        if (mk > ell_ / 2) throw chartab_error("eigenvalue multiplicity out of range in lift");
        val += Cyclotomic(Rational((long long)mk)) * Cyclotomic::root_of_unity((uint32_t)o, (long long)k);
    }
    slot = std::move(val);
    return *slot;
}

std::optional<uint32_t> CharacterTable::find_row_mod(const std::vector<uint64_t>& vals) const {
    for (uint32_t i = 0; i < count(); ++i)
        if (table_mod_[i] == vals) return i;
    return std::nullopt;
}

bool CharacterTable::column_orthogonality_exact(uint32_t c1, uint32_t c2) const {
    Cyclotomic acc = Cyclotomic::zero();
    for (uint32_t i = 0; i < count(); ++i) acc += value(i, c1) * value(i, c2).conjugate();
    if (c1 == c2) {
        Cyclotomic want(Rational((long long)(group_order() / classes_.sizes[c1])));
        return acc == want;
    }
    return acc.is_zero();
}

/* ---------------- FunSpace ---------------- */

FunSpace FunSpace::zero(const FrobContext& ctx) {
    FunSpace f;
    f.ctx = &ctx;
    f.v.resize(ctx.forms.size());
    for (size_t t = 0; t < ctx.forms.size(); ++t)
        f.v[t].assign(ctx.forms[t].classes.count(), Cyclotomic::zero());
    return f;
}

FunSpace& FunSpace::operator+=(const FunSpace& o) {
    if (!same_ambient(o)) throw chartab_error("FunSpace ambient mismatch");
    for (size_t t = 0; t < v.size(); ++t)
        for (size_t c = 0; c < v[t].size(); ++c) v[t][c] += o.v[t][c];
    return *this;
}

FunSpace& FunSpace::operator-=(const FunSpace& o) {
    if (!same_ambient(o)) throw chartab_error("FunSpace ambient mismatch");
    for (size_t t = 0; t < v.size(); ++t)
        for (size_t c = 0; c < v[t].size(); ++c) v[t][c] -= o.v[t][c];
    return *this;
}

void FunSpace::scale(const Cyclotomic& s) {
    for (auto& form : v)
        for (auto& x : form) x *= s;
}

FunSpace FunSpace::conjugate() const {
    FunSpace r = *this;
    for (auto& form : r.v)
        for (auto& x : form) x = x.conjugate();
    return r;
}

bool FunSpace::is_zero() const {
    for (const auto& form : v)
        for (const auto& x : form)
            if (!x.is_zero()) return false;
    return true;
}

bool FunSpace::operator==(const FunSpace& o) const { return ctx == o.ctx && v == o.v; }

Cyclotomic FunSpace::value_at(uint32_t form, uint32_t elem_local) const {
    return v[form][ctx->forms[form].classes.class_of[elem_local]];
}

Cyclotomic inner_product(const FunSpace& f, const FunSpace& g) {
    if (!f.same_ambient(g)) throw chartab_error("FunSpace ambient mismatch");
    Cyclotomic acc = Cyclotomic::zero();
    for (size_t t = 0; t < f.v.size(); ++t) {
        const auto& classes = f.ctx->forms[t].classes;
        Cyclotomic part = Cyclotomic::zero();
        for (size_t c = 0; c < f.v[t].size(); ++c) {
            if (f.v[t][c].is_zero() || g.v[t][c].is_zero()) continue;
            part += Cyclotomic(Rational((long long)classes.sizes[c])) * f.v[t][c] * g.v[t][c].conjugate();
        }
        if (!part.is_zero())
            acc += part * Cyclotomic(Rational(1, (long long)f.ctx->forms[t].group->size()));
    }
    return acc;
}

FunSpace convolve(const FunSpace& f, const FunSpace& g) {
    if (!f.same_ambient(g)) throw chartab_error("FunSpace ambient mismatch");
    FunSpace out = FunSpace::zero(*f.ctx);
    for (size_t t = 0; t < f.v.size(); ++t) {
        const Form& form = f.ctx->forms[t];
        const Group& G = *form.group;
        parallel_classes(form.classes.count(), G.size(), [&](uint32_t c) {
            uint32_t rep = form.classes.reps[c];
            Cyclotomic acc = Cyclotomic::zero();
            for (uint32_t a = 0; a < G.size(); ++a) {
                const Cyclotomic& fa = f.v[t][form.classes.class_of[a]];
                if (fa.is_zero()) continue;
                const Cyclotomic& gb = g.v[t][form.classes.class_of[G.mul(G.inverse(a), rep)]];
                if (gb.is_zero()) continue;
                acc += fa * gb;
            }
            out.v[t][c] = acc;
        });
    }
    return out;
}

Cyclotomic convolution_scalar(const FunSpace& f, const CharacterTable& tab, uint32_t form, uint32_t irrep,
                              const FrobContext&) {
    // f * chi = lambda chi with lambda = (sum_c |C_c| f(c) chi(c^{-1})) / deg
    Cyclotomic acc = Cyclotomic::zero();
    const ClassData& cd = tab.classes();
    for (uint32_t c = 0; c < cd.count(); ++c) {
        if (f.v[form][c].is_zero()) continue;
        acc += Cyclotomic(Rational((long long)cd.sizes[c])) * f.v[form][c] * tab.value(irrep, cd.inverse_class[c]);
    }
    return acc * Cyclotomic(Rational(1, (long long)tab.degree(irrep)));
}

AllIrreps all_irreps(const FrobContext& ctx) {
    AllIrreps ai;
    ai.ctx = &ctx;
    for (size_t t = 0; t < ctx.forms.size(); ++t) {
        auto tab = std::make_shared<CharacterTable>(ctx.forms[t].group, ctx.forms[t].classes);
        ai.tables.push_back(tab);
        for (uint32_t i = 0; i < tab->count(); ++i) ai.refs.push_back({(uint32_t)t, i});
    }
    return ai;
}

FunSpace AllIrreps::character(uint32_t i) const {
    FunSpace f = FunSpace::zero(*ctx);
    const Ref& r = refs[i];
    const CharacterTable& tab = *tables[r.form];
    for (uint32_t c = 0; c < tab.count(); ++c) f.v[r.form][c] = tab.value(r.index, c);
    return f;
}

FunSpace induce_from_subgroup(const FrobContext& ctx, uint32_t form, const std::vector<uint32_t>& members,
                              const std::vector<Cyclotomic>& values_on_members) {
    const Form& fm = ctx.forms[form];
    const Group& G = *fm.group;
    std::unordered_map<uint32_t, uint32_t> member_pos;
    member_pos.reserve(members.size());
    for (uint32_t i = 0; i < members.size(); ++i) member_pos.emplace(members[i], i);
    FunSpace out = FunSpace::zero(ctx);
    Rational scale(1, (long long)members.size());
    if (members.size() == G.size()) {
        // inducing from the whole group is the identity on class functions
        for (uint32_t c = 0; c < fm.classes.count(); ++c) out.v[form][c] = values_on_members[fm.classes.reps[c]];
        return out;
    }
    parallel_classes(fm.classes.count(), G.size(), [&](uint32_t c) {
        uint32_t rep = fm.classes.reps[c];
        Cyclotomic acc = Cyclotomic::zero();
        for (uint32_t x = 0; x < G.size(); ++x) {
            uint32_t y = G.mul(G.mul(x, rep), G.inverse(x));
            auto it = member_pos.find(y);
            if (it == member_pos.end()) continue;
            const Cyclotomic& val = values_on_members[it->second];
            if (!val.is_zero()) acc += val;
        }
        acc *= Cyclotomic(scale);
        out.v[form][c] = acc;
    });
    return out;
}

std::vector<Cyclotomic> restrict_to_subgroup(const FunSpace& f, uint32_t form, const std::vector<uint32_t>& members) {
    std::vector<Cyclotomic> out;
    out.reserve(members.size());
    const ClassData& cd = f.ctx->forms[form].classes;
    for (uint32_t x : members) out.push_back(f.v[form][cd.class_of[x]]);
    return out;
}

std::vector<uint32_t> frobenius_action_on_irreps(const CharacterTable& tab, const std::vector<uint32_t>& frob_local) {
    const ClassData& cd = tab.classes();
    uint32_t nc = cd.count();
    // chi o F has values (chi o F)(rep_c) = chi(class of F(rep_c))
    std::vector<uint32_t> out(nc);
    for (uint32_t i = 0; i < nc; ++i) {
        std::vector<uint64_t> vals(nc);
        for (uint32_t c = 0; c < nc; ++c) vals[c] = tab.value_mod(i, cd.class_of[frob_local[cd.reps[c]]]);
        auto j = tab.find_row_mod(vals);
        if (!j) throw chartab_error("Frobenius image of an irreducible not found");
        out[i] = *j;
    }
    return out;
}

/* ---------------- coset extensions ---------------- */

Cyclotomic CosetExtension::value_at_coset(uint32_t base_elem, uint32_t shift) const {
    uint32_t packed = gamma->pack(base_elem, shift);
    return gamma_table->value(theta_index, gamma_table->classes().class_of[packed]);
}

CosetExtension extend_f_stable(std::shared_ptr<const Group> base, const std::vector<uint32_t>& frob_local,
                               uint32_t m, const CharacterTable& base_table, uint32_t irrep) {
    const ClassData& bcd = base_table.classes();
    // F-stability check: chi(F(rep)) = chi(rep) on every class
    for (uint32_t c = 0; c < bcd.count(); ++c) {
        uint32_t fc = bcd.class_of[frob_local[bcd.reps[c]]];
        if (base_table.value_mod(irrep, fc) != base_table.value_mod(irrep, c))
            throw chartab_error("extend_f_stable: input character is not F-stable");
    }
    CosetExtension ext;
    ext.gamma = std::make_shared<SemidirectCyclic>(base, frob_local, m);
    ext.gamma_table = std::make_shared<CharacterTable>(ext.gamma);
    const CharacterTable& gt = *ext.gamma_table;
    // extensions: Gamma-irreps of the same degree whose restriction matches chi mod ell.
    // The two tables may use different primes, so compare restrictions exactly.
    std::vector<uint32_t> candidates;
    for (uint32_t th = 0; th < gt.count(); ++th) {
        if (gt.degree(th) != base_table.degree(irrep)) continue;
        bool match = true;
        for (uint32_t c = 0; c < bcd.count() && match; ++c) {
            uint32_t packed = ext.gamma->pack(bcd.reps[c], 0);
            if (!(gt.value(th, gt.classes().class_of[packed]) == base_table.value(irrep, c))) match = false;
        }
        if (match) candidates.push_back(th);
    }
    if (candidates.size() != m)
        throw chartab_error("extend_f_stable: expected " + std::to_string(m) + " extensions, found " +
                            std::to_string(candidates.size()));
    // the distinguished coset representative sigma = (identity, 1)
    uint32_t sigma_class = gt.classes().class_of[ext.gamma->pack(base->identity(), m > 1 ? 1 : 0)];
    uint32_t best = candidates[0];
    for (uint32_t cand : candidates)
        if (Cyclotomic::canonical_less(gt.value(cand, sigma_class), gt.value(best, sigma_class))) best = cand;
    ext.theta_index = best;
    if (m > 1) {
        // all extensions differ from the chosen one by m-th roots of unity on the coset
        // find a coset class where the chosen extension is nonzero
        uint32_t probe = UINT32_MAX;
        for (uint32_t c = 0; c < gt.count() && probe == UINT32_MAX; ++c) {
            uint32_t rep = gt.classes().reps[c];
            if (ext.gamma->shift_part(rep) == 1 && !gt.value(best, c).is_zero()) probe = c;
        }
        if (probe == UINT32_MAX) throw chartab_error("extension vanishes on the twisted coset");
        for (uint32_t cand : candidates) {
            Cyclotomic zeta = gt.value(cand, probe) / gt.value(best, probe);
            if (!(zeta.pow(m) == Cyclotomic::one()))
                throw chartab_error("extensions do not differ by m-th roots of unity");
        }
    }
    return ext;
}

} // namespace csolv
