#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csolv/chartab.hpp"

#include <algorithm>
#include <map>

using namespace csolv;

namespace {

std::vector<std::unique_ptr<FieldTower>>& towers() {
    static std::vector<std::unique_ptr<FieldTower>> t;
    return t;
}

FrobContext make_ctx(Family f, uint32_t p, uint32_t k, uint32_t m, uint32_t rank = 1) {
    towers().push_back(std::make_unique<FieldTower>(p, std::set<uint32_t>{1}));
    GroupSpec spec{f, p, k, rank};
    return build_context(spec, m, *towers().back());
}

std::multiset<uint64_t> degree_multiset(const CharacterTable& t) {
    std::multiset<uint64_t> d;
    for (uint32_t i = 0; i < t.count(); ++i) d.insert(t.degree(i));
    return d;
}

} // namespace

TEST_CASE("cyclic group table") {
    auto ctx = make_ctx(Family::SplitTorus, 2, 2, 1); // F_4^* = Z/3
    CharacterTable tab(ctx.untwisted().group, ctx.untwisted().classes);
    REQUIRE(tab.count() == 3);
    for (uint32_t i = 0; i < 3; ++i) CHECK(tab.degree(i) == 1);
    // all values are cube roots of unity; the three rows are distinct
    bool found_nontrivial = false;
    for (uint32_t i = 0; i < 3; ++i)
        for (uint32_t c = 0; c < 3; ++c) {
            Cyclotomic v = tab.value(i, c);
            CHECK(v.pow(3) == Cyclotomic::one());
            if (!(v == Cyclotomic::one())) found_nontrivial = true;
        }
    CHECK(found_nontrivial);
}

TEST_CASE("borel tables at q=2,3") {
    auto c2 = make_ctx(Family::BorelSL3, 2, 1, 1);
    CharacterTable t2(c2.untwisted().group, c2.untwisted().classes);
    CHECK(degree_multiset(t2) == std::multiset<uint64_t>{1, 1, 1, 1, 2});

    auto c3 = make_ctx(Family::BorelSL3, 3, 1, 1);
    CharacterTable t3(c3.untwisted().group, c3.untwisted().classes);
    // brute force: 11 classes; degrees 1 x4, 2 x4, 4 x1, 6 x2, sum of squares 108
    CHECK(t3.count() == 11);
    CHECK(degree_multiset(t3) == std::multiset<uint64_t>{1, 1, 1, 1, 2, 2, 2, 2, 4, 6, 6});
    uint64_t sumsq = 0;
    for (uint32_t i = 0; i < t3.count(); ++i) sumsq += t3.degree(i) * t3.degree(i);
    CHECK(sumsq == 108);
}

TEST_CASE("exact column orthogonality on small groups") {
    auto ctx = make_ctx(Family::BorelSL3, 2, 1, 1);
    CharacterTable tab(ctx.untwisted().group, ctx.untwisted().classes);
    for (uint32_t c1 = 0; c1 < tab.count(); ++c1)
        for (uint32_t c2 = 0; c2 < tab.count(); ++c2) CHECK(tab.column_orthogonality_exact(c1, c2));
}

TEST_CASE("S3 table via the semidirect cover") {
    auto ctx = make_ctx(Family::SplitTorus, 2, 1, 2);
    const Form& f = ctx.untwisted();
    auto gamma = std::make_shared<SemidirectCyclic>(f.group, f.frob_local, 2);
    CharacterTable tab(gamma);
    CHECK(degree_multiset(tab) == std::multiset<uint64_t>{1, 1, 2});
    // hand-checked values of the two-dimensional character: 2 at e, -1 on the
    // 3-cycles, 0 on the involutions
    for (uint32_t i = 0; i < tab.count(); ++i) {
        if (tab.degree(i) != 2) continue;
        std::multiset<std::pair<uint64_t, std::string>> got;
        for (uint32_t c = 0; c < tab.count(); ++c)
            got.insert({tab.classes().sizes[c], tab.value(i, c).serialize()});
        std::multiset<std::pair<uint64_t, std::string>> want = {
            {1, "(1; 2)"}, {2, "(1; -1)"}, {3, "(1; 0)"}};
        CHECK(got == want);
    }
}

TEST_CASE("irreps over all forms are orthonormal") {
    auto ctx = make_ctx(Family::TorusZ2, 3, 1, 1);
    AllIrreps ai = all_irreps(ctx);
    CHECK(ai.count() == 9); // 4 from Z/2 x Z/2, 5 from D_8
    for (uint32_t i = 0; i < ai.count(); ++i)
        for (uint32_t j = i; j < ai.count(); ++j) {
            Cyclotomic ip = inner_product(ai.character(i), ai.character(j));
            if (i == j) CHECK(ip == Cyclotomic::one());
            else CHECK(ip.is_zero());
        }
    // |Irrep(G,F)| equals total class count over all forms
    uint32_t classes = 0;
    for (const auto& f : ctx.forms) classes += f.classes.count();
    CHECK(ai.count() == classes);
}

TEST_CASE("convolution basics") {
    auto ctx = make_ctx(Family::BorelSL3, 2, 1, 1);
    AllIrreps ai = all_irreps(ctx);
    // delta_identity is the convolution unit
    FunSpace delta = FunSpace::zero(ctx);
    delta.v[0][0] = Cyclotomic::one();
    for (uint32_t i = 0; i < ai.count(); ++i) {
        FunSpace chi = ai.character(i);
        CHECK(convolve(delta, chi) == chi);
    }
    // chi * chi' = delta_{chi, chi'-dual} (|G| / deg) chi  pattern
    const CharacterTable& tab = *ai.tables[0];
    for (uint32_t i = 0; i < ai.count(); ++i)
        for (uint32_t j = 0; j < ai.count(); ++j) {
            Cyclotomic lam = convolution_scalar(ai.character(i), tab, 0, j, ctx);
            // lambda = |G|/deg iff chi_i = conj(chi_j), else 0
            bool dual = true;
            for (uint32_t c = 0; c < tab.count() && dual; ++c)
                if (!(tab.value(i, c) == tab.value(j, c).conjugate())) dual = false;
            if (dual) CHECK(lam == Cyclotomic(Rational((long long)(8 / tab.degree(j)))));
            else CHECK(lam.is_zero());
        }
}

TEST_CASE("frobenius reciprocity") {
    auto ctx = make_ctx(Family::BorelSL3, 2, 2, 1); // B(F_4)
    AllIrreps ai = all_irreps(ctx);
    auto members = ctx.subgroup_members(0, "U");
    auto sub = std::make_shared<SubgroupView>(ctx.untwisted().group, members);
    CharacterTable subtab(sub);
    // a couple of irreducibles of U(F_4) against a couple of B(F_4)
    REQUIRE(subtab.count() == 19); // q^2 + q - 1 classes in U(F_q)
    for (uint32_t psi : {(uint32_t)1, (uint32_t)4, (uint32_t)18}) {
        std::vector<Cyclotomic> vals;
        for (uint32_t i = 0; i < members.size(); ++i)
            vals.push_back(subtab.value(psi, subtab.classes().class_of[i]));
        FunSpace ind = induce_from_subgroup(ctx, 0, members, vals);
        for (uint32_t chi : {(uint32_t)0, (uint32_t)7, (uint32_t)26}) {
            FunSpace chif = ai.character(chi);
            Cyclotomic lhs = inner_product(ind, chif);
            // <psi, res chi>_U
            auto res = restrict_to_subgroup(chif, 0, members);
            Cyclotomic rhs = Cyclotomic::zero();
            for (uint32_t i = 0; i < members.size(); ++i)
                rhs += subtab.value(psi, subtab.classes().class_of[i]) * res[i].conjugate();
            rhs *= Cyclotomic(Rational(1, (long long)members.size()));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("extension of F-stable characters") {
    // T = G_m, q = 2, m = 2: Gamma_2 = S_3, trivial character extends with value 1
    auto ctx = make_ctx(Family::SplitTorus, 2, 1, 2);
    const Form& f = ctx.untwisted();
    CharacterTable tab(f.group, f.classes);
    // trivial character: the one with all values 1
    uint32_t triv = UINT32_MAX;
    for (uint32_t i = 0; i < tab.count(); ++i) {
        bool all1 = true;
        for (uint32_t c = 0; c < tab.count(); ++c)
            if (!(tab.value(i, c) == Cyclotomic::one())) all1 = false;
        if (all1) triv = i;
    }
    REQUIRE(triv != UINT32_MAX);
    CosetExtension ext = extend_f_stable(f.group, f.frob_local, 2, tab, triv);
    for (uint32_t x = 0; x < f.group->size(); ++x) {
        Cyclotomic v = ext.value_at_coset(x, 1);
        CHECK((v == Cyclotomic::one() || v == Cyclotomic(-1)));
    }
    // the nontrivial characters of F_4^* are not F-stable
    uint32_t nontriv = (triv + 1) % 3;
    CHECK_THROWS_AS(extend_f_stable(f.group, f.frob_local, 2, tab, nontriv), chartab_error);
    // m = 1: the extension is the character itself
    auto ctx1 = make_ctx(Family::SplitTorus, 2, 2, 1);
    const Form& f1 = ctx1.untwisted();
    CharacterTable tab1(f1.group, f1.classes);
    CosetExtension e1 = extend_f_stable(f1.group, f1.frob_local, 1, tab1, 2);
    for (uint32_t x = 0; x < f1.group->size(); ++x)
        CHECK(e1.value_at_coset(x, 0) == tab1.value(2, f1.classes.class_of[x]));
}

TEST_CASE("frobenius action on irreps") {
    auto ctx = make_ctx(Family::BorelSL3, 2, 1, 2); // B(F_4) with the q=2 Frobenius
    const Form& f = ctx.untwisted();
    CharacterTable tab(f.group, f.classes);
    auto perm = frobenius_action_on_irreps(tab, f.frob_local);
    // a permutation whose square is the identity (F^2 = id on B(F_4))
    std::vector<uint32_t> seen(perm.size(), 0);
    uint32_t fixed = 0;
    for (uint32_t i = 0; i < perm.size(); ++i) {
        ++seen[perm[i]];
        CHECK(perm[perm[i]] == i);
        if (perm[i] == i) ++fixed;
    }
    for (uint32_t s : seen) CHECK(s == 1);
    CHECK(fixed == 5); // |Irrep(B, F^2)^F| = 5
}
