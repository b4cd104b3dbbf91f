#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csolv/metricmod.hpp"

using namespace csolv;

namespace {

MetricGroup semion() {
    MetricGroup m;
    m.K.orders = {2};
    m.theta = {Cyclotomic::one(), Cyclotomic::root_of_unity(4, 1)};
    return m;
}

} // namespace

TEST_CASE("semion data") {
    ModularData d = pointed_modular(semion());
    REQUIRE(d.rank() == 2);
    CHECK(d.S[0][0] == Cyclotomic::one());
    CHECK(d.S[0][1] == Cyclotomic::one());
    CHECK(d.S[1][0] == Cyclotomic::one());
    CHECK(d.S[1][1] == Cyclotomic(-1));
    CHECK(verify_modular(d).pass());
}

TEST_CASE("Z/3 quadratic form") {
    MetricGroup m;
    m.K.orders = {3};
    m.theta = {Cyclotomic::one(), Cyclotomic::root_of_unity(3, 1), Cyclotomic::root_of_unity(3, 4)};
    // theta(a) = zeta_3^{a^2}
    ModularData d = pointed_modular(m);
    for (uint32_t a = 0; a < 3; ++a)
        for (uint32_t c = 0; c < 3; ++c) CHECK(d.S[a][c] == Cyclotomic::root_of_unity(3, 2LL * a * c));
    // S Sbar^T = 3 I
    CHECK(verify_modular(d).pass());
}

TEST_CASE("trivial group gives Vec") {
    MetricGroup m;
    m.K.orders = {1};
    m.theta = {Cyclotomic::one()};
    ModularData d = pointed_modular(m);
    CHECK(d.rank() == 1);
    CHECK(d.global_dim == 1);
    CHECK(verify_modular(d, true).pass());
}

TEST_CASE("degenerate form rejected") {
    MetricGroup m;
    m.K.orders = {2};
    m.theta = {Cyclotomic::one(), Cyclotomic(-1)}; // b(1,1) = theta(0)/theta(1)^2 = 1: degenerate
    CHECK_THROWS_AS(pointed_modular(m), metric_error);
}

TEST_CASE("double of mu3") {
    FiniteAbelianGroup A{{3}};
    ModularData d = double_abelian(A);
    CHECK(d.rank() == 9);
    CHECK(d.global_dim == 9);
    auto rep = verify_modular(d, true);
    CHECK(rep.pass());
    // Verlinde fusion equals the group law on Z/3 x Z/3 (built in, but verify one entry)
    MetricGroup m = double_metric_group(A);
    uint64_t x = m.K.index({1, 2}), y = m.K.index({2, 2}), z = m.K.add(x, y);
    CHECK(d.fusion[x][y][z] == 1);
}

TEST_CASE("double of Z/2 is the toric code") {
    FiniteAbelianGroup A{{2}};
    ModularData d = double_abelian(A);
    CHECK(d.rank() == 4);
    CHECK(verify_modular(d, true).pass());
}

TEST_CASE("tampered S fails unitarity") {
    ModularData d = pointed_modular(semion());
    d.S[1][1] = Cyclotomic::one(); // sign flip
    auto rep = verify_modular(d);
    CHECK(!rep.pass());
    CHECK(rep.first_failure() == "s.unitary_up_to_dim"); // a diagonal flip keeps symmetry
}

TEST_CASE("fixed points under automorphisms") {
    FiniteAbelianGroup A{{3}};
    MetricGroup m = double_metric_group(A);
    // inversion on A
    std::vector<uint32_t> inv3 = {0, 2, 1};
    auto perm = double_automorphism(A, inv3);
    metric_automorphism_action(m, perm); // must preserve theta
    auto fixed = fixed_labels(perm);
    CHECK(fixed.size() == 1);
    CHECK(fixed[0] == 0);
    // identity fixes all 9
    std::vector<uint32_t> id3 = {0, 1, 2};
    auto permid = double_automorphism(A, id3);
    CHECK(fixed_labels(permid).size() == 9);
}

TEST_CASE("sampler produces valid nondegenerate forms") {
    MetricSampler s(0);
    for (int i = 0; i < 20; ++i) {
        MetricGroup m = s.sample(16);
        CHECK(m.K.size() <= 16);
        ModularData d = pointed_modular(m);
        CHECK(verify_modular(d).pass());
    }
}
