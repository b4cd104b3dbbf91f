#pragma once

#include "csolv/lpacket.hpp"

namespace csolv {

struct shintani_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// witness with f = zeta * g componentwise, zeta a root of unity
std::optional<Cyclotomic> fun_equal_up_to_root(const FunSpace& f, const FunSpace& g);
// bijective matching of two families up to per-element root-of-unity phases
bool basis_matches_up_to_roots(const std::vector<FunSpace>& a, const std::vector<FunSpace>& b);

/*
  The full Shintani pipeline for a connected family: for every level m up to
  m_max, the F-stable irreducible characters of G^{F^m} are extended to the
  cyclic cover Gamma_m and transferred along the norm map into Fun([G], F).
  Packet bookkeeping is carried on both levels so the descent can be tested
  against the L-packet decomposition, and the stabilized bases are compared
  with the unit-norm trace functions.
*/
struct ShintaniOutcome {
    CheckList checks;
    struct PacketPeriod {
        std::string pair;
        std::string packet;
        int m0 = -1; // -1: inconclusive within m_max
        bool almost_characters_match = false;
        // the m-th Shintani matrix <Sh_m(W), chi_V> per level
        std::vector<std::vector<std::vector<Cyclotomic>>> matrices;
    };
    std::vector<PacketPeriod> periods;
    // descent bases per level, ordered like the F-stable irreps found there
    std::vector<std::vector<FunSpace>> bases_by_level; // [m-1][...]
};

ShintaniOutcome run_shintani(const GroupSpec& spec, uint32_t m_max, FieldTower& tower, uint64_t cap = 2000000);

// single descent, exposed for unit tests: Sh_m of one F-stable irreducible
FunSpace shintani_descent_single(const FrobContext& ctx_m, const FrobContext& ctx_1, FieldTower& tower,
                                 const CharacterTable& table_m, uint32_t irrep);

} // namespace csolv
