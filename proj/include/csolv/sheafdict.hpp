#pragma once

#include "csolv/chartab.hpp"
#include "csolv/metricmod.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace csolv {

struct sheaf_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// multiplicative character datum of an admissible pair
struct CharDatum {
    enum class Kind { Trivial, ArtinSchreierV, ArtinSchreierZ } kind = Kind::Trivial;
    // ArtinSchreierV: u -> psi(Tr(x a + y b)) through U -> U/Z; parameters in the base field
    // ArtinSchreierZ: z -> psi(Tr(lambda c)) on the center coordinate
    uint32_t x = 0, y = 0, lambda = 1; // base-field element indices
};

struct AdmissiblePairSpec {
    std::string name;
    std::string subgroup;   // H
    CharDatum datum;        // N
    std::string normalizer; // G'
    // central-form presentation (A . T') carrying the packet parameters
    std::string central_subgroup; // K
    std::string central_abelian;  // A, with the extended character N'
    std::string torus;            // T' (maximal torus of G'), possibly "trivial"
};

// the shipped pair list covering all minimal idempotents of a family
std::vector<AdmissiblePairSpec> standard_pairs(Family fam, uint32_t p, uint64_t q);
// parse "case1".."case5", "torus", "central(c)", "linear(x,y)"
AdmissiblePairSpec make_pair(Family fam, const std::string& text, uint32_t p, uint64_t q);

// enumeration of the packet parameters of a block: characters of T'^{tF} per
// form, their Pi0-orbits with cross-form geometric matching, and F-stability
struct TorusCharacterData {
    struct PerForm {
        std::vector<uint32_t> members; // T'^{tF} inside the form, local ids
        std::shared_ptr<SubgroupView> group;
        std::shared_ptr<CharacterTable> table;
    };
    std::vector<PerForm> forms;
    struct Orbit {
        std::vector<std::pair<uint32_t, uint32_t>> members; // (form, character index)
        bool f_stable = true;
        std::string label;
    };
    std::vector<Orbit> orbits;
    uint32_t f_stable_count() const {
        uint32_t n = 0;
        for (const auto& o : orbits) n += o.f_stable ? 1 : 0;
        return n;
    }
};

/*
  A resolved minimal-idempotent block: the block idempotent T_e, the induced
  characters used as the independent block-membership oracle, and the packet
  layer (parameters, idempotents, unit-norm trace functions, modular data).
*/
struct ResolvedBlock {
    AdmissiblePairSpec pair;
    const FrobContext* ctx = nullptr;

    FunSpace T_e;
    std::vector<FunSpace> induced_block_chars; // ind_{H}^{G} T_N over the F-stable pair orbit reps

    std::optional<TorusCharacterData> torus_data; // absent when the block is a single packet

    struct Packet {
        std::string label;
        int orbit = -1; // index into torus_data->orbits, or -1 for the whole block
        FunSpace idempotent;
    };
    std::vector<Packet> packets;

    // block invariants
    uint32_t dim_G = 0, dim_T = 0, dim_H = 0, dim_Gp = 0, tau_e = 0;
    long long n_e = 0;
    long long two_d_e = 0; // 2 * d_e, always even for the shipped families
    long long d_e() const;

    // Lang-transported Artin-Schreier scalings for the mu3U block (cube-coset
    // representatives); populated only for borel-sl3 case4
    std::vector<uint32_t> case4_lambdas;

    // unit-norm trace functions of the F-stable character sheaves in one packet
    std::vector<FunSpace> trace_functions(uint32_t packet) const;
    // the packet's modular datum plus the Frobenius fixed-label count
    ModularData packet_datum(uint32_t packet) const;
    uint32_t packet_fixed_count(uint32_t packet) const;
    // true when packet_datum is available for this family
    bool datum_supported() const;

    FieldTower* tower = nullptr;
};

ResolvedBlock resolve_block(const FrobContext& ctx, const AdmissiblePairSpec& pair, FieldTower& tower);

// standalone entry point for the torus-character survey
TorusCharacterData torus_character_data(const FrobContext& ctx, const std::string& torus_name, FieldTower& tower);

// expected F-stable packet-parameter count (1/|Pi0|) sum_t |T'^{tF}|
Rational expected_orbit_count(const FrobContext& ctx, const TorusCharacterData& tcd);

} // namespace csolv
