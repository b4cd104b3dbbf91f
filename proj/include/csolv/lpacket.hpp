#pragma once

#include "csolv/sheafdict.hpp"

namespace csolv {

struct lpacket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
  Partition of Irrep(G, F) into minimal-idempotent blocks and L-packets.
  Blocks are assigned twice over: by the idempotent action T_e * chi = chi and
  by occurrence inside ind_H^G T_N; the two assignments must agree. Packets are
  cut inside each block by the packet idempotents.
*/
struct Partition {
    std::vector<uint32_t> block_of;  // per irrep; UINT32_MAX if unassigned
    std::vector<uint32_t> packet_of; // within the block
    std::vector<std::vector<std::vector<uint32_t>>> members; // [block][packet] -> irrep indices
    bool complete = false;           // every irrep in exactly one block and packet
    bool oracles_agree = false;      // idempotent test vs induced-character test
};

Partition partition_irreps(const FrobContext& ctx, const AllIrreps& ai, const std::vector<ResolvedBlock>& blocks);

struct CheckList {
    std::vector<std::pair<std::string, bool>> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.second) return false;
        return true;
    }
    void add(const std::string& name, bool ok) { checks.push_back({name, ok}); }
};

// |Pi_0^{tF}| for the structural formulas
uint32_t pi0_fixed_order(const FrobContext& ctx);

/*
  Per-packet structural checks: the dimension formula solved for dim+(M_W)
  must produce positive integers with sum of squares dim M, and for Heisenberg
  blocks (normalizer = G) the packet satisfies sum (dim W / |Pi_0^{tF}|)^2 =
  q^{2 d_e}.
*/
CheckList structural_checks(const FrobContext& ctx, const ResolvedBlock& rb, const Partition& part,
                            uint32_t block_index, const AllIrreps& ai);

struct SMatrixResult {
    std::vector<std::string> row_labels;    // F-stable character sheaves
    std::vector<uint32_t> member_irreps;    // column order, AllIrreps indices
    std::vector<std::vector<Cyclotomic>> transition; // exactly unitary
    std::vector<std::vector<Cyclotomic>> s_tilde;    // q^{d_e - dim G} * transition
    std::vector<std::vector<Cyclotomic>> s_plus;     // sqrt(dim M) * transition
    uint64_t dim_m = 1, sqrt_dim_m = 1;
    CheckList checks;
};

SMatrixResult transition_and_crossed_s(const FrobContext& ctx, const ResolvedBlock& rb, uint32_t block_index,
                                       uint32_t packet, const Partition& part, const AllIrreps& ai);

// A = D_r P_r B P_c D_c for root-of-unity diagonal matrices D and permutations P
bool matrices_match_up_to_phases(const std::vector<std::vector<Cyclotomic>>& A,
                                 const std::vector<std::vector<Cyclotomic>>& B);

} // namespace csolv
