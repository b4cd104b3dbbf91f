#pragma once

#include "csolv/cyclotomic.hpp"
#include "csolv/groupkit.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace csolv {

struct chartab_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bound for the parallel per-class loops in induction and convolution
void set_worker_threads(uint32_t n);
uint32_t worker_threads();

/*
  Exact character table of a finite group, computed by the Dixon-Schneider
  method: the class matrices are simultaneously diagonalized over a prime
  field F_ell with ell = 1 mod exp(G) and ell > 2 sqrt(|G|), and entries are
  lifted to cyclotomics through the eigenvalue-multiplicity counts. The mod-ell
  table is verified against the orthogonality relations before the constructor
  returns; lifted values are cached per entry.

  Determinism: class matrices are processed in class-size order (ties by
  representative id), eigenvalues in ascending residue order, and the finished
  rows are sorted by (degree, mod-ell row).
*/
class CharacterTable {
  public:
    explicit CharacterTable(std::shared_ptr<const Group> G);
    CharacterTable(std::shared_ptr<const Group> G, ClassData classes);
    // forced_ell must be a prime = 1 mod exp(G) exceeding 2 sqrt(|G|); sharing
    // one prime across a group and its cyclic cover lets restrictions be
    // compared without lifting
    CharacterTable(std::shared_ptr<const Group> G, ClassData classes, uint64_t forced_ell);

    uint32_t count() const { return (uint32_t)table_mod_.size(); }
    const ClassData& classes() const { return classes_; }
    const Group& group() const { return *G_; }
    uint64_t group_order() const { return G_->size(); }
    uint64_t degree(uint32_t i) const { return degrees_[i]; }
    uint64_t ell() const { return ell_; }
    uint64_t value_mod(uint32_t i, uint32_t c) const { return table_mod_[i][c]; }
    const Cyclotomic& value(uint32_t i, uint32_t c) const; // exact, lazily lifted

    // index of the irreducible with given values mod ell on all classes
    std::optional<uint32_t> find_row_mod(const std::vector<uint64_t>& vals) const;

    // exact column orthogonality check, used by tests on small groups
    bool column_orthogonality_exact(uint32_t c1, uint32_t c2) const;

  private:
    void compute();
    void lift_class_powers(uint32_t c) const;

    std::shared_ptr<const Group> G_;
    ClassData classes_;
    uint64_t forced_ell_ = 0;
    uint64_t ell_ = 0, zgen_ = 0, expo_ = 0;
    std::vector<std::vector<uint64_t>> table_mod_;
    std::vector<uint64_t> degrees_;
    mutable std::vector<std::vector<std::optional<Cyclotomic>>> lifted_;
    mutable std::vector<std::vector<uint32_t>> power_class_; // per class: class of rep^e
};

/*
  Element of Fun([G], F): one class function per pure inner form. The inner
  product is the sum over forms of the standard Hermitian products; convolution
  acts per form.
*/
struct FunSpace {
    const FrobContext* ctx = nullptr;
    std::vector<std::vector<Cyclotomic>> v; // [form][class]

    static FunSpace zero(const FrobContext& ctx);
    bool same_ambient(const FunSpace& o) const { return ctx == o.ctx; }

    FunSpace& operator+=(const FunSpace& o);
    FunSpace& operator-=(const FunSpace& o);
    void scale(const Cyclotomic& s);
    FunSpace conjugate() const;
    bool is_zero() const;
    bool operator==(const FunSpace& o) const;

    Cyclotomic value_at(uint32_t form, uint32_t elem_local) const;
};

Cyclotomic inner_product(const FunSpace& f, const FunSpace& g);
FunSpace convolve(const FunSpace& f, const FunSpace& g);
// scalar lambda with f * chi = lambda * chi for an irreducible character chi on one form
Cyclotomic convolution_scalar(const FunSpace& f, const CharacterTable& tab, uint32_t form, uint32_t irrep,
                              const FrobContext& ctx);

// character tables of every pure inner form plus the concatenated irreducible list
struct AllIrreps {
    const FrobContext* ctx = nullptr;
    std::vector<std::shared_ptr<CharacterTable>> tables; // per form
    struct Ref {
        uint32_t form;
        uint32_t index;
    };
    std::vector<Ref> refs;

    uint32_t count() const { return (uint32_t)refs.size(); }
    uint64_t degree(uint32_t i) const { return tables[refs[i].form]->degree(refs[i].index); }
    FunSpace character(uint32_t i) const;
};

AllIrreps all_irreps(const FrobContext& ctx);

// induction of a class function given on a subgroup (by local element ids) of one form
FunSpace induce_from_subgroup(const FrobContext& ctx, uint32_t form, const std::vector<uint32_t>& members,
                              const std::vector<Cyclotomic>& values_on_members);

// restriction of a FunSpace component to a subgroup, values per member
std::vector<Cyclotomic> restrict_to_subgroup(const FunSpace& f, uint32_t form, const std::vector<uint32_t>& members);

// permutation of irreducibles under chi -> chi o F, per form (requires frob_local)
std::vector<uint32_t> frobenius_action_on_irreps(const CharacterTable& tab, const std::vector<uint32_t>& frob_local);

/*
  Extension of an F-stable irreducible W of G^{F^m} to the cyclic cover
  Gamma_m = G^{F^m} x| Z/m. All m extensions differ by m-th roots of unity on
  the twisted coset; the one whose value at the distinguished coset
  representative sigma has the least serialized form is chosen.
*/
struct CosetExtension {
    std::shared_ptr<CharacterTable> gamma_table;
    std::shared_ptr<const SemidirectCyclic> gamma;
    uint32_t theta_index = 0; // chosen extension inside the Gamma table
    Cyclotomic value_at_coset(uint32_t base_elem, uint32_t shift) const;
};

CosetExtension extend_f_stable(std::shared_ptr<const Group> base, const std::vector<uint32_t>& frob_local,
                               uint32_t m, const CharacterTable& base_table, uint32_t irrep);

} // namespace csolv
