#pragma once

#include "csolv/ffield.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace csolv {

struct size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct family_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Family { BorelSL3, SplitTorus, HeisenbergU3, Mu3TimesU3, TorusZ2 };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

struct GroupSpec {
    Family family = Family::SplitTorus;
    uint32_t p = 2;
    uint32_t k = 1; // q = p^k
    uint32_t rank = 1; // split-torus only
};

// finite field with full lookup tables, element = index in coefficient order
struct SmallField {
    uint32_t p = 2, deg = 1, size = 2;
    std::vector<uint32_t> mul_t, add_t; // size*size
    std::vector<uint32_t> inv_t, neg_t, frob_p_t;
    std::vector<uint32_t> trace_p;      // absolute trace to F_p

    uint32_t mul(uint32_t a, uint32_t b) const { return mul_t[(uint64_t)a * size + b]; }
    uint32_t add(uint32_t a, uint32_t b) const { return add_t[(uint64_t)a * size + b]; }
    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg_t[b]); }
    uint32_t inv(uint32_t a) const;
    uint32_t neg(uint32_t a) const { return neg_t[a]; }
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t frob(uint32_t a, uint64_t q) const; // a^q, q a power of p
    uint32_t one() const { return 1; }

    static std::shared_ptr<SmallField> make(FieldTower& tower, uint32_t deg);
};

// abstract finite group on contiguous element ids
class Group {
  public:
    virtual ~Group() = default;
    virtual uint32_t size() const = 0;
    virtual uint32_t mul(uint32_t a, uint32_t b) const = 0;
    virtual uint32_t inverse(uint32_t a) const = 0;
    virtual uint32_t identity() const = 0;
    uint64_t element_order(uint32_t a) const;
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint64_t exponent() const;
};

struct ClassData {
    std::vector<uint32_t> class_of;
    std::vector<uint32_t> reps;  // least element id per class; class 0 = identity
    std::vector<uint64_t> sizes;
    std::vector<uint32_t> inverse_class;
    uint32_t count() const { return (uint32_t)reps.size(); }
};

ClassData conjugacy_classes(const Group& G);

// partition of a group under x ~ g x f(g)^{-1}
struct TwistedClassSet {
    std::vector<uint32_t> class_of;
    std::vector<uint32_t> reps;
    std::vector<uint64_t> sizes;
    uint32_t count() const { return (uint32_t)reps.size(); }
};

TwistedClassSet twisted_classes(const Group& G, const std::vector<uint32_t>& twist_map);

using Elt = std::array<uint32_t, 5>;

struct EltHash {
    size_t operator()(const Elt& e) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (uint32_t v : e) {
            h ^= v;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

/*
  Matrix-coordinate group of F-points of one of the configured families,
  enumerated over F_{q^{m*closure}}. The `closure` factor enlarges the field
  just enough that every pure inner form of the level-m Frobenius lives inside
  the enumeration. Elements are indexed in coordinate order.
*/
class CoordinateGroup : public Group {
  public:
    CoordinateGroup(const GroupSpec& spec, uint32_t m, FieldTower& tower, uint64_t cap = 2000000);

    uint32_t size() const override { return (uint32_t)elems_.size(); }
    uint32_t mul(uint32_t a, uint32_t b) const override;
    uint32_t inverse(uint32_t a) const override;
    uint32_t identity() const override { return id_; }

    const GroupSpec& spec() const { return spec_; }
    uint32_t level() const { return m_; }
    uint32_t closure() const { return closure_; }
    uint64_t q() const { return q_; }
    uint64_t qm() const { return qm_; }
    const SmallField& field() const { return *F_; }

    const Elt& element(uint32_t i) const { return elems_[i]; }
    uint32_t index_of(const Elt& e) const;
    bool contains(const Elt& e) const { return index_.count(e) != 0; }

    uint32_t frobenius(uint32_t a) const { return frob1_[a]; } // base q-power Frobenius
    uint32_t frobenius_m(uint32_t a) const;                    // F^m

    // named algebraic subgroups, as membership predicate over element ids
    bool in_subgroup(const std::string& name, uint32_t a) const;
    static uint32_t subgroup_dim(Family f, const std::string& name);
    static uint32_t subgroup_torus_dim(Family f, const std::string& name);
    static uint32_t group_dim(Family f);
    static uint32_t torus_dim(Family f);
    static uint64_t order_formula(const GroupSpec& spec, uint32_t m);

    // component data (pi_0)
    uint32_t component_of(uint32_t a) const;
    uint32_t component_count() const { return components_; }

  private:
    Elt mul_elt(const Elt& a, const Elt& b) const;
    Elt inv_elt(const Elt& a) const;
    Elt frob_elt(const Elt& a) const;

    GroupSpec spec_;
    uint32_t m_, closure_;
    uint64_t q_, qm_;
    std::shared_ptr<SmallField> F_;
    std::vector<Elt> elems_;
    std::unordered_map<Elt, uint32_t, EltHash> index_;
    std::vector<uint32_t> frob1_;
    uint32_t id_ = 0;
    uint32_t components_ = 1;
};

// subset of a parent group, closed under the operations, with local contiguous ids
class SubgroupView : public Group {
  public:
    SubgroupView(std::shared_ptr<const Group> parent, std::vector<uint32_t> members);

    uint32_t size() const override { return (uint32_t)members_.size(); }
    uint32_t mul(uint32_t a, uint32_t b) const override { return local_of(parent_->mul(members_[a], members_[b])); }
    uint32_t inverse(uint32_t a) const override { return local_of(parent_->inverse(members_[a])); }
    uint32_t identity() const override { return id_; }

    uint32_t parent_id(uint32_t local) const { return members_[local]; }
    uint32_t local_of(uint32_t parent_idx) const;
    bool contains_parent(uint32_t parent_idx) const { return local_.count(parent_idx) != 0; }
    const Group& parent() const { return *parent_; }

  private:
    std::shared_ptr<const Group> parent_;
    std::vector<uint32_t> members_;
    std::unordered_map<uint32_t, uint32_t> local_;
    uint32_t id_;
};

// G^{F^m} extended by a cyclic group of order m acting as the Frobenius
class SemidirectCyclic : public Group {
  public:
    SemidirectCyclic(std::shared_ptr<const Group> base, std::vector<uint32_t> frob, uint32_t m);

    uint32_t size() const override { return (uint32_t)(base_->size() * m_); }
    uint32_t mul(uint32_t a, uint32_t b) const override;
    uint32_t inverse(uint32_t a) const override;
    uint32_t identity() const override { return base_->identity(); }

    uint32_t order_m() const { return m_; }
    uint32_t pack(uint32_t g, uint32_t j) const { return j * base_->size() + g; }
    uint32_t base_part(uint32_t a) const { return a % base_->size(); }
    uint32_t shift_part(uint32_t a) const { return a / base_->size(); }
    const Group& base() const { return *base_; }

  private:
    std::shared_ptr<const Group> base_;
    std::vector<uint32_t> frob_;
    uint32_t m_;
};

// one pure inner form G^{tF_m}
struct Form {
    std::string label;
    uint32_t twist_rep; // ambient element id of the twisting representative
    std::shared_ptr<SubgroupView> group;
    ClassData classes;
    std::vector<uint32_t> frob_local; // action of the base Frobenius on this form
};

/*
  Everything the function-theoretic layers need about one (family, q, level m):
  the ambient enumeration, the pure inner forms of F_m with their class data,
  and the named-subgroup resolver per form.
*/
struct FrobContext {
    GroupSpec spec;
    uint32_t m = 1;
    uint64_t q = 2, qm = 2;
    std::shared_ptr<CoordinateGroup> ambient;
    std::vector<Form> forms;

    const Form& untwisted() const { return forms.front(); }
    // members of a named subgroup inside form `f`, as local ids
    std::vector<uint32_t> subgroup_members(uint32_t f, const std::string& name) const;
    uint32_t dim() const {
        return spec.family == Family::SplitTorus ? spec.rank : CoordinateGroup::group_dim(spec.family);
    }
    uint32_t tdim() const {
        return spec.family == Family::SplitTorus ? spec.rank : CoordinateGroup::torus_dim(spec.family);
    }
};

FrobContext build_context(const GroupSpec& spec, uint32_t m, FieldTower& tower, uint64_t cap = 2000000);

// F-twisted classes of G^{F^m} (untwisted form), domain of the norm map
TwistedClassSet frobenius_twisted_classes(const FrobContext& ctx);

struct NormResult {
    uint32_t form = 0;  // index into level-1 forms
    uint32_t class_id = 0;
};

/*
  Shintani norm transfer: for x in G^{F^m}, solve x = alpha^{-1} F(alpha)
  coordinate-wise through the tower and return the conjugacy class of
  beta = F^m(alpha) alpha^{-1} in G^F. Connected families only; level-1 calls
  are the identity transfer.
*/
class NormMap {
  public:
    NormMap(const FrobContext& high, const FrobContext& low, FieldTower& tower);
    NormResult transfer(uint32_t x_local) const; // x in the untwisted form of `high`
    // verifies the map is constant on twisted classes and bijective onto
    // classes of all pure inner forms at level 1
    void verify_bijectivity() const;

  private:
    const FrobContext& high_;
    const FrobContext& low_;
    FieldTower& tower_;
};

} // namespace csolv
