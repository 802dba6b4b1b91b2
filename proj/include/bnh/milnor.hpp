#pragma once
#include "bnh/fgab.hpp"
#include "bnh/fields.hpp"

#include <memory>
#include <mutex>

namespace bnh {

// discrete log at pl of the unit (-1)^{v(a)v(b)} a^{v(b)} / b^{v(a)}
long tame_symbol(const Place& pl, const UnitVector& a, const UnitVector& b,
                 const Caps& caps = default_caps());

// true when every symbol invariant of {a, 1-a} vanishes; a outside {0, 1}
bool steinberg_vanishes(const FieldElem& a, const Caps& caps = default_caps());

// Multiplicative S-symbol group of weight m, modeled by its computable
// invariants. Generators are the m-tuples over the support basis in
// lexicographic order (slot 0 most significant, digit 0 the torsion
// generator); the invariant coordinates of a symbol are:
//   m = 0   a single free coordinate (multiplicity of the empty symbol)
//   m = 1   the support coordinates of the unit
//   m = 2   over Q: the 2-adic square-class bit, then one tame log per odd
//           support prime; over F_p(t): one tame log per support place
//   m >= 3  over Q: the all-entries-negative bit; over F_p(t): nothing
// The group is Z^(gens) modulo the kernel of the coordinate map.
class TruncatedKGroup {
public:
    static std::shared_ptr<const TruncatedKGroup> get(const Support& s, int m,
                                                      const Caps& caps = default_caps());

    const Support& support() const { return support_; }
    int weight() const { return m_; }
    int gen_count() const { return gen_count_; }

    std::vector<int> gen_tuple(int k) const;
    int tuple_index(const std::vector<int>& digits) const;

    int coord_rows() const { return (int)moduli_.size(); }
    const std::vector<mpz_class>& moduli() const { return moduli_; } // 0 = free
    const IntMatrix& coord_matrix() const { return coords_; }        // rows x gens

    // invariant coordinates of a length-m symbol, reduced mod moduli;
    // entries need not be supported units
    std::vector<mpz_class> normal_form(const std::vector<UnitVector>& sym) const;
    // coordinates of a generator combination, reduced mod moduli
    std::vector<mpz_class> normal_form_coords(const SparseVec& x) const;
    bool is_zero(const SparseVec& x) const;

    // multilinear expansion of a symbol of supported units into generators
    SparseVec symbol_coords(const std::vector<UnitVector>& sym) const;

    // prepend a supported unit, landing in the weight-(m+1) generator set
    SparseVec multiply_unit(const UnitVector& u, const SparseVec& x) const;

    const IntMatrix& relations() const; // columns span the coordinate kernel
    const FgAbGroup& group() const;

private:
    TruncatedKGroup(Support s, int m, const Caps& caps);

    Support support_;
    int m_;
    int gen_count_;
    Caps caps_;
    std::vector<mpz_class> moduli_;
    IntMatrix coords_;

    mutable std::once_flag rel_once_;
    mutable std::unique_ptr<IntMatrix> rel_;
    mutable std::unique_ptr<FgAbGroup> group_;
};

} // namespace bnh
