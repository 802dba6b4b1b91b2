#pragma once
#include "bnh/milnor.hpp"

#include <memory>
#include <mutex>
#include <stdexcept>

namespace bnh {

// weights whose homology needs input this model cannot provide
struct UnsupportedWeight : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BnBuildOptions {
    uint64_t shuffle_seed = 0; // nonzero: permute generator order per position
    Caps caps = default_caps();
};

// Chain complex P_0 <- P_1 <- ... <- P_n for a support S of weight n:
// P_i is the i-fold tensor power of the S-units against the weight-(n-i)
// symbol group, with generators (tau, kappa) for tau over B^i and kappa a
// symbol generator. The differential removes one tensor slot and pushes the
// removed unit into the symbol:
//   d(a_1 x ... x a_i x {b}) = sum_j a_1 x ... a_j^ ... x a_i x {a_j, b}
class SymbolComplex {
public:
    static std::shared_ptr<const SymbolComplex> build(const Support& s, int n,
                                                      const BnBuildOptions& opt = {});

    const Support& support() const { return support_; }
    int weight() const { return n_; }
    int gens() const { return gens_; } // every position has B^n generators
    std::shared_ptr<const TruncatedKGroup> k_group(int i) const { return kgs_.at(i); }

    // canonical (tau, kappa) index -> stored index at position i
    int stored_index(int i, int canonical) const { return perm_.at(i).at(canonical); }
    int canonical_index(int i, int stored) const { return inv_perm_.at(i).at(stored); }
    SparseVec to_position(int i, const SparseVec& canonical) const;

    const IntMatrix& differential(int i) const { return d_.at(i - 1); } // i in 1..n
    SparseVec apply_differential(int i, const SparseVec& x) const;

    // true when the tau block of a canonical generator has a torsion slot
    bool torsion_tau(int i, int tau) const;

    // zero test in P_i without materializing relations
    bool is_zero_at(int i, const SparseVec& x) const;

    bool dd_vanishes() const; // every composite column dies

    const IntMatrix& position_relations(int i) const; // lazy
    const FgAbGroup& position_group(int i) const;     // lazy

    // stacked canonical coordinate rows of P_i with their row moduli (0 = free):
    // x is zero in P_i iff rows * x vanishes mod the moduli
    struct CoordRows {
        IntMatrix rows;
        std::vector<mpz_class> moduli;
    };
    const CoordRows& coord_rows(int i) const; // lazy

    FgAbGroup homology_at(int i) const; // i in 1..n-1

    // columns generate the lattice of x with d_i(x) zero in P_{i-1}; i in 1..n
    IntMatrix cycle_basis(int i) const;

    // rank over Q of the free-row part of the coordinate differential at i
    long differential_rank(int i) const;

    // splitting of d_1 sending a symbol generator to its leading slot;
    // exact on generators, and a retraction of P_1 modulo boundaries
    SparseVec section(const SparseVec& x_at_0) const;
    // s(d_1(x)) - x lies in im(d_2) plus the position relations
    bool section_defect_is_boundary(const SparseVec& x_at_1) const;

private:
    SymbolComplex(Support s, int n, const BnBuildOptions& opt);

    Support support_;
    int n_;
    int gens_;
    Caps caps_;
    std::vector<std::shared_ptr<const TruncatedKGroup>> kgs_; // kgs_[i] = weight n-i
    std::vector<std::vector<int>> perm_, inv_perm_;
    std::vector<IntMatrix> d_;

    struct Lazy {
        std::once_flag rel_once, coord_once, tz_once;
        std::unique_ptr<IntMatrix> rel;
        std::unique_ptr<FgAbGroup> group;
        std::unique_ptr<CoordRows> coords;
        std::unique_ptr<LatticeSolver> torsion_zero; // for the torsion-block zero test
    };
    mutable std::vector<Lazy> lazy_;
    mutable std::once_flag sect_once_;
    mutable std::unique_ptr<LatticeSolver> sect_solver_; // [d_2 | R_1]

    const LatticeSolver& torsion_zero_solver(int i) const;
};

// homology of the complex at position 2; weight 1 is trivial, weight 2 is
// refused because it needs the indecomposable part of K_3
FgAbGroup b_group(const Support& s, int n, const BnBuildOptions& opt = {});

// chain c x (a ^ b) |-> -a x {b, c} + b x {a, c} in P_1 of the weight-3
// complex; always a cycle
SparseVec theta_chain(const SymbolComplex& cx, const UnitVector& a, const UnitVector& b,
                      const UnitVector& c);

// generator relabeling P_i(src) -> P_i(dst) for an inclusion of supports over
// one field; commutes with the differentials and maps relations to relations
IntMatrix stabilization_matrix(const SymbolComplex& src, const SymbolComplex& dst, int i);

struct BnReport {
    std::string field;
    std::vector<std::string> support_items;
    int n = 0;
    int gens_per_position = 0;
    bool refused = false;          // weight 2
    std::string refusal_reason;
    int free_rank = 0;
    std::vector<mpz_class> invariant_factors;
    std::vector<long> differential_ranks; // index i-1 holds rank at i
};

BnReport bn_report(const Support& s, int n, const BnBuildOptions& opt = {});

} // namespace bnh
