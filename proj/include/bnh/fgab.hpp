#pragma once
#include "bnh/intmatrix.hpp"
#include "bnh/snf.hpp"

#include <memory>
#include <mutex>
#include <vector>

namespace bnh {

// Z^ambient modulo the column span of a relation matrix.
class FgAbGroup {
public:
    FgAbGroup() : FgAbGroup(0) {}
    explicit FgAbGroup(int ambient);
    FgAbGroup(int ambient, IntMatrix relations);

    int ambient_rank() const { return ambient_; }
    const IntMatrix& relations() const { return rel_; }

    // invariant factors >= 2, in divisibility order; free_rank excludes them
    const std::vector<mpz_class>& invariant_factors() const;
    int free_rank() const;
    bool is_trivial() const;
    bool same_isomorphism_class(const FgAbGroup& other) const;

    // v lies in the relation lattice, i.e. represents zero
    bool represents_zero(const std::vector<mpz_class>& v) const;
    const LatticeSolver& relation_solver() const;

private:
    int ambient_;
    IntMatrix rel_;
    struct Cache {
        std::once_flag factors_once;
        std::vector<mpz_class> factors;
        int free_rank = 0;
        std::once_flag solver_once;
        std::unique_ptr<LatticeSolver> solver;
    };
    std::shared_ptr<Cache> cache_;
    void ensure_factors() const;
};

class GroupMorphism {
public:
    // matrix: target.ambient x source.ambient; if validate, checks that
    // relation columns of the source land in the target relation lattice
    GroupMorphism(FgAbGroup source, FgAbGroup target, IntMatrix matrix, bool validate = true);

    const FgAbGroup& source() const { return src_; }
    const FgAbGroup& target() const { return tgt_; }
    const IntMatrix& matrix() const { return mat_; }

    std::vector<mpz_class> apply(const std::vector<mpz_class>& x) const;
    void validate() const; // throws std::invalid_argument if ill-formed

private:
    FgAbGroup src_, tgt_;
    IntMatrix mat_;
};

struct SubgroupPresentation {
    FgAbGroup group;
    IntMatrix inclusion; // ambient-of-parent x generators-of-subgroup
};

SubgroupPresentation kernel(const GroupMorphism& f);
SubgroupPresentation image(const GroupMorphism& f);

// generators of {x : M x in lattice(aux)}, as columns
IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& aux);

// witness x with f(x) = y in the target group, if any
std::optional<std::vector<mpz_class>> element_in_image(const GroupMorphism& f,
                                                       const std::vector<mpz_class>& y);

struct TensorProduct {
    FgAbGroup group; // ambient = na * nb
    int na = 0, nb = 0;
    int index(int i, int j) const { return i * nb + j; }
    std::vector<mpz_class> pure(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b) const;
};

TensorProduct tensor(const FgAbGroup& a, const FgAbGroup& b);

struct ExteriorSquare {
    FgAbGroup group; // ambient = n*(n-1)/2, basis e_i ^ e_j for i < j in lex order
    int n = 0;
    int index(int i, int j) const;
    std::vector<mpz_class> wedge(const std::vector<mpz_class>& a,
                                 const std::vector<mpz_class>& b) const;
};

ExteriorSquare exterior_square(const FgAbGroup& a);

// chain complex C_0 <- C_1 <- ... <- C_top with d_i = maps[i-1]
class FgChainComplex {
public:
    FgChainComplex(std::vector<FgAbGroup> groups, std::vector<GroupMorphism> maps);

    int top_degree() const { return (int)groups_.size() - 1; }
    const FgAbGroup& group(int i) const { return groups_.at(i); }
    const GroupMorphism& differential(int i) const { return maps_.at(i - 1); }

    bool composites_vanish() const;
    FgAbGroup homology_at(int i) const; // throws if composites fail to vanish

private:
    std::vector<FgAbGroup> groups_;
    std::vector<GroupMorphism> maps_;
};

} // namespace bnh
