#pragma once
#include "bnh/intmatrix.hpp"

#include <optional>
#include <vector>

namespace bnh {

struct SnfOptions {
    bool want_u = false;
    bool want_v = false;
    bool want_uinv = false;
    bool want_vinv = false;
};

// U * M * V = D with U, V unimodular; D diagonal, d_k | d_{k+1}, d_k > 0.
struct SnfResult {
    IntMatrix d;
    std::optional<IntMatrix> u, v, uinv, vinv;
    int rank = 0;
    std::vector<mpz_class> divisors; // d_1..d_rank
};

SnfResult smith_normal_form(const IntMatrix& m, const SnfOptions& opt = {});

// invariant factors only, no transforms
std::vector<mpz_class> snf_divisors(const IntMatrix& m);

int rank_of(const IntMatrix& m);

// columns form a basis of the integer kernel of m (a direct summand of Z^cols)
IntMatrix kernel_basis(const IntMatrix& m);

// solves m x = b over the integers, via cached SNF of m
class LatticeSolver {
public:
    explicit LatticeSolver(const IntMatrix& m);
    std::optional<std::vector<mpz_class>> solve(const std::vector<mpz_class>& b) const;
    bool contains(const std::vector<mpz_class>& b) const { return solve(b).has_value(); }
    int rank() const { return s_.rank; }

private:
    int rows_, cols_;
    SnfResult s_;
    std::vector<SparseVec> vcols_; // first rank columns of V
};

} // namespace bnh
