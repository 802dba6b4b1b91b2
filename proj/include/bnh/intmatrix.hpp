#pragma once
#include <gmpxx.h>
#include <map>
#include <utility>
#include <vector>

namespace bnh {

using SparseVec = std::map<int, mpz_class>; // index -> nonzero value

// Sparse integer matrix, row-major entry map, no explicit zeros stored.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols);

    static IntMatrix identity(int n);
    static IntMatrix diagonal(const std::vector<mpz_class>& d);
    static IntMatrix from_dense(const std::vector<std::vector<mpz_class>>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t nnz() const { return e_.size(); }

    const mpz_class& at(int r, int c) const;
    void set(int r, int c, const mpz_class& v);
    void add_at(int r, int c, const mpz_class& v);

    const std::map<std::pair<int, int>, mpz_class>& entries() const { return e_; }

    std::vector<std::vector<mpz_class>> dense() const;
    IntMatrix transpose() const;
    IntMatrix mul(const IntMatrix& other) const;
    IntMatrix hcat(const IntMatrix& other) const;
    IntMatrix vcat(const IntMatrix& other) const;
    IntMatrix columns(const std::vector<int>& which) const;

    std::vector<mpz_class> apply(const std::vector<mpz_class>& x) const;
    SparseVec apply_sparse(const SparseVec& x) const;

    void set_col(int c, const SparseVec& v);
    SparseVec col(int c) const;

    bool is_zero() const { return e_.empty(); }
    bool operator==(const IntMatrix& other) const;

private:
    int rows_, cols_;
    std::map<std::pair<int, int>, mpz_class> e_;
    void check(int r, int c) const;
};

SparseVec sv_add(const SparseVec& a, const SparseVec& b);
SparseVec sv_scale(const mpz_class& c, const SparseVec& a);
void sv_axpy(SparseVec& acc, const mpz_class& c, const SparseVec& a);
std::vector<mpz_class> sv_dense(const SparseVec& a, int n);
SparseVec sv_from_dense(const std::vector<mpz_class>& v);

} // namespace bnh
