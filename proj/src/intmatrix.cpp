#include "bnh/intmatrix.hpp"

#include <stdexcept>

namespace bnh {

static const mpz_class kZero = 0;

IntMatrix::IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<mpz_class>& d) {
    IntMatrix m((int)d.size(), (int)d.size());
    for (int i = 0; i < (int)d.size(); ++i) m.set(i, i, d[i]);
    return m;
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<mpz_class>>& d) {
    int r = (int)d.size();
    int c = r ? (int)d[0].size() : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if ((int)d[i].size() != c) throw std::invalid_argument("ragged dense matrix");
        for (int j = 0; j < c; ++j) m.set(i, j, d[i][j]);
    }
    return m;
}

void IntMatrix::check(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("matrix index out of range");
}

const mpz_class& IntMatrix::at(int r, int c) const {
    check(r, c);
    auto it = e_.find({r, c});
    return it == e_.end() ? kZero : it->second;
}

void IntMatrix::set(int r, int c, const mpz_class& v) {
    check(r, c);
    if (v == 0)
        e_.erase({r, c});
    else
        e_[{r, c}] = v;
}

void IntMatrix::add_at(int r, int c, const mpz_class& v) {
    check(r, c);
    auto it = e_.find({r, c});
    if (it == e_.end()) {
        if (v != 0) e_.emplace(std::make_pair(r, c), v);
    } else {
        it->second += v;
        if (it->second == 0) e_.erase(it);
    }
}

std::vector<std::vector<mpz_class>> IntMatrix::dense() const {
    std::vector<std::vector<mpz_class>> d(rows_, std::vector<mpz_class>(cols_, kZero));
    for (const auto& [rc, v] : e_) d[rc.first][rc.second] = v;
    return d;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (const auto& [rc, v] : e_) t.set(rc.second, rc.first, v);
    return t;
}

IntMatrix IntMatrix::mul(const IntMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("dimension mismatch in mul");
    // rows of other, indexed once
    std::vector<SparseVec> orow(other.rows_);
    for (const auto& [rc, v] : other.e_) orow[rc.first][rc.second] = v;
    IntMatrix out(rows_, other.cols_);
    std::map<int, SparseVec> acc; // row -> accumulated
    for (const auto& [rc, v] : e_) sv_axpy(acc[rc.first], v, orow[rc.second]);
    for (auto& [r, vec] : acc)
        for (auto& [c, v] : vec)
            if (v != 0) out.e_.emplace(std::make_pair(r, c), v);
    return out;
}

IntMatrix IntMatrix::hcat(const IntMatrix& other) const {
    if (rows_ != other.rows_) throw std::invalid_argument("row mismatch in hcat");
    IntMatrix out(rows_, cols_ + other.cols_);
    out.e_ = e_;
    for (const auto& [rc, v] : other.e_)
        out.e_.emplace(std::make_pair(rc.first, rc.second + cols_), v);
    return out;
}

IntMatrix IntMatrix::vcat(const IntMatrix& other) const {
    if (cols_ != other.cols_) throw std::invalid_argument("col mismatch in vcat");
    IntMatrix out(rows_ + other.rows_, cols_);
    out.e_ = e_;
    for (const auto& [rc, v] : other.e_)
        out.e_.emplace(std::make_pair(rc.first + rows_, rc.second), v);
    return out;
}

IntMatrix IntMatrix::columns(const std::vector<int>& which) const {
    std::map<int, std::vector<int>> dest; // source col -> positions in output
    for (int j = 0; j < (int)which.size(); ++j) {
        check(0, which[j]);
        dest[which[j]].push_back(j);
    }
    IntMatrix out(rows_, (int)which.size());
    for (const auto& [rc, v] : e_) {
        auto it = dest.find(rc.second);
        if (it == dest.end()) continue;
        for (int j : it->second) out.e_.emplace(std::make_pair(rc.first, j), v);
    }
    return out;
}

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& x) const {
    if ((int)x.size() != cols_) throw std::invalid_argument("vector length mismatch");
    std::vector<mpz_class> y(rows_, kZero);
    for (const auto& [rc, v] : e_) {
        const mpz_class& xc = x[rc.second];
        if (xc != 0) y[rc.first] += v * xc;
    }
    return y;
}

SparseVec IntMatrix::apply_sparse(const SparseVec& x) const {
    for (const auto& [c, xc] : x) {
        (void)xc;
        if (c < 0 || c >= cols_) throw std::out_of_range("sparse index out of range");
    }
    SparseVec y;
    for (const auto& [rc, v] : e_) {
        auto it = x.find(rc.second);
        if (it == x.end()) continue;
        mpz_class& acc = y[rc.first];
        acc += v * it->second;
        if (acc == 0) y.erase(rc.first);
    }
    return y;
}

void IntMatrix::set_col(int c, const SparseVec& v) {
    check(0, c);
    for (const auto& [i, val] : v) set(i, c, val);
}

SparseVec IntMatrix::col(int c) const {
    check(0, c);
    SparseVec v;
    auto it = e_.lower_bound({0, 0});
    for (; it != e_.end(); ++it)
        if (it->first.second == c) v[it->first.first] = it->second;
    return v;
}

bool IntMatrix::operator==(const IntMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && e_ == other.e_;
}

SparseVec sv_add(const SparseVec& a, const SparseVec& b) {
    SparseVec out = a;
    sv_axpy(out, 1, b);
    return out;
}

SparseVec sv_scale(const mpz_class& c, const SparseVec& a) {
    SparseVec out;
    if (c == 0) return out;
    for (const auto& [i, v] : a) out[i] = c * v;
    return out;
}

void sv_axpy(SparseVec& acc, const mpz_class& c, const SparseVec& a) {
    if (c == 0) return;
    for (const auto& [i, v] : a) {
        auto it = acc.find(i);
        if (it == acc.end()) {
            acc.emplace(i, c * v);
        } else {
            it->second += c * v;
            if (it->second == 0) acc.erase(it);
        }
    }
}

std::vector<mpz_class> sv_dense(const SparseVec& a, int n) {
    std::vector<mpz_class> v(n, kZero);
    for (const auto& [i, x] : a) v.at(i) = x;
    return v;
}

SparseVec sv_from_dense(const std::vector<mpz_class>& v) {
    SparseVec out;
    for (int i = 0; i < (int)v.size(); ++i)
        if (v[i] != 0) out[i] = v[i];
    return out;
}

} // namespace bnh
