#pragma once
#include "bnh/bncomplex.hpp"
#include "bnh/fields.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace bnh {

// dense invertible matrix with exact rational entries
class QMatrix {
public:
    static QMatrix identity(int n);
    static QMatrix diagonal(const std::vector<mpq_class>& d); // entries nonzero
    static QMatrix from_rows(int n, std::vector<mpq_class> entries); // row-major, invertible

    int size() const { return n_; }
    const mpq_class& at(int r, int c) const;
    bool is_diagonal() const;
    const mpq_class& det() const { return det_; } // computed at construction

    QMatrix operator*(const QMatrix& o) const;
    bool operator==(const QMatrix& o) const;
    bool operator<(const QMatrix& o) const; // total order for use as a map key

private:
    QMatrix(int n, std::vector<mpq_class> e, mpq_class det);
    int n_;
    std::vector<mpq_class> e_;
    mpq_class det_;
};

// point of a split torus: one unit per coordinate
struct TorusElement {
    std::vector<UnitVector> coords;

    int rank() const { return (int)coords.size(); }
    TorusElement operator*(const TorusElement& o) const;
    bool operator==(const TorusElement& o) const;
    bool operator<(const TorusElement& o) const;
};

TorusElement torus_scalar(int m, const UnitVector& u); // (u, ..., u), m copies
// torus form of the determinant-one generator family: (u,...,u, u^-(i-1), 1,...)
TorusElement torus_a_gen(int i, int m, const UnitVector& u);

// formal combination of bar tuples [g_1|...|g_k] with exact coefficients
template <typename G>
class BarChain {
public:
    explicit BarChain(int degree) : degree_(degree) {
        if (degree < 0) throw std::invalid_argument("negative bar degree");
    }

    int degree() const { return degree_; }
    const std::map<std::vector<G>, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_integral() const {
        for (const auto& [t, c] : terms_)
            if (c.get_den() != 1) return false;
        return true;
    }

    void add(const std::vector<G>& tuple, const mpq_class& c) {
        if ((int)tuple.size() != degree_) throw std::invalid_argument("tuple degree mismatch");
        if (c == 0) return;
        auto it = terms_.try_emplace(tuple, 0).first;
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }

    BarChain& operator+=(const BarChain& o) {
        if (o.degree_ != degree_) throw std::invalid_argument("degree mismatch");
        for (const auto& [t, c] : o.terms_) add(t, c);
        return *this;
    }

    BarChain scaled(const mpq_class& c) const {
        BarChain out(degree_);
        if (c == 0) return out;
        for (const auto& [t, v] : terms_) out.terms_.emplace(t, v * c);
        return out;
    }

    bool operator==(const BarChain& o) const {
        return degree_ == o.degree_ && terms_ == o.terms_;
    }

private:
    int degree_;
    std::map<std::vector<G>, mpq_class> terms_;
};

template <typename G>
BarChain<G> bar_boundary(const BarChain<G>& x) {
    if (x.degree() < 1) throw std::invalid_argument("degree-zero chain has no boundary");
    int k = x.degree();
    BarChain<G> out(k - 1);
    for (const auto& [t, c] : x.terms()) {
        out.add(std::vector<G>(t.begin() + 1, t.end()), c);
        for (int i = 1; i < k; ++i) {
            std::vector<G> u(t.begin(), t.begin() + i);
            u.back() = t[i - 1] * t[i];
            u.insert(u.end(), t.begin() + i + 1, t.end());
            out.add(u, (i % 2) ? -c : c);
        }
        out.add(std::vector<G>(t.begin(), t.end() - 1), (k % 2) ? -c : c);
    }
    return out;
}

// alternating symmetrization over a commuting family; a cycle of degree n
template <typename G>
BarChain<G> c_cycle(const std::vector<G>& gs) {
    int n = (int)gs.size();
    if (n < 1) throw std::invalid_argument("empty family");
    if (n > 8) throw std::domain_error("cycle degree exceeds the supported bound");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!(gs[i] * gs[j] == gs[j] * gs[i]))
                throw std::invalid_argument("family does not commute");
    BarChain<G> out(n);
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (idx[i] > idx[j]) ++inv;
        std::vector<G> t;
        t.reserve(n);
        for (int i : idx) t.push_back(gs[i]);
        out.add(t, (inv % 2) ? -1 : 1);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

QMatrix diag_gen(int i, int n, const mpq_class& a); // identity with a at slot i (1-based)
// diag(a, I) for i = 1; diag(a,...,a, a^-(i-1), I) for i >= 2; determinant 1 then
QMatrix a_gen(int i, int n, const mpq_class& a);

// the degree-n cycle built from the determinant-one generator family
BarChain<QMatrix> milnor_cycle(const std::vector<mpq_class>& as);
// the same cycle scaled by (-1)^(n-1)/(n-1)!
BarChain<QMatrix> splitting_chain(const std::vector<mpq_class>& as);

// one summand a (x) b (x) {c_1,...,c_{n-2}} of a position-2 chain
struct QTriple {
    mpz_class coeff;
    mpq_class a, b;
    std::vector<mpq_class> c;
};

// degree-n chain on (n-1) x (n-1) diagonal matrices attached to a formal sum
// of triples; coefficient (-1)^(n-1)/(n-2)! per c-cycle pair
BarChain<QMatrix> kappa_chain(int n, const std::vector<QTriple>& x);

// position-1 lift of a second-differential kernel element: formal sum of
// unit (x) torus chain summands plus the kernel certificate
struct ChiPrimeData {
    std::map<UnitVector, BarChain<TorusElement>> u31; // merged by tensor unit
    SparseVec x;                                      // the input, echoed
    bool certified = false; // the second differential of x has zero normal form
};

ChiPrimeData chi_prime_data(const SymbolComplex& cx, const SparseVec& x_at_2);

// element of an exterior power of the free quotient of a torus; wedge
// monomials are labeled by (coordinate slot, place), kept sorted
class ExteriorClass {
public:
    using Label = std::pair<int, Place>;

    explicit ExteriorClass(int degree) : degree_(degree) {
        if (degree < 0) throw std::invalid_argument("negative degree");
    }

    int degree() const { return degree_; }
    const std::map<std::vector<Label>, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_integral() const;

    // sorts the labels, tracks the sign, drops monomials with a repeat
    void add(std::vector<Label> labels, const mpq_class& c);
    ExteriorClass& operator+=(const ExteriorClass& o);
    ExteriorClass scaled(const mpq_class& c) const;
    bool operator==(const ExteriorClass& o) const;

private:
    int degree_;
    std::map<std::vector<Label>, mpq_class> terms_;
};

// [g_1|...|g_n] -> g_1 ^ ... ^ g_n over the free quotient (torsion dropped);
// kills bar boundaries
ExteriorClass exterior_class(const BarChain<TorusElement>& c);
// diagonal rational matrices are projected to the torus first; others rejected
ExteriorClass exterior_class(const BarChain<QMatrix>& c, const Caps& caps = default_caps());

} // namespace bnh
