#include "bnh/barcycles.hpp"

namespace bnh {

namespace {

mpq_class dense_det(int n, const std::vector<mpq_class>& e) {
    std::vector<mpq_class> a = e;
    mpq_class det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n && piv < 0; ++r)
            if (a[r * n + c] != 0) piv = r;
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[c * n + j]);
            det = -det;
        }
        det *= a[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            if (a[r * n + c] == 0) continue;
            mpq_class f = a[r * n + c] / a[c * n + c];
            for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

mpq_class rational_power(const mpq_class& a, long e) {
    mpq_class base = e < 0 ? mpq_class(1) / a : a;
    long k = e < 0 ? -e : e;
    mpq_class out(1);
    while (k > 0) {
        if (k & 1) out *= base;
        base *= base;
        k >>= 1;
    }
    return out;
}

mpz_class factorial(int n) {
    mpz_class out(1);
    for (int k = 2; k <= n; ++k) out *= k;
    return out;
}

} // namespace

QMatrix::QMatrix(int n, std::vector<mpq_class> e, mpq_class det)
    : n_(n), e_(std::move(e)), det_(std::move(det)) {}

QMatrix QMatrix::identity(int n) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    std::vector<mpq_class> e(n * n, mpq_class(0));
    for (int i = 0; i < n; ++i) e[i * n + i] = 1;
    return QMatrix(n, std::move(e), 1);
}

QMatrix QMatrix::diagonal(const std::vector<mpq_class>& d) {
    int n = (int)d.size();
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    std::vector<mpq_class> e(n * n, mpq_class(0));
    mpq_class det(1);
    for (int i = 0; i < n; ++i) {
        if (d[i] == 0) throw std::invalid_argument("zero diagonal entry");
        e[i * n + i] = d[i];
        det *= d[i];
    }
    return QMatrix(n, std::move(e), std::move(det));
}

QMatrix QMatrix::from_rows(int n, std::vector<mpq_class> entries) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    if ((int)entries.size() != n * n) throw std::invalid_argument("entry count mismatch");
    mpq_class det = dense_det(n, entries);
    if (det == 0) throw std::invalid_argument("matrix is singular");
    return QMatrix(n, std::move(entries), std::move(det));
}

const mpq_class& QMatrix::at(int r, int c) const {
    if (r < 0 || r >= n_ || c < 0 || c >= n_) throw std::out_of_range("matrix index");
    return e_[r * n_ + c];
}

bool QMatrix::is_diagonal() const {
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c)
            if (r != c && e_[r * n_ + c] != 0) return false;
    return true;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("size mismatch");
    std::vector<mpq_class> e(n_ * n_, mpq_class(0));
    for (int r = 0; r < n_; ++r)
        for (int k = 0; k < n_; ++k) {
            if (e_[r * n_ + k] == 0) continue;
            for (int c = 0; c < n_; ++c) {
                if (o.e_[k * n_ + c] == 0) continue;
                e[r * n_ + c] += e_[r * n_ + k] * o.e_[k * n_ + c];
            }
        }
    return QMatrix(n_, std::move(e), det_ * o.det_);
}

bool QMatrix::operator==(const QMatrix& o) const { return n_ == o.n_ && e_ == o.e_; }

bool QMatrix::operator<(const QMatrix& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    for (size_t i = 0; i < e_.size(); ++i) {
        int c = cmp(e_[i], o.e_[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

TorusElement TorusElement::operator*(const TorusElement& o) const {
    if (rank() != o.rank()) throw std::invalid_argument("rank mismatch");
    TorusElement out;
    out.coords.reserve(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) out.coords.push_back(coords[i] * o.coords[i]);
    return out;
}

bool TorusElement::operator==(const TorusElement& o) const { return coords == o.coords; }

bool TorusElement::operator<(const TorusElement& o) const {
    if (coords.size() != o.coords.size()) return coords.size() < o.coords.size();
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] < o.coords[i]) return true;
        if (o.coords[i] < coords[i]) return false;
    }
    return false;
}

TorusElement torus_scalar(int m, const UnitVector& u) {
    if (m < 1) throw std::invalid_argument("rank must be positive");
    TorusElement out;
    out.coords.assign(m, u);
    return out;
}

TorusElement torus_a_gen(int i, int m, const UnitVector& u) {
    if (i < 1 || i > m) throw std::out_of_range("slot out of range");
    TorusElement out;
    out.coords.assign(m, UnitVector::one(u.field));
    if (i == 1) {
        out.coords[0] = u;
        return out;
    }
    for (int k = 0; k < i - 1; ++k) out.coords[k] = u;
    out.coords[i - 1] = u.pow(-(i - 1));
    return out;
}

QMatrix diag_gen(int i, int n, const mpq_class& a) {
    if (i < 1 || i > n) throw std::out_of_range("slot out of range");
    if (a == 0) throw std::invalid_argument("zero entry");
    std::vector<mpq_class> d(n, mpq_class(1));
    d[i - 1] = a;
    return QMatrix::diagonal(d);
}

QMatrix a_gen(int i, int n, const mpq_class& a) {
    if (i < 1 || i > n) throw std::out_of_range("slot out of range");
    if (a == 0) throw std::invalid_argument("zero entry");
    std::vector<mpq_class> d(n, mpq_class(1));
    if (i == 1) {
        d[0] = a;
    } else {
        for (int k = 0; k < i - 1; ++k) d[k] = a;
        d[i - 1] = rational_power(a, -(i - 1));
    }
    return QMatrix::diagonal(d);
}

BarChain<QMatrix> milnor_cycle(const std::vector<mpq_class>& as) {
    int n = (int)as.size();
    if (n < 1) throw std::invalid_argument("empty entry list");
    std::vector<QMatrix> fam;
    fam.reserve(n);
    for (int i = 1; i <= n; ++i) fam.push_back(a_gen(i, n, as[i - 1]));
    return c_cycle(fam);
}

BarChain<QMatrix> splitting_chain(const std::vector<mpq_class>& as) {
    int n = (int)as.size();
    mpq_class coef(factorial(n - 1));
    coef = mpq_class((n % 2) ? 1 : -1) / coef;
    return milnor_cycle(as).scaled(coef);
}

BarChain<QMatrix> kappa_chain(int n, const std::vector<QTriple>& x) {
    if (n < 3) throw std::invalid_argument("weight must be at least 3");
    mpq_class coef = mpq_class((n % 2) ? 1 : -1) / mpq_class(factorial(n - 2));
    BarChain<QMatrix> out(n);
    for (const QTriple& tr : x) {
        if ((int)tr.c.size() != n - 2) throw std::invalid_argument("symbol length mismatch");
        if (tr.a == 0 || tr.b == 0) throw std::invalid_argument("zero entry");
        if (tr.coeff == 0) continue;
        std::vector<mpq_class> ia(n - 1, mpq_class(1)), ib(n - 1, mpq_class(1));
        std::vector<mpq_class> ta(n - 1, tr.a), tb(n - 1, tr.b);
        ia.back() = tr.a;
        ib.back() = tr.b;
        ta.back() = 1;
        tb.back() = 1;
        std::vector<QMatrix> f1{QMatrix::diagonal(ib), QMatrix::diagonal(ta)};
        std::vector<QMatrix> f2{QMatrix::diagonal(ia), QMatrix::diagonal(tb)};
        for (int i = 1; i <= n - 2; ++i) {
            QMatrix ci = a_gen(i, n - 1, tr.c[i - 1]);
            f1.push_back(ci);
            f2.push_back(ci);
        }
        BarChain<QMatrix> part = c_cycle(f1);
        part += c_cycle(f2);
        out += part.scaled(coef * mpq_class(tr.coeff));
    }
    return out;
}

ChiPrimeData chi_prime_data(const SymbolComplex& cx, const SparseVec& x_at_2) {
    int n = cx.weight();
    if (n < 3) throw std::invalid_argument("weight must be at least 3");
    if (!cx.is_zero_at(1, cx.apply_differential(2, x_at_2)))
        throw std::invalid_argument("input is outside the second-differential kernel");
    ChiPrimeData out;
    out.x = x_at_2;
    const Support& s = cx.support();
    int b = s.basis_size();
    auto kg = cx.k_group(2);
    int nk = kg->gen_count();
    mpq_class coef = mpq_class((n % 2) ? -1 : 1) / mpq_class(factorial(n - 2));
    for (const auto& [stored, v] : x_at_2) {
        if (v == 0) continue;
        int g = cx.canonical_index(2, stored);
        int tau = g / nk, kappa = g % nk;
        UnitVector ua = s.basis_unit(tau / b), ub = s.basis_unit(tau % b);
        std::vector<TorusElement> ca, cb;
        ca.push_back(torus_scalar(n - 2, ua));
        cb.push_back(torus_scalar(n - 2, ub));
        for (int i = 1; i <= n - 2; ++i) {
            TorusElement ci = torus_a_gen(i, n - 2, s.basis_unit(kg->gen_tuple(kappa)[i - 1]));
            ca.push_back(ci);
            cb.push_back(ci);
        }
        mpq_class q = coef * mpq_class(v);
        auto ita = out.u31.try_emplace(ub, BarChain<TorusElement>(n - 1)).first;
        ita->second += c_cycle(ca).scaled(q);
        auto itb = out.u31.try_emplace(ua, BarChain<TorusElement>(n - 1)).first;
        itb->second += c_cycle(cb).scaled(q);
    }
    for (auto it = out.u31.begin(); it != out.u31.end();)
        it = it->second.is_zero() ? out.u31.erase(it) : std::next(it);
    out.certified = true;
    return out;
}

bool ExteriorClass::is_integral() const {
    for (const auto& [t, c] : terms_)
        if (c.get_den() != 1) return false;
    return true;
}

void ExteriorClass::add(std::vector<Label> labels, const mpq_class& c) {
    if ((int)labels.size() != degree_) throw std::invalid_argument("monomial degree mismatch");
    if (c == 0) return;
    int flips = 0;
    for (size_t i = 1; i < labels.size(); ++i)
        for (size_t j = i; j > 0 && labels[j] < labels[j - 1]; --j) {
            std::swap(labels[j], labels[j - 1]);
            ++flips;
        }
    for (size_t i = 1; i < labels.size(); ++i)
        if (labels[i] == labels[i - 1]) return;
    mpq_class v = (flips % 2) ? -c : c;
    auto it = terms_.try_emplace(labels, 0).first;
    it->second += v;
    if (it->second == 0) terms_.erase(it);
}

ExteriorClass& ExteriorClass::operator+=(const ExteriorClass& o) {
    if (o.degree_ != degree_) throw std::invalid_argument("degree mismatch");
    for (const auto& [t, c] : o.terms_) add(t, c);
    return *this;
}

ExteriorClass ExteriorClass::scaled(const mpq_class& c) const {
    ExteriorClass out(degree_);
    if (c == 0) return out;
    for (const auto& [t, v] : terms_) out.terms_.emplace(t, v * c);
    return out;
}

bool ExteriorClass::operator==(const ExteriorClass& o) const {
    return degree_ == o.degree_ && terms_ == o.terms_;
}

namespace {

using FreePart = std::vector<std::pair<ExteriorClass::Label, long>>;

FreePart free_part(const TorusElement& g) {
    FreePart out;
    for (int slot = 0; slot < g.rank(); ++slot)
        for (const auto& [pl, e] : g.coords[slot].exps)
            if (e != 0) out.push_back({{slot, pl}, e});
    return out;
}

void expand_wedge(const std::vector<FreePart>& parts, size_t at,
                  std::vector<ExteriorClass::Label>& labels, const mpq_class& coef,
                  ExteriorClass& acc) {
    if (at == parts.size()) {
        acc.add(labels, coef);
        return;
    }
    for (const auto& [lab, e] : parts[at]) {
        labels.push_back(lab);
        expand_wedge(parts, at + 1, labels, coef * mpq_class(e), acc);
        labels.pop_back();
    }
}

} // namespace

ExteriorClass exterior_class(const BarChain<TorusElement>& c) {
    ExteriorClass out(c.degree());
    for (const auto& [t, v] : c.terms()) {
        std::vector<FreePart> parts;
        parts.reserve(t.size());
        for (const TorusElement& g : t) parts.push_back(free_part(g));
        std::vector<ExteriorClass::Label> labels;
        expand_wedge(parts, 0, labels, v, out);
    }
    return out;
}

ExteriorClass exterior_class(const BarChain<QMatrix>& c, const Caps& caps) {
    BarChain<TorusElement> tc(c.degree());
    for (const auto& [t, v] : c.terms()) {
        std::vector<TorusElement> tt;
        tt.reserve(t.size());
        for (const QMatrix& m : t) {
            if (!m.is_diagonal())
                throw std::invalid_argument("only diagonal matrices project to the torus");
            TorusElement g;
            for (int i = 0; i < m.size(); ++i)
                g.coords.push_back(factor_element(FieldElem::rational(m.at(i, i)), caps));
            tt.push_back(std::move(g));
        }
        tc.add(tt, v);
    }
    return exterior_class(tc);
}

} // namespace bnh
