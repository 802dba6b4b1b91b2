#include "bnh/fgab.hpp"

#include <stdexcept>

namespace bnh {

FgAbGroup::FgAbGroup(int ambient)
    : ambient_(ambient), rel_(ambient, 0), cache_(std::make_shared<Cache>()) {}

FgAbGroup::FgAbGroup(int ambient, IntMatrix relations)
    : ambient_(ambient), rel_(std::move(relations)), cache_(std::make_shared<Cache>()) {
    if (rel_.rows() != ambient_) throw std::invalid_argument("relation matrix row count");
}

void FgAbGroup::ensure_factors() const {
    std::call_once(cache_->factors_once, [this] {
        std::vector<mpz_class> d = snf_divisors(rel_);
        cache_->free_rank = ambient_ - (int)d.size();
        for (const mpz_class& x : d)
            if (x > 1) cache_->factors.push_back(x);
    });
}

const std::vector<mpz_class>& FgAbGroup::invariant_factors() const {
    ensure_factors();
    return cache_->factors;
}

int FgAbGroup::free_rank() const {
    ensure_factors();
    return cache_->free_rank;
}

bool FgAbGroup::is_trivial() const {
    return free_rank() == 0 && invariant_factors().empty();
}

bool FgAbGroup::same_isomorphism_class(const FgAbGroup& other) const {
    return free_rank() == other.free_rank() && invariant_factors() == other.invariant_factors();
}

const LatticeSolver& FgAbGroup::relation_solver() const {
    std::call_once(cache_->solver_once,
                   [this] { cache_->solver = std::make_unique<LatticeSolver>(rel_); });
    return *cache_->solver;
}

bool FgAbGroup::represents_zero(const std::vector<mpz_class>& v) const {
    return relation_solver().contains(v);
}

GroupMorphism::GroupMorphism(FgAbGroup source, FgAbGroup target, IntMatrix matrix, bool validate)
    : src_(std::move(source)), tgt_(std::move(target)), mat_(std::move(matrix)) {
    if (mat_.rows() != tgt_.ambient_rank() || mat_.cols() != src_.ambient_rank())
        throw std::invalid_argument("morphism matrix shape");
    if (validate) this->validate();
}

void GroupMorphism::validate() const {
    const IntMatrix& r = src_.relations();
    for (int j = 0; j < r.cols(); ++j) {
        std::vector<mpz_class> col(src_.ambient_rank(), mpz_class(0));
        for (const auto& [i, v] : r.col(j)) col[i] = v;
        if (!tgt_.represents_zero(mat_.apply(col)))
            throw std::invalid_argument("morphism does not respect relations");
    }
}

std::vector<mpz_class> GroupMorphism::apply(const std::vector<mpz_class>& x) const {
    return mat_.apply(x);
}

IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& aux) {
    IntMatrix k = kernel_basis(m.hcat(aux));
    IntMatrix out(m.cols(), k.cols());
    for (const auto& [rc, v] : k.entries())
        if (rc.first < m.cols()) out.set(rc.first, rc.second, v);
    return out;
}

SubgroupPresentation kernel(const GroupMorphism& f) {
    IntMatrix z = preimage_lattice(f.matrix(), f.target().relations());
    IntMatrix w = preimage_lattice(z, f.source().relations());
    return {FgAbGroup(z.cols(), w), z};
}

SubgroupPresentation image(const GroupMorphism& f) {
    IntMatrix w = preimage_lattice(f.matrix(), f.target().relations());
    return {FgAbGroup(f.source().ambient_rank(), w), f.matrix()};
}

std::optional<std::vector<mpz_class>> element_in_image(const GroupMorphism& f,
                                                       const std::vector<mpz_class>& y) {
    LatticeSolver solver(f.matrix().hcat(f.target().relations()));
    auto sol = solver.solve(y);
    if (!sol) return std::nullopt;
    sol->resize(f.source().ambient_rank());
    return sol;
}

std::vector<mpz_class> TensorProduct::pure(const std::vector<mpz_class>& a,
                                           const std::vector<mpz_class>& b) const {
    if ((int)a.size() != na || (int)b.size() != nb)
        throw std::invalid_argument("tensor factor length");
    std::vector<mpz_class> out((size_t)na * nb, mpz_class(0));
    for (int i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < nb; ++j)
            if (b[j] != 0) out[index(i, j)] = a[i] * b[j];
    }
    return out;
}

TensorProduct tensor(const FgAbGroup& a, const FgAbGroup& b) {
    int na = a.ambient_rank(), nb = b.ambient_rank();
    const IntMatrix& ra = a.relations();
    const IntMatrix& rb = b.relations();
    std::vector<SparseVec> racols(ra.cols()), rbcols(rb.cols());
    for (const auto& [rc, v] : ra.entries()) racols[rc.second][rc.first] = v;
    for (const auto& [rc, v] : rb.entries()) rbcols[rc.second][rc.first] = v;
    IntMatrix rel((int)(na * nb), ra.cols() * nb + na * rb.cols());
    int col = 0;
    for (int j = 0; j < ra.cols(); ++j)
        for (int k = 0; k < nb; ++k, ++col)
            for (const auto& [i, v] : racols[j]) rel.set(i * nb + k, col, v);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < rb.cols(); ++j, ++col)
            for (const auto& [k, v] : rbcols[j]) rel.set(i * nb + k, col, v);
    TensorProduct t;
    t.na = na;
    t.nb = nb;
    t.group = FgAbGroup(na * nb, rel);
    return t;
}

int ExteriorSquare::index(int i, int j) const {
    if (i < 0 || j <= i || j >= n) throw std::out_of_range("wedge index");
    // lex position of (i, j) with i < j
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::vector<mpz_class> ExteriorSquare::wedge(const std::vector<mpz_class>& a,
                                             const std::vector<mpz_class>& b) const {
    if ((int)a.size() != n || (int)b.size() != n) throw std::invalid_argument("wedge length");
    std::vector<mpz_class> out(n * (n - 1) / 2, mpz_class(0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out[index(i, j)] = a[i] * b[j] - a[j] * b[i];
    return out;
}

ExteriorSquare exterior_square(const FgAbGroup& a) {
    int n = a.ambient_rank();
    const IntMatrix& ra = a.relations();
    ExteriorSquare e;
    e.n = n;
    IntMatrix rel(n * (n - 1) / 2, ra.cols() * n);
    int col = 0;
    for (int j = 0; j < ra.cols(); ++j) {
        SparseVec rcol = ra.col(j);
        for (int k = 0; k < n; ++k, ++col) {
            for (const auto& [i, v] : rcol) {
                if (i < k)
                    rel.add_at(e.index(i, k), col, v);
                else if (i > k)
                    rel.add_at(e.index(k, i), col, -v);
            }
        }
    }
    e.group = FgAbGroup(n * (n - 1) / 2, rel);
    return e;
}

FgChainComplex::FgChainComplex(std::vector<FgAbGroup> groups, std::vector<GroupMorphism> maps)
    : groups_(std::move(groups)), maps_(std::move(maps)) {
    if (groups_.empty()) throw std::invalid_argument("empty complex");
    if (maps_.size() + 1 != groups_.size()) throw std::invalid_argument("map count mismatch");
    for (int i = 0; i < (int)maps_.size(); ++i) {
        if (maps_[i].source().ambient_rank() != groups_[i + 1].ambient_rank() ||
            maps_[i].target().ambient_rank() != groups_[i].ambient_rank())
            throw std::invalid_argument("differential endpoints mismatch");
    }
}

bool FgChainComplex::composites_vanish() const {
    for (int i = 0; i + 1 < (int)maps_.size(); ++i) {
        IntMatrix comp = maps_[i].matrix().mul(maps_[i + 1].matrix());
        for (int j = 0; j < comp.cols(); ++j) {
            if (!groups_[i].represents_zero(sv_dense(comp.col(j), comp.rows()))) return false;
        }
    }
    return true;
}

FgAbGroup FgChainComplex::homology_at(int i) const {
    if (i < 0 || i > top_degree()) throw std::out_of_range("homology degree");
    if (!composites_vanish()) throw std::invalid_argument("composites do not vanish");
    int ni = groups_[i].ambient_rank();
    IntMatrix z = IntMatrix::identity(ni);
    if (i >= 1) {
        const GroupMorphism& d = maps_[i - 1];
        z = preimage_lattice(d.matrix(), d.target().relations());
    }
    IntMatrix bounds = groups_[i].relations();
    if (i < top_degree()) bounds = maps_[i].matrix().hcat(bounds);
    IntMatrix k = kernel_basis(z.hcat(bounds));
    IntMatrix w(z.cols(), k.cols());
    for (const auto& [rc, v] : k.entries())
        if (rc.first < z.cols()) w.set(rc.first, rc.second, v);
    return FgAbGroup(z.cols(), w);
}

} // namespace bnh
