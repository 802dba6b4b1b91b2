#include "bnh/bncomplex.hpp"
#include "bnh/rng.hpp"

#include <algorithm>

namespace bnh {

namespace {

std::vector<int> identity_perm(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

std::vector<int> inverse_perm(const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[p[i]] = (int)i;
    return q;
}

} // namespace

SymbolComplex::SymbolComplex(Support s, int n, const BnBuildOptions& opt)
    : support_(std::move(s)), n_(n), caps_(opt.caps) {
    if (n < 1) throw std::invalid_argument("complex weight must be at least 1");
    if (n > caps_.max_n) throw std::domain_error("weight exceeds the configured bound");
    int b = support_.basis_size();
    std::vector<int> pw(n + 1, 1);
    for (int e = 1; e <= n; ++e) pw[e] = pw[e - 1] * b;
    gens_ = pw[n];
    for (int i = 0; i <= n; ++i) kgs_.push_back(TruncatedKGroup::get(support_, n - i, caps_));
    for (int i = 0; i <= n; ++i) {
        std::vector<int> p = identity_perm(gens_);
        if (opt.shuffle_seed != 0) {
            Rng rng(opt.shuffle_seed * 1000003u + (uint64_t)i);
            for (int k = gens_ - 1; k > 0; --k)
                std::swap(p[k], p[(int)rng.below((uint64_t)k + 1)]);
        }
        perm_.push_back(p);
        inv_perm_.push_back(inverse_perm(p));
    }
    lazy_ = std::vector<Lazy>(n + 1);
    for (int i = 1; i <= n; ++i) {
        IntMatrix di(gens_, gens_);
        int nk = pw[n - i]; // kappa span at position i
        for (int g = 0; g < gens_; ++g) {
            int kappa = g % nk, tau = g / nk;
            for (int j = 0; j < i; ++j) {
                int tau_j = (tau / pw[i - 1 - j]) % b;
                // drop slot j from tau, keeping slot order
                int hi = tau / pw[i - j], lo = tau % pw[i - 1 - j];
                int tau_rest = hi * pw[i - 1 - j] + lo;
                int row = tau_rest * (nk * b) + tau_j * nk + kappa;
                di.add_at(perm_[i - 1][row], perm_[i][g], 1);
            }
        }
        d_.push_back(std::move(di));
    }
}

std::shared_ptr<const SymbolComplex> SymbolComplex::build(const Support& s, int n,
                                                          const BnBuildOptions& opt) {
    return std::shared_ptr<const SymbolComplex>(new SymbolComplex(s, n, opt));
}

SparseVec SymbolComplex::to_position(int i, const SparseVec& canonical) const {
    SparseVec out;
    for (const auto& [g, v] : canonical) out[perm_.at(i).at(g)] = v;
    return out;
}

SparseVec SymbolComplex::apply_differential(int i, const SparseVec& x) const {
    return d_.at(i - 1).apply_sparse(x);
}

bool SymbolComplex::torsion_tau(int i, int tau) const {
    int b = support_.basis_size();
    for (int s = 0; s < i; ++s) {
        if (tau % b == 0) return true;
        tau /= b;
    }
    return false;
}

const LatticeSolver& SymbolComplex::torsion_zero_solver(int i) const {
    Lazy& lz = lazy_.at(i);
    std::call_once(lz.tz_once, [&] {
        const TruncatedKGroup& kg = *kgs_.at(i);
        int t = kg.coord_rows();
        IntMatrix wc(t, kg.gen_count());
        mpz_class w(support_.torsion_order());
        for (const auto& [rc, v] : kg.coord_matrix().entries())
            wc.set(rc.first, rc.second, w * v);
        int nmod = 0;
        for (const mpz_class& m : kg.moduli())
            if (m != 0) ++nmod;
        IntMatrix aux(t, nmod);
        int j = 0;
        for (int r = 0; r < t; ++r)
            if (kg.moduli()[r] != 0) aux.set(r, j++, kg.moduli()[r]);
        lz.torsion_zero = std::make_unique<LatticeSolver>(wc.hcat(aux));
    });
    return *lz.torsion_zero;
}

bool SymbolComplex::is_zero_at(int i, const SparseVec& x) const {
    const TruncatedKGroup& kg = *kgs_.at(i);
    int nk = kg.gen_count();
    std::map<int, SparseVec> blocks;
    for (const auto& [stored, v] : x) {
        if (v == 0) continue;
        int g = inv_perm_.at(i).at(stored);
        blocks[g / nk][g % nk] = v;
    }
    for (const auto& [tau, block] : blocks) {
        if (kg.coord_rows() == 0) continue; // trivial symbol group
        std::vector<mpz_class> nf = kg.normal_form_coords(block);
        if (torsion_tau(i, tau)) {
            if (!torsion_zero_solver(i).contains(nf)) return false;
        } else {
            for (const mpz_class& v : nf)
                if (v != 0) return false;
        }
    }
    return true;
}

bool SymbolComplex::dd_vanishes() const {
    for (int i = 2; i <= n_; ++i) {
        IntMatrix comp = d_.at(i - 2).mul(d_.at(i - 1));
        for (int g = 0; g < gens_; ++g)
            if (!is_zero_at(i - 2, comp.col(g))) return false;
    }
    return true;
}

const IntMatrix& SymbolComplex::position_relations(int i) const {
    Lazy& lz = lazy_.at(i);
    std::call_once(lz.rel_once, [&] {
        const TruncatedKGroup& kg = *kgs_.at(i);
        int nk = kg.gen_count();
        const IntMatrix& krel = kg.relations();
        int b = support_.basis_size();
        int ntau = 1;
        for (int s = 0; s < i; ++s) ntau *= b;
        int cols = 0;
        for (int tau = 0; tau < ntau; ++tau)
            cols += krel.cols() + (torsion_tau(i, tau) ? nk : 0);
        IntMatrix rel(gens_, cols);
        mpz_class w(support_.torsion_order());
        int jc = 0;
        for (int tau = 0; tau < ntau; ++tau) {
            for (int j = 0; j < krel.cols(); ++j) {
                for (const auto& [kap, v] : krel.col(j))
                    rel.set(perm_.at(i).at(tau * nk + kap), jc, v);
                ++jc;
            }
            if (torsion_tau(i, tau))
                for (int kap = 0; kap < nk; ++kap)
                    rel.set(perm_.at(i).at(tau * nk + kap), jc++, w);
        }
        lz.rel = std::make_unique<IntMatrix>(std::move(rel));
        lz.group = std::make_unique<FgAbGroup>(gens_, *lz.rel);
    });
    return *lz.rel;
}

const FgAbGroup& SymbolComplex::position_group(int i) const {
    position_relations(i);
    return *lazy_.at(i).group;
}

const SymbolComplex::CoordRows& SymbolComplex::coord_rows(int i) const {
    Lazy& lz = lazy_.at(i);
    std::call_once(lz.coord_once, [&] {
        const TruncatedKGroup& kg = *kgs_.at(i);
        int t = kg.coord_rows(), nk = kg.gen_count();
        int b = support_.basis_size();
        int ntau = 1;
        for (int s = 0; s < i; ++s) ntau *= b;
        auto cr = std::make_unique<CoordRows>();
        cr->rows = IntMatrix(ntau * t, gens_);
        cr->moduli.assign(ntau * t, mpz_class(0));
        if (t == 0) {
            lz.coords = std::move(cr);
            return;
        }
        // quotient presentation of the torsion blocks: rows and moduli of
        // (symbol group) / w (symbol group)
        mpz_class w(support_.torsion_order());
        IntMatrix wc(t, nk);
        for (const auto& [rc, v] : kg.coord_matrix().entries())
            wc.set(rc.first, rc.second, w * v);
        int nmod = 0;
        for (const mpz_class& m : kg.moduli())
            if (m != 0) ++nmod;
        IntMatrix aux(t, nmod);
        int j = 0;
        for (int r = 0; r < t; ++r)
            if (kg.moduli()[r] != 0) aux.set(r, j++, kg.moduli()[r]);
        SnfOptions so;
        so.want_u = true;
        SnfResult sn = smith_normal_form(wc.hcat(aux), so);
        if (sn.rank != t) throw std::logic_error("torsion quotient has unexpected free part");
        IntMatrix twc = sn.u->mul(kg.coord_matrix());
        for (int r = 0; r < t; ++r)
            for (int c = 0; c < nk; ++c) {
                mpz_class v = twc.at(r, c) % sn.divisors[r];
                if (v < 0) v += sn.divisors[r];
                twc.set(r, c, v);
            }
        for (int tau = 0; tau < ntau; ++tau) {
            bool tors = torsion_tau(i, tau);
            const IntMatrix& tpl = tors ? twc : kg.coord_matrix();
            for (const auto& [rc, v] : tpl.entries())
                cr->rows.set(tau * t + rc.first, perm_.at(i).at(tau * nk + rc.second), v);
            for (int r = 0; r < t; ++r)
                cr->moduli[tau * t + r] = tors ? sn.divisors[r] : kg.moduli()[r];
        }
        lz.coords = std::move(cr);
    });
    return *lz.coords;
}

FgAbGroup SymbolComplex::homology_at(int i) const {
    if (i < 1 || i > n_ - 1) throw std::invalid_argument("homology position out of range");
    const CoordRows& cr = coord_rows(i - 1);
    IntMatrix a = cr.rows.mul(d_.at(i - 1));
    std::vector<int> auxrow;
    for (int r = 0; r < a.rows(); ++r)
        if (cr.moduli[r] != 0) auxrow.push_back(r);
    IntMatrix aux(a.rows(), (int)auxrow.size());
    for (size_t j = 0; j < auxrow.size(); ++j) aux.set(auxrow[j], (int)j, cr.moduli[auxrow[j]]);
    SnfOptions so;
    so.want_v = true;
    so.want_vinv = true;
    SnfResult sn = smith_normal_form(a.hcat(aux), so);
    int total = gens_ + (int)auxrow.size();
    int zhat = total - sn.rank;

    const IntMatrix& bnd = d_.at(i);              // boundaries from position i+1
    const IntMatrix& rel = position_relations(i); // plus the position relations
    IntMatrix wmat(zhat, bnd.cols() + rel.cols());
    int jc = 0;
    for (const IntMatrix* src : {&bnd, &rel}) {
        for (int c = 0; c < src->cols(); ++c, ++jc) {
            SparseVec bcol = src->col(c);
            SparseVec full = bcol;
            std::vector<mpz_class> ab = sv_dense(a.apply_sparse(bcol), a.rows());
            for (size_t j = 0; j < auxrow.size(); ++j) {
                int r = auxrow[j];
                if (ab[r] == 0) continue;
                mpz_class q;
                mpz_class rem;
                mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), ab[r].get_mpz_t(),
                            cr.moduli[r].get_mpz_t());
                if (rem != 0) throw std::logic_error("boundary fails the cycle congruence");
                full[gens_ + (int)j] = -q;
            }
            for (int r = 0; r < a.rows(); ++r)
                if (cr.moduli[r] == 0 && ab[r] != 0)
                    throw std::logic_error("boundary misses the free cycle rows");
            SparseVec coeff = sn.vinv->apply_sparse(full);
            for (const auto& [r, v] : coeff) {
                if (v == 0) continue;
                if (r < sn.rank) throw std::logic_error("cycle coordinates have pivot support");
                wmat.set(r - sn.rank, jc, v);
            }
        }
    }
    return FgAbGroup(zhat, wmat);
}

IntMatrix SymbolComplex::cycle_basis(int i) const {
    if (i < 1 || i > n_) throw std::invalid_argument("cycle position out of range");
    const CoordRows& cr = coord_rows(i - 1);
    IntMatrix a = cr.rows.mul(d_.at(i - 1));
    std::vector<int> auxrow;
    for (int r = 0; r < a.rows(); ++r)
        if (cr.moduli[r] != 0) auxrow.push_back(r);
    IntMatrix aux(a.rows(), (int)auxrow.size());
    for (size_t j = 0; j < auxrow.size(); ++j) aux.set(auxrow[j], (int)j, cr.moduli[auxrow[j]]);
    SnfOptions so;
    so.want_v = true;
    SnfResult sn = smith_normal_form(a.hcat(aux), so);
    int total = gens_ + (int)auxrow.size();
    IntMatrix z(gens_, total - sn.rank);
    for (const auto& [rc, v] : sn.v->entries())
        if (rc.first < gens_ && rc.second >= sn.rank) z.set(rc.first, rc.second - sn.rank, v);
    return z;
}

long SymbolComplex::differential_rank(int i) const {
    const CoordRows& cr = coord_rows(i - 1);
    IntMatrix a = cr.rows.mul(d_.at(i - 1));
    std::vector<int> freerow;
    for (int r = 0; r < a.rows(); ++r)
        if (cr.moduli[r] == 0) freerow.push_back(r);
    IntMatrix sub((int)freerow.size(), a.cols());
    std::vector<int> rowpos(a.rows(), -1);
    for (size_t j = 0; j < freerow.size(); ++j) rowpos[freerow[j]] = (int)j;
    for (const auto& [rc, v] : a.entries())
        if (rowpos[rc.first] >= 0) sub.set(rowpos[rc.first], rc.second, v);
    return rank_of(sub);
}

SparseVec SymbolComplex::section(const SparseVec& x_at_0) const {
    SparseVec out;
    for (const auto& [stored, v] : x_at_0)
        out[perm_.at(1).at(inv_perm_.at(0).at(stored))] = v;
    return out;
}

bool SymbolComplex::section_defect_is_boundary(const SparseVec& x_at_1) const {
    if (n_ < 2) throw std::invalid_argument("needs a complex of weight at least 2");
    std::call_once(sect_once_, [&] {
        sect_solver_ =
            std::make_unique<LatticeSolver>(d_.at(1).hcat(position_relations(1)));
    });
    SparseVec defect = section(apply_differential(1, x_at_1));
    sv_axpy(defect, mpz_class(-1), x_at_1);
    return sect_solver_->contains(sv_dense(defect, gens_));
}

FgAbGroup b_group(const Support& s, int n, const BnBuildOptions& opt) {
    if (n < 1) throw std::invalid_argument("weight must be positive");
    if (n == 1) return FgAbGroup(0);
    if (n == 2)
        throw UnsupportedWeight(
            "weight 2 is refused: the answer depends on the indecomposable part "
            "K_3^ind, which this truncation does not carry");
    return SymbolComplex::build(s, n, opt)->homology_at(2);
}

SparseVec theta_chain(const SymbolComplex& cx, const UnitVector& a, const UnitVector& b,
                      const UnitVector& c) {
    if (cx.weight() != 3) throw std::invalid_argument("theta lives in the weight-3 complex");
    auto k2 = cx.k_group(1);
    SparseVec out = k2->multiply_unit(b, k2->symbol_coords({a, c}));
    SparseVec neg = k2->multiply_unit(a, k2->symbol_coords({b, c}));
    sv_axpy(out, mpz_class(-1), neg);
    return cx.to_position(1, out);
}

IntMatrix stabilization_matrix(const SymbolComplex& src, const SymbolComplex& dst, int i) {
    const Support& ss = src.support();
    const Support& ds = dst.support();
    if (!(ss.field() == ds.field())) throw std::invalid_argument("field mismatch");
    if (src.weight() != dst.weight()) throw std::invalid_argument("weight mismatch");
    std::vector<int> digit(ss.basis_size());
    digit[0] = 0;
    for (int j = 1; j < ss.basis_size(); ++j) {
        const Place& pl = ss.places()[j - 1];
        int found = -1;
        for (size_t k = 0; k < ds.places().size(); ++k)
            if (ds.places()[k] == pl) found = (int)k + 1;
        if (found < 0) throw std::invalid_argument("support is not included in the target");
        digit[j] = found;
    }
    int n = src.weight(), bs = ss.basis_size(), bd = ds.basis_size();
    IntMatrix out(dst.gens(), src.gens());
    for (int g = 0; g < src.gens(); ++g) {
        int rest = g, mapped = 0;
        std::vector<int> ds_digits(n);
        for (int k = n - 1; k >= 0; --k) {
            ds_digits[k] = digit[rest % bs];
            rest /= bs;
        }
        for (int k = 0; k < n; ++k) mapped = mapped * bd + ds_digits[k];
        out.set(dst.stored_index(i, mapped), src.stored_index(i, g), 1);
    }
    return out;
}

BnReport bn_report(const Support& s, int n, const BnBuildOptions& opt) {
    BnReport rep;
    rep.field = s.field().str();
    rep.support_items = s.item_strings();
    rep.n = n;
    auto cx = SymbolComplex::build(s, n, opt);
    rep.gens_per_position = cx->gens();
    for (int i = 1; i <= n; ++i) rep.differential_ranks.push_back(cx->differential_rank(i));
    if (n == 1) return rep;
    if (n == 2) {
        rep.refused = true;
        rep.refusal_reason = "needs the indecomposable part K_3^ind";
        return rep;
    }
    FgAbGroup h = cx->homology_at(2);
    rep.free_rank = h.free_rank();
    rep.invariant_factors = h.invariant_factors();
    return rep;
}

} // namespace bnh
