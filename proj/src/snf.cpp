#include "bnh/snf.hpp"

#include <set>
#include <stdexcept>

namespace bnh {

namespace {

// y += q * x
void sv_addmul(SparseVec& y, const mpz_class& q, const SparseVec& x) {
    if (q == 0) return;
    for (const auto& [i, v] : x) {
        auto it = y.find(i);
        if (it == y.end()) {
            y.emplace(i, q * v);
        } else {
            it->second += q * v;
            if (it->second == 0) y.erase(it);
        }
    }
}

// y -= q * x
void sv_submul(SparseVec& y, const mpz_class& q, const SparseVec& x) {
    if (q == 0) return;
    for (const auto& [i, v] : x) {
        auto it = y.find(i);
        if (it == y.end()) {
            y.emplace(i, -q * v);
        } else {
            it->second -= q * v;
            if (it->second == 0) y.erase(it);
        }
    }
}

void sv_negate(SparseVec& y) {
    for (auto& [i, v] : y) {
        (void)i;
        v = -v;
    }
}

constexpr size_t kDenseCap = 2'000'000;

// nearest-integer quotient; remainders stay within |b| / 2, which keeps the
// euclid chains short and the accumulated transforms small. The floor
// remainder carries the sign of b, so the correction is always +1.
mpz_class nq(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_class r2 = r * 2;
    if (mpz_cmpabs(r2.get_mpz_t(), b.get_mpz_t()) > 0) q += 1;
    return q;
}

struct Engine {
    int m, n;
    SnfOptions opt;
    std::vector<std::map<int, mpz_class>> arow;
    std::vector<std::set<int>> acol; // col -> rows holding a nonzero
    bool dense = false;
    std::vector<mpz_class> dm; // row-major when dense
    std::vector<SparseVec> tu, tui, tv, tvi; // U rows, U^-1 cols, V cols, V^-1 rows

    Engine(const IntMatrix& a, const SnfOptions& o)
        : m(a.rows()), n(a.cols()), opt(o), arow(m), acol(n) {
        for (const auto& [rc, v] : a.entries()) {
            arow[rc.first].emplace(rc.second, v);
            acol[rc.second].insert(rc.first);
        }
        if (opt.want_u) {
            tu.assign(m, {});
            for (int i = 0; i < m; ++i) tu[i][i] = 1;
        }
        if (opt.want_uinv) {
            tui.assign(m, {});
            for (int i = 0; i < m; ++i) tui[i][i] = 1;
        }
        if (opt.want_v) {
            tv.assign(n, {});
            for (int j = 0; j < n; ++j) tv[j][j] = 1;
        }
        if (opt.want_vinv) {
            tvi.assign(n, {});
            for (int j = 0; j < n; ++j) tvi[j][j] = 1;
        }
    }

    mpz_class& dref(int r, int c) { return dm[(size_t)r * n + c]; }

    const mpz_class* get(int r, int c) const {
        if (dense) {
            const mpz_class& v = dm[(size_t)r * n + c];
            return v == 0 ? nullptr : &v;
        }
        auto it = arow[r].find(c);
        return it == arow[r].end() ? nullptr : &it->second;
    }

    void sp_set(int r, int c, mpz_class v) {
        auto it = arow[r].find(c);
        if (v == 0) {
            if (it != arow[r].end()) {
                arow[r].erase(it);
                acol[c].erase(r);
            }
        } else if (it == arow[r].end()) {
            arow[r].emplace(c, std::move(v));
            acol[c].insert(r);
        } else {
            it->second = std::move(v);
        }
    }

    void densify() {
        dm.assign((size_t)m * n, mpz_class(0));
        for (int r = 0; r < m; ++r)
            for (const auto& [c, v] : arow[r]) dref(r, c) = v;
        arow.clear();
        acol.clear();
        dense = true;
    }

    // row i -= q * row k
    void row_submul(int i, int k, const mpz_class& q) {
        if (q == 0) return;
        if (dense) {
            for (int c = 0; c < n; ++c)
                if (dref(k, c) != 0) dref(i, c) -= q * dref(k, c);
        } else {
            for (const auto& [c, v] : arow[k]) {
                const mpz_class* cur = get(i, c);
                sp_set(i, c, cur ? *cur - q * v : mpz_class(-q * v));
            }
        }
        if (opt.want_u) sv_submul(tu[i], q, tu[k]);
        if (opt.want_uinv) sv_addmul(tui[k], q, tui[i]);
    }

    void row_swap(int i, int k) {
        if (i == k) return;
        if (dense) {
            for (int c = 0; c < n; ++c) std::swap(dref(i, c), dref(k, c));
        } else {
            std::set<int> cols;
            for (const auto& [c, v] : arow[i]) {
                (void)v;
                cols.insert(c);
            }
            for (const auto& [c, v] : arow[k]) {
                (void)v;
                cols.insert(c);
            }
            std::swap(arow[i], arow[k]);
            for (int c : cols) {
                if (arow[i].count(c))
                    acol[c].insert(i);
                else
                    acol[c].erase(i);
                if (arow[k].count(c))
                    acol[c].insert(k);
                else
                    acol[c].erase(k);
            }
        }
        if (opt.want_u) std::swap(tu[i], tu[k]);
        if (opt.want_uinv) std::swap(tui[i], tui[k]);
    }

    void row_negate(int i) {
        if (dense) {
            for (int c = 0; c < n; ++c)
                if (dref(i, c) != 0) dref(i, c) = -dref(i, c);
        } else {
            for (auto& [c, v] : arow[i]) {
                (void)c;
                v = -v;
            }
        }
        if (opt.want_u) sv_negate(tu[i]);
        if (opt.want_uinv) sv_negate(tui[i]);
    }

    // col j -= q * col k
    void col_submul(int j, int k, const mpz_class& q) {
        if (q == 0) return;
        if (dense) {
            for (int r = 0; r < m; ++r)
                if (dref(r, k) != 0) dref(r, j) -= q * dref(r, k);
        } else {
            std::vector<int> rows(acol[k].begin(), acol[k].end());
            for (int r : rows) {
                const mpz_class* kv = get(r, k);
                if (!kv) continue;
                const mpz_class* cur = get(r, j);
                sp_set(r, j, cur ? *cur - q * *kv : mpz_class(-q * *kv));
            }
        }
        if (opt.want_v) sv_submul(tv[j], q, tv[k]);
        if (opt.want_vinv) sv_addmul(tvi[k], q, tvi[j]);
    }

    void col_swap(int j, int k) {
        if (j == k) return;
        if (dense) {
            for (int r = 0; r < m; ++r) std::swap(dref(r, j), dref(r, k));
        } else {
            std::set<int> rows = acol[j];
            rows.insert(acol[k].begin(), acol[k].end());
            for (int r : rows) {
                auto ij = arow[r].find(j);
                auto ik = arow[r].find(k);
                mpz_class vj = ij == arow[r].end() ? mpz_class(0) : ij->second;
                mpz_class vk = ik == arow[r].end() ? mpz_class(0) : ik->second;
                sp_set(r, j, vk);
                sp_set(r, k, vj);
            }
        }
        if (opt.want_v) std::swap(tv[j], tv[k]);
        if (opt.want_vinv) std::swap(tvi[j], tvi[k]);
    }

    void col_negate(int j) {
        if (dense) {
            for (int r = 0; r < m; ++r)
                if (dref(r, j) != 0) dref(r, j) = -dref(r, j);
        } else {
            for (int r : std::vector<int>(acol[j].begin(), acol[j].end())) {
                auto it = arow[r].find(j);
                if (it != arow[r].end()) it->second = -it->second;
            }
        }
        if (opt.want_v) sv_negate(tv[j]);
        if (opt.want_vinv) sv_negate(tvi[j]);
    }

    // smallest |value| in the active region, ties to lowest (row, col)
    bool find_pivot(int k, int& pr, int& pc, size_t& nnz_active) {
        bool found = false;
        mpz_class best;
        nnz_active = 0;
        if (dense) {
            for (int r = k; r < m; ++r)
                for (int c = k; c < n; ++c) {
                    const mpz_class& v = dref(r, c);
                    if (v == 0) continue;
                    ++nnz_active;
                    if (!found || mpz_cmpabs(v.get_mpz_t(), best.get_mpz_t()) < 0) {
                        found = true;
                        best = v;
                        pr = r;
                        pc = c;
                    }
                }
        } else {
            for (int r = k; r < m; ++r)
                for (const auto& [c, v] : arow[r]) {
                    ++nnz_active;
                    if (!found || mpz_cmpabs(v.get_mpz_t(), best.get_mpz_t()) < 0) {
                        found = true;
                        best = v;
                        pr = r;
                        pc = c;
                    }
                }
        }
        return found;
    }

    // first active entry (r, c), r > k, c > k, not divisible by d
    bool find_nondivisible(int k, const mpz_class& d, int& pr, int& pc) {
        if (dense) {
            for (int r = k + 1; r < m; ++r)
                for (int c = k + 1; c < n; ++c)
                    if (dref(r, c) != 0 && !mpz_divisible_p(dref(r, c).get_mpz_t(), d.get_mpz_t())) {
                        pr = r;
                        pc = c;
                        return true;
                    }
        } else {
            for (int r = k + 1; r < m; ++r)
                for (const auto& [c, v] : arow[r])
                    if (!mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t())) {
                        pr = r;
                        pc = c;
                        return true;
                    }
        }
        return false;
    }

    std::vector<mpz_class> run() {
        std::vector<mpz_class> divisors;
        int bound = std::min(m, n);
        for (int k = 0; k < bound; ++k) {
            int pr, pc;
            size_t nnz_active = 0;
            if (!find_pivot(k, pr, pc, nnz_active)) break;
            size_t area = (size_t)(m - k) * (size_t)(n - k);
            if (!dense && area <= kDenseCap && 2 * nnz_active > area) densify();
            row_swap(pr, k);
            col_swap(pc, k);

            for (;;) {
                // Euclid-style clearing of column k then row k
                bool swapped = true;
                while (swapped) {
                    swapped = false;
                    std::vector<int> rows;
                    if (dense) {
                        for (int r = 0; r < m; ++r)
                            if (r != k && dref(r, k) != 0) rows.push_back(r);
                    } else {
                        rows.assign(acol[k].begin(), acol[k].end());
                    }
                    for (int r : rows) {
                        if (r == k) continue;
                        const mpz_class* v = get(r, k);
                        if (!v) continue;
                        mpz_class q = nq(*v, *get(k, k));
                        row_submul(r, k, q);
                        if (get(r, k)) {
                            row_swap(r, k);
                            swapped = true;
                            break;
                        }
                    }
                    if (swapped) continue;
                    std::vector<int> cols;
                    if (dense) {
                        for (int c = 0; c < n; ++c)
                            if (c != k && dref(k, c) != 0) cols.push_back(c);
                    } else {
                        for (const auto& [c, v] : arow[k]) {
                            (void)v;
                            if (c != k) cols.push_back(c);
                        }
                    }
                    for (int c : cols) {
                        const mpz_class* v = get(k, c);
                        if (!v) continue;
                        mpz_class q = nq(*v, *get(k, k));
                        col_submul(c, k, q);
                        if (get(k, c)) {
                            col_swap(c, k);
                            swapped = true;
                            break;
                        }
                    }
                }
                // pivot must divide everything that remains
                mpz_class d = *get(k, k);
                int rr, cc;
                if (!find_nondivisible(k, d, rr, cc)) break;
                row_submul(k, rr, -1);
            }
            if (*get(k, k) < 0) row_negate(k);
            divisors.push_back(*get(k, k));
        }
        return divisors;
    }
};

// Dense elimination for small matrices with growth control: alternating
// row and column Hermite passes that keep the processed region reduced mod
// the pivots, then a divisibility sweep on the diagonal. The naive euclid
// engine can blow intermediate transform entries up to millions of bits on
// dense inputs; reduced passes keep them near the minor bound.
struct DenseSnf {
    int m, n;
    SnfOptions opt;
    std::vector<std::vector<mpz_class>> a;    // m x n
    std::vector<std::vector<mpz_class>> tu;   // rows of U
    std::vector<std::vector<mpz_class>> tui;  // columns of U^-1
    std::vector<std::vector<mpz_class>> tv;   // columns of V
    std::vector<std::vector<mpz_class>> tvi;  // rows of V^-1

    DenseSnf(const IntMatrix& input, const SnfOptions& o)
        : m(input.rows()), n(input.cols()), opt(o),
          a(m, std::vector<mpz_class>(n, mpz_class(0))) {
        for (const auto& [rc, v] : input.entries()) a[rc.first][rc.second] = v;
        auto ident = [](int k) {
            std::vector<std::vector<mpz_class>> e(k, std::vector<mpz_class>(k, mpz_class(0)));
            for (int i = 0; i < k; ++i) e[i][i] = 1;
            return e;
        };
        if (opt.want_u) tu = ident(m);
        if (opt.want_uinv) tui = ident(m);
        if (opt.want_v) tv = ident(n);
        if (opt.want_vinv) tvi = ident(n);
    }

    void row_submul(int i, int k, const mpz_class& q) {
        if (q == 0) return;
        for (int c = 0; c < n; ++c)
            if (a[k][c] != 0) a[i][c] -= q * a[k][c];
        if (opt.want_u)
            for (int c = 0; c < m; ++c)
                if (tu[k][c] != 0) tu[i][c] -= q * tu[k][c];
        if (opt.want_uinv)
            for (int r = 0; r < m; ++r)
                if (tui[i][r] != 0) tui[k][r] += q * tui[i][r];
    }

    void row_swap(int i, int k) {
        if (i == k) return;
        std::swap(a[i], a[k]);
        if (opt.want_u) std::swap(tu[i], tu[k]);
        if (opt.want_uinv) std::swap(tui[i], tui[k]);
    }

    void row_neg(int i) {
        for (auto& x : a[i]) x = -x;
        if (opt.want_u)
            for (auto& x : tu[i]) x = -x;
        if (opt.want_uinv)
            for (auto& x : tui[i]) x = -x;
    }

    void col_submul(int j, int k, const mpz_class& q) {
        if (q == 0) return;
        for (int r = 0; r < m; ++r)
            if (a[r][k] != 0) a[r][j] -= q * a[r][k];
        if (opt.want_v)
            for (int r = 0; r < n; ++r)
                if (tv[k][r] != 0) tv[j][r] -= q * tv[k][r];
        if (opt.want_vinv)
            for (int c = 0; c < n; ++c)
                if (tvi[j][c] != 0) tvi[k][c] += q * tvi[j][c];
    }

    void col_swap(int j, int k) {
        if (j == k) return;
        for (int r = 0; r < m; ++r) std::swap(a[r][j], a[r][k]);
        if (opt.want_v) std::swap(tv[j], tv[k]);
        if (opt.want_vinv) std::swap(tvi[j], tvi[k]);
    }

    void col_neg(int j) {
        for (int r = 0; r < m; ++r) a[r][j] = -a[r][j];
        if (opt.want_v)
            for (auto& x : tv[j]) x = -x;
        if (opt.want_vinv)
            for (auto& x : tvi[j]) x = -x;
    }

    void row_hnf() {
        int t = 0;
        for (int j = 0; j < n && t < m; ++j) {
            for (;;) {
                int best = -1;
                for (int i = t; i < m; ++i)
                    if (a[i][j] != 0 &&
                        (best < 0 || mpz_cmpabs(a[i][j].get_mpz_t(), a[best][j].get_mpz_t()) < 0))
                        best = i;
                if (best < 0) break;
                row_swap(best, t);
                bool clean = true;
                for (int i = t + 1; i < m; ++i)
                    if (a[i][j] != 0) {
                        row_submul(i, t, nq(a[i][j], a[t][j]));
                        if (a[i][j] != 0) clean = false;
                    }
                if (clean) break;
            }
            if (a[t][j] == 0) continue;
            if (a[t][j] < 0) row_neg(t);
            for (int i = 0; i < t; ++i)
                if (a[i][j] != 0) {
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), a[i][j].get_mpz_t(), a[t][j].get_mpz_t());
                    row_submul(i, t, q);
                }
            ++t;
        }
    }

    void col_hnf() {
        int t = 0;
        for (int i = 0; i < m && t < n; ++i) {
            for (;;) {
                int best = -1;
                for (int j = t; j < n; ++j)
                    if (a[i][j] != 0 &&
                        (best < 0 || mpz_cmpabs(a[i][j].get_mpz_t(), a[i][best].get_mpz_t()) < 0))
                        best = j;
                if (best < 0) break;
                col_swap(best, t);
                bool clean = true;
                for (int j = t + 1; j < n; ++j)
                    if (a[i][j] != 0) {
                        col_submul(j, t, nq(a[i][j], a[i][t]));
                        if (a[i][j] != 0) clean = false;
                    }
                if (clean) break;
            }
            if (a[i][t] == 0) continue;
            if (a[i][t] < 0) col_neg(t);
            for (int j = 0; j < t; ++j)
                if (a[i][j] != 0) {
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), a[i][j].get_mpz_t(), a[i][t].get_mpz_t());
                    col_submul(j, t, q);
                }
            ++t;
        }
    }

    bool diag_like() const {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && a[i][j] != 0) return false;
        return true;
    }

    // gather the nonzero diagonal into the leading block; returns its size
    int compact() {
        int bound = std::min(m, n);
        int k = 0;
        for (int d = 0; d < bound; ++d)
            if (a[d][d] != 0) {
                row_swap(d, k);
                col_swap(d, k);
                ++k;
            }
        return k;
    }

    // diag(x, y) -> diag(gcd, lcm) via tracked operations
    void chain_fix(int i, int j) {
        col_submul(i, j, -1);
        while (a[j][i] != 0) {
            row_submul(i, j, nq(a[i][i], a[j][i]));
            row_swap(i, j);
        }
        if (a[i][i] < 0) row_neg(i);
        if (a[i][j] != 0) col_submul(j, i, a[i][j] / a[i][i]);
        if (a[j][j] < 0) row_neg(j);
    }

    bool run(std::vector<mpz_class>& divisors) {
        for (int pass = 0; pass < 64 && !diag_like(); ++pass) {
            row_hnf();
            if (diag_like()) break;
            col_hnf();
        }
        if (!diag_like()) return false;
        int r = compact();
        for (int k = 0; k < r; ++k)
            if (a[k][k] < 0) row_neg(k);
        for (bool changed = true; changed;) {
            changed = false;
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j)
                    if (!mpz_divisible_p(a[j][j].get_mpz_t(), a[i][i].get_mpz_t())) {
                        chain_fix(i, j);
                        changed = true;
                    }
        }
        for (int k = 0; k < r; ++k) divisors.push_back(a[k][k]);
        return true;
    }
};

IntMatrix dense_rows_to_matrix(const std::vector<std::vector<mpz_class>>& rows) {
    IntMatrix out((int)rows.size(), (int)rows.size());
    for (int r = 0; r < (int)rows.size(); ++r)
        for (int c = 0; c < (int)rows.size(); ++c)
            if (rows[r][c] != 0) out.set(r, c, rows[r][c]);
    return out;
}

IntMatrix dense_cols_to_matrix(const std::vector<std::vector<mpz_class>>& cols) {
    IntMatrix out((int)cols.size(), (int)cols.size());
    for (int c = 0; c < (int)cols.size(); ++c)
        for (int r = 0; r < (int)cols.size(); ++r)
            if (cols[c][r] != 0) out.set(r, c, cols[c][r]);
    return out;
}

IntMatrix rows_to_matrix(const std::vector<SparseVec>& rows, int cols) {
    IntMatrix out((int)rows.size(), cols);
    for (int r = 0; r < (int)rows.size(); ++r)
        for (const auto& [c, v] : rows[r]) out.set(r, c, v);
    return out;
}

IntMatrix cols_to_matrix(const std::vector<SparseVec>& cols, int rows) {
    IntMatrix out(rows, (int)cols.size());
    for (int c = 0; c < (int)cols.size(); ++c)
        for (const auto& [r, v] : cols[c]) out.set(r, c, v);
    return out;
}

} // namespace

SnfResult smith_normal_form(const IntMatrix& m, const SnfOptions& opt) {
    SnfResult res;
    res.d = IntMatrix(m.rows(), m.cols());
    bool small_dense = m.rows() <= 64 && m.cols() <= 64 &&
                       4 * m.entries().size() >= (size_t)m.rows() * m.cols();
    if (small_dense) {
        DenseSnf ds(m, opt);
        if (ds.run(res.divisors)) {
            res.rank = (int)res.divisors.size();
            for (int i = 0; i < res.rank; ++i) res.d.set(i, i, res.divisors[i]);
            if (opt.want_u) res.u = dense_rows_to_matrix(ds.tu);
            if (opt.want_uinv) res.uinv = dense_cols_to_matrix(ds.tui);
            if (opt.want_v) res.v = dense_cols_to_matrix(ds.tv);
            if (opt.want_vinv) res.vinv = dense_rows_to_matrix(ds.tvi);
            return res;
        }
        res.divisors.clear();
    }
    Engine eng(m, opt);
    res.divisors = eng.run();
    res.rank = (int)res.divisors.size();
    for (int i = 0; i < res.rank; ++i) res.d.set(i, i, res.divisors[i]);
    if (opt.want_u) res.u = rows_to_matrix(eng.tu, m.rows());
    if (opt.want_uinv) res.uinv = cols_to_matrix(eng.tui, m.rows());
    if (opt.want_v) res.v = cols_to_matrix(eng.tv, m.cols());
    if (opt.want_vinv) res.vinv = rows_to_matrix(eng.tvi, m.cols());
    return res;
}

std::vector<mpz_class> snf_divisors(const IntMatrix& m) {
    return smith_normal_form(m, {}).divisors;
}

int rank_of(const IntMatrix& m) {
    return (int)snf_divisors(m).size();
}

IntMatrix kernel_basis(const IntMatrix& m) {
    SnfOptions opt;
    opt.want_v = true;
    SnfResult s = smith_normal_form(m, opt);
    IntMatrix out(m.cols(), m.cols() - s.rank);
    for (const auto& [rc, v] : s.v->entries())
        if (rc.second >= s.rank) out.set(rc.first, rc.second - s.rank, v);
    return out;
}

LatticeSolver::LatticeSolver(const IntMatrix& m) : rows_(m.rows()), cols_(m.cols()) {
    SnfOptions opt;
    opt.want_u = true;
    opt.want_v = true;
    s_ = smith_normal_form(m, opt);
    vcols_.assign(cols_, {});
    for (const auto& [rc, v] : s_.v->entries())
        if (rc.second < s_.rank) vcols_[rc.second][rc.first] = v;
}

std::optional<std::vector<mpz_class>> LatticeSolver::solve(const std::vector<mpz_class>& b) const {
    if ((int)b.size() != rows_) throw std::invalid_argument("rhs length mismatch");
    std::vector<mpz_class> y = s_.u->apply(b);
    std::vector<mpz_class> x(cols_, mpz_class(0));
    for (int i = 0; i < rows_; ++i) {
        if (i < s_.rank) {
            if (!mpz_divisible_p(y[i].get_mpz_t(), s_.divisors[i].get_mpz_t()))
                return std::nullopt;
        } else if (y[i] != 0) {
            return std::nullopt;
        }
    }
    for (int i = 0; i < s_.rank && i < cols_; ++i) {
        mpz_class q = y[i] / s_.divisors[i];
        if (q == 0) continue;
        for (const auto& [r, v] : vcols_[i]) x[r] += q * v;
    }
    return x;
}

} // namespace bnh
