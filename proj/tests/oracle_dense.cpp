#include "oracle_dense.hpp"

#include <cstdlib>
#include <stdexcept>

namespace oracle {

int nrows(const Mat& a) { return (int)a.size(); }
int ncols(const Mat& a) { return a.empty() ? 0 : (int)a[0].size(); }

Mat zeros(int r, int c) { return Mat(r, std::vector<mpz_class>(c, 0)); }

Mat ident(int n) {
    Mat a = zeros(n, n);
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    return a;
}

Mat mul(const Mat& a, const Mat& b) {
    int m = nrows(a), k = ncols(a), n = ncols(b);
    if (k != nrows(b)) throw std::invalid_argument("oracle mul shape");
    Mat c = zeros(m, n);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (int j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

Mat hcat(const Mat& a, const Mat& b) {
    if (nrows(a) != nrows(b)) {
        if (ncols(a) == 0) return b;
        if (ncols(b) == 0) return a;
        throw std::invalid_argument("oracle hcat shape");
    }
    Mat c = a;
    for (int i = 0; i < nrows(a); ++i) c[i].insert(c[i].end(), b[i].begin(), b[i].end());
    return c;
}

bool equal(const Mat& a, const Mat& b) {
    return nrows(a) == nrows(b) && ncols(a) == ncols(b) && a == b;
}

mpz_class det(Mat a) {
    int n = nrows(a);
    if (n != ncols(a)) throw std::invalid_argument("oracle det shape");
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int r = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    r = i;
                    break;
                }
            if (r < 0) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

namespace {

struct Work {
    Mat a, u, v;
    bool track;

    void row_sub(int i, int k, const mpz_class& q) {
        int n = ncols(a);
        for (int j = 0; j < n; ++j) a[i][j] -= q * a[k][j];
        if (track)
            for (int j = 0; j < (int)u[0].size(); ++j) u[i][j] -= q * u[k][j];
    }
    void col_sub(int j, int k, const mpz_class& q) {
        int m = nrows(a);
        for (int i = 0; i < m; ++i) a[i][j] -= q * a[i][k];
        if (track)
            for (int i = 0; i < (int)v.size(); ++i) v[i][j] -= q * v[i][k];
    }
    void row_swap(int i, int k) {
        std::swap(a[i], a[k]);
        if (track) std::swap(u[i], u[k]);
    }
    void col_swap(int j, int k) {
        for (auto& row : a) std::swap(row[j], row[k]);
        if (track)
            for (auto& row : v) std::swap(row[j], row[k]);
    }
    void row_neg(int i) {
        for (auto& x : a[i]) x = -x;
        if (track)
            for (auto& x : u[i]) x = -x;
    }
};

mpz_class tq(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Snf snf_impl(Mat input, bool track) {
    int m = nrows(input), n = ncols(input);
    Work w{std::move(input), track ? ident(m) : Mat{}, track ? ident(n) : Mat{}, track};
    Snf out;
    int bound = std::min(m, n);
    for (int k = 0; k < bound; ++k) {
        // first nonzero entry of the remaining block, scanning row-major
        int pr = -1, pc = -1;
        for (int i = k; i < m && pr < 0; ++i)
            for (int j = k; j < n; ++j)
                if (w.a[i][j] != 0) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr < 0) break;
        w.row_swap(pr, k);
        w.col_swap(pc, k);
        for (;;) {
            bool dirty = true;
            while (dirty) {
                dirty = false;
                for (int i = k + 1; i < m; ++i) {
                    while (w.a[i][k] != 0) {
                        mpz_class q = tq(w.a[i][k], w.a[k][k]);
                        w.row_sub(i, k, q);
                        if (w.a[i][k] != 0) {
                            w.row_swap(i, k);
                            dirty = true;
                        }
                    }
                }
                for (int j = k + 1; j < n; ++j) {
                    while (w.a[k][j] != 0) {
                        mpz_class q = tq(w.a[k][j], w.a[k][k]);
                        w.col_sub(j, k, q);
                        if (w.a[k][j] != 0) {
                            w.col_swap(j, k);
                            dirty = true;
                        }
                    }
                }
                if (!dirty) {
                    for (int i = k + 1; i < m && !dirty; ++i)
                        if (w.a[i][k] != 0) dirty = true;
                }
            }
            int fr = -1;
            for (int i = k + 1; i < m && fr < 0; ++i)
                for (int j = k + 1; j < n; ++j)
                    if (w.a[i][j] != 0 && w.a[i][j] % w.a[k][k] != 0) {
                        fr = i;
                        break;
                    }
            if (fr < 0) break;
            w.row_sub(k, fr, -1);
        }
        if (w.a[k][k] < 0) w.row_neg(k);
        out.div.push_back(w.a[k][k]);
    }
    out.rank = (int)out.div.size();
    out.d = std::move(w.a);
    if (track) {
        out.u = std::move(w.u);
        out.v = std::move(w.v);
    }
    return out;
}

} // namespace

Snf snf(Mat a) { return snf_impl(std::move(a), true); }

std::vector<mpz_class> divisors(const Mat& a) { return snf_impl(a, false).div; }

Mat kernel(const Mat& a) {
    int n = ncols(a);
    if (nrows(a) == 0) return ident(n);
    Snf s = snf(a);
    Mat out = zeros(n, n - s.rank);
    for (int i = 0; i < n; ++i)
        for (int j = s.rank; j < n; ++j) out[i][j - s.rank] = s.v[i][j];
    return out;
}

GroupShape quotient_shape(int ambient, const Mat& rel) {
    GroupShape g;
    std::vector<mpz_class> d = rel.empty() ? std::vector<mpz_class>{} : divisors(rel);
    g.free_rank = ambient - (int)d.size();
    for (const mpz_class& x : d)
        if (x > 1) g.factors.push_back(x);
    return g;
}

GroupShape homology_shape(int n, const Mat& a, const Mat& rprev, const Mat& b, const Mat& ri) {
    Mat k1 = a.empty() ? ident(n) : kernel(hcat(a, rprev));
    Mat z = zeros(n, ncols(k1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < ncols(k1); ++j) z[i][j] = k1[i][j];
    Mat bounds = z;
    if (ncols(b)) bounds = hcat(bounds, b);
    if (ncols(ri)) bounds = hcat(bounds, ri);
    Mat k2 = kernel(bounds);
    Mat wrel = zeros(ncols(z), ncols(k2));
    for (int i = 0; i < ncols(z); ++i)
        for (int j = 0; j < ncols(k2); ++j) wrel[i][j] = k2[i][j];
    return quotient_shape(ncols(z), wrel);
}

} // namespace oracle
