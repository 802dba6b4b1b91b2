#include "bnh/polyfp.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace bnh {

namespace {

long mod_inv(long a, long p) {
    // Fermat; p prime, a != 0 mod p
    long r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

} // namespace

void PolyFp::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyFp::PolyFp(long p, std::vector<long> coeffs) : p_(p), c_(std::move(coeffs)) {
    if (p < 2) throw std::invalid_argument("poly char must be at least 2");
    for (auto& x : c_) {
        x %= p_;
        if (x < 0) x += p_;
    }
    trim();
}

PolyFp PolyFp::operator+(const PolyFp& o) const {
    std::vector<long> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff((int)i) + o.coeff((int)i);
    return PolyFp(p_, std::move(r));
}

PolyFp PolyFp::operator-(const PolyFp& o) const {
    std::vector<long> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff((int)i) - o.coeff((int)i);
    return PolyFp(p_, std::move(r));
}

PolyFp PolyFp::operator-() const {
    std::vector<long> r = c_;
    for (auto& x : r) x = -x;
    return PolyFp(p_, std::move(r));
}

PolyFp PolyFp::operator*(const PolyFp& o) const {
    if (is_zero() || o.is_zero()) return zero(p_);
    std::vector<long> r(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = (r[i + j] + c_[i] * o.c_[j]) % p_;
    }
    return PolyFp(p_, std::move(r));
}

bool PolyFp::operator<(const PolyFp& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    for (int i = degree(); i >= 0; --i)
        if (coeff(i) != o.coeff(i)) return coeff(i) < o.coeff(i);
    return false;
}

std::pair<PolyFp, PolyFp> PolyFp::divmod(const PolyFp& d) const {
    if (d.is_zero()) throw std::invalid_argument("poly division by zero");
    std::vector<long> rem = c_;
    std::vector<long> quot(std::max<int>(0, degree() - d.degree() + 1), 0);
    long inv = mod_inv(d.lc(), p_);
    for (int k = (int)rem.size() - 1; k >= d.degree(); --k) {
        long q = rem[k] * inv % p_;
        if (q == 0) continue;
        quot[k - d.degree()] = q;
        for (int j = 0; j <= d.degree(); ++j) {
            long& slot = rem[k - d.degree() + j];
            slot = (slot - q * d.coeff(j)) % p_;
            if (slot < 0) slot += p_;
        }
    }
    return {PolyFp(p_, std::move(quot)), PolyFp(p_, std::move(rem))};
}

PolyFp PolyFp::monic() const {
    if (is_zero()) return *this;
    long inv = mod_inv(lc(), p_);
    std::vector<long> r = c_;
    for (auto& x : r) x = x * inv % p_;
    return PolyFp(p_, std::move(r));
}

PolyFp PolyFp::derivative() const {
    std::vector<long> r;
    for (int i = 1; i <= degree(); ++i) r.push_back(coeff(i) * (i % p_) % p_);
    return PolyFp(p_, std::move(r));
}

bool PolyFp::divides(const PolyFp& other) const {
    return other.divmod(*this).second.is_zero();
}

uint64_t PolyFp::value() const {
    if (degree() > 8) throw std::invalid_argument("poly too large to encode");
    uint64_t v = 0;
    for (int i = degree(); i >= 0; --i) v = v * (uint64_t)p_ + (uint64_t)coeff(i);
    return v;
}

PolyFp PolyFp::from_value(long p, uint64_t v) {
    std::vector<long> c;
    while (v) {
        c.push_back((long)(v % (uint64_t)p));
        v /= (uint64_t)p;
    }
    return PolyFp(p, std::move(c));
}

std::string PolyFp::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        long ci = coeff(i);
        if (ci == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(ci);
        } else {
            if (ci != 1) out += std::to_string(ci) + "*";
            out += "t";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

PolyFp poly_gcd(PolyFp a, PolyFp b) {
    while (!b.is_zero()) {
        PolyFp r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

void poly_ext_gcd(const PolyFp& a, const PolyFp& b, PolyFp& g, PolyFp& x, PolyFp& y) {
    long p = a.p();
    PolyFp r0 = a, r1 = b;
    PolyFp x0 = PolyFp::constant(p, 1), x1 = PolyFp::zero(p);
    PolyFp y0 = PolyFp::zero(p), y1 = PolyFp::constant(p, 1);
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        PolyFp nx = x0 - q * x1;
        x0 = std::move(x1);
        x1 = std::move(nx);
        PolyFp ny = y0 - q * y1;
        y0 = std::move(y1);
        y1 = std::move(ny);
    }
    // normalize so g is monic
    if (!r0.is_zero() && r0.lc() != 1) {
        long inv = mod_inv(r0.lc(), p);
        PolyFp scale = PolyFp::constant(p, inv);
        r0 = scale * r0;
        x0 = scale * x0;
        y0 = scale * y0;
    }
    g = r0;
    x = x0;
    y = y0;
}

PolyFp poly_powmod_u(PolyFp base, uint64_t e, const PolyFp& mod) {
    PolyFp r = PolyFp::constant(base.p(), 1);
    base = base % mod;
    while (e) {
        if (e & 1) r = r * base % mod;
        base = base * base % mod;
        e >>= 1;
    }
    return r;
}

PolyFp poly_invmod(const PolyFp& a, const PolyFp& mod) {
    PolyFp g, x, y;
    poly_ext_gcd(a % mod, mod, g, x, y);
    if (g.degree() != 0) throw std::invalid_argument("poly not invertible mod given modulus");
    return x % mod;
}

namespace {

// columns of the Frobenius matrix minus identity; nullspace basis over F_p
std::vector<std::vector<long>> berlekamp_nullspace(const PolyFp& f) {
    long p = f.p();
    int d = f.degree();
    PolyFp tp = poly_powmod_u(PolyFp::t(p), (uint64_t)p, f);
    // column j = t^(j p) mod f
    std::vector<std::vector<long>> m(d, std::vector<long>(d, 0));
    PolyFp cur = PolyFp::constant(p, 1);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) m[i][j] = cur.coeff(i);
        m[j][j] = (m[j][j] - 1 % p + p) % p;
        cur = cur * tp % f;
    }
    // row reduce
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < d && row < d; ++col) {
        int pr = -1;
        for (int i = row; i < d; ++i)
            if (m[i][col] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(m[row], m[pr]);
        long inv = mod_inv(m[row][col], p);
        for (int j = 0; j < d; ++j) m[row][j] = m[row][j] * inv % p;
        for (int i = 0; i < d; ++i) {
            if (i == row || m[i][col] == 0) continue;
            long c = m[i][col];
            for (int j = 0; j < d; ++j) m[i][j] = ((m[i][j] - c * m[row][j]) % p + p) % p;
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(d, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<long>> basis;
    for (int freec = 0; freec < d; ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<long> v(d, 0);
        v[freec] = 1;
        for (int r = 0; r < (int)pivot_col.size(); ++r)
            v[pivot_col[r]] = (p - m[r][freec]) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

// f monic squarefree; returns its monic irreducible factors, sorted
std::vector<PolyFp> berlekamp_split(const PolyFp& f) {
    long p = f.p();
    if (f.degree() <= 1) return {f};
    auto basis = berlekamp_nullspace(f);
    size_t want = basis.size();
    std::vector<PolyFp> factors{f};
    for (const auto& vec : basis) {
        if (factors.size() == want) break;
        PolyFp g(p, vec);
        if (g.degree() < 1) continue; // the constant basis vector splits nothing
        std::vector<PolyFp> next;
        for (const PolyFp& u : factors) {
            if (u.degree() <= 1) {
                next.push_back(u);
                continue;
            }
            PolyFp rem = u;
            for (long s = 0; s < p && rem.degree() > 0; ++s) {
                PolyFp piece = poly_gcd(rem, g - PolyFp::constant(p, s));
                if (piece.degree() > 0) {
                    next.push_back(piece);
                    rem = rem / piece;
                }
            }
            if (rem.degree() > 0) next.push_back(rem);
        }
        factors = std::move(next);
    }
    std::sort(factors.begin(), factors.end());
    return factors;
}

PolyFp pth_root(const PolyFp& f) {
    // valid when f' = 0: f is a polynomial in t^p, and c^(1/p) = c in F_p
    long p = f.p();
    std::vector<long> r;
    for (int i = 0; i <= f.degree(); i += (int)p) r.push_back(f.coeff(i));
    return PolyFp(p, std::move(r));
}

void factor_monic(PolyFp f, long mult, std::map<PolyFp, long>& out) {
    while (f.degree() > 0) {
        PolyFp fp = f.derivative();
        if (fp.is_zero()) {
            factor_monic(pth_root(f), mult * f.p(), out);
            return;
        }
        PolyFp b = f / poly_gcd(f, fp); // squarefree, carries every factor of f
        for (const PolyFp& q : berlekamp_split(b)) {
            long e = 0;
            while (q.divides(f)) {
                f = f / q;
                ++e;
            }
            out[q] += e * mult;
        }
        // anything left is a p-th power of the remaining factors
    }
}

} // namespace

bool poly_irreducible(const PolyFp& f) {
    if (f.degree() < 1 || !f.is_monic()) return false;
    if (f.degree() == 1) return true;
    if (f.derivative().is_zero()) return false; // a p-th power
    if (poly_gcd(f, f.derivative()).degree() > 0) return false; // repeated factor
    return berlekamp_nullspace(f).size() == 1;
}

std::map<PolyFp, long> poly_factor(const PolyFp& f, long& unit) {
    if (f.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    unit = f.lc();
    std::map<PolyFp, long> out;
    factor_monic(f.monic(), 1, out);
    return out;
}

PolyFp parse_poly(const std::string& text, long p) {
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
    };
    PolyFp acc = PolyFp::zero(p);
    skip_ws();
    if (i == text.size()) throw std::invalid_argument("empty polynomial");
    bool first = true;
    while (true) {
        skip_ws();
        long sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            break;
        }
        skip_ws();
        bool saw_digit = false;
        long coeff = 0;
        while (i < text.size() && std::isdigit((unsigned char)text[i])) {
            saw_digit = true;
            coeff = coeff * 10 + (text[i] - '0');
            if (coeff > 1'000'000'000) throw std::invalid_argument("coefficient too large");
            ++i;
        }
        skip_ws();
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip_ws();
        }
        long exp = 0;
        if (i < text.size() && text[i] == 't') {
            ++i;
            exp = 1;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip_ws();
                if (i == text.size() || !std::isdigit((unsigned char)text[i]))
                    throw std::invalid_argument("missing exponent");
                exp = 0;
                while (i < text.size() && std::isdigit((unsigned char)text[i])) {
                    exp = exp * 10 + (text[i] - '0');
                    if (exp > 64) throw std::invalid_argument("exponent too large");
                    ++i;
                }
            }
        } else if (!saw_digit) {
            throw std::invalid_argument("expected term in polynomial");
        }
        if (!saw_digit) coeff = 1;
        std::vector<long> c((size_t)exp + 1, 0);
        c[exp] = sign * coeff;
        acc = acc + PolyFp(p, std::move(c));
        first = false;
        skip_ws();
        if (i == text.size()) break;
        if (text[i] != '+' && text[i] != '-')
            throw std::invalid_argument("unexpected character in polynomial");
    }
    skip_ws();
    if (i != text.size()) throw std::invalid_argument("trailing characters in polynomial");
    return acc;
}

} // namespace bnh
