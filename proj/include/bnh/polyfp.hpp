#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bnh {

// univariate polynomial over F_p, p a small prime; coefficients in [0, p)
class PolyFp {
public:
    PolyFp() : p_(0) {}
    PolyFp(long p, std::vector<long> coeffs);
    static PolyFp zero(long p) { return PolyFp(p, {}); }
    static PolyFp constant(long p, long v) { return PolyFp(p, {v}); }
    static PolyFp t(long p) { return PolyFp(p, {0, 1}); }

    long p() const { return p_; }
    int degree() const { return (int)c_.size() - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    long lc() const { return c_.empty() ? 0 : c_.back(); }
    long coeff(int i) const { return i < (int)c_.size() ? c_[i] : 0; }
    const std::vector<long>& coeffs() const { return c_; }
    bool is_monic() const { return lc() == 1; }

    PolyFp operator+(const PolyFp& o) const;
    PolyFp operator-(const PolyFp& o) const;
    PolyFp operator*(const PolyFp& o) const;
    PolyFp operator-() const;
    bool operator==(const PolyFp& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool operator!=(const PolyFp& o) const { return !(*this == o); }
    // degree first, then coefficients from the top; total order per prime
    bool operator<(const PolyFp& o) const;

    std::pair<PolyFp, PolyFp> divmod(const PolyFp& d) const;
    PolyFp operator%(const PolyFp& d) const { return divmod(d).second; }
    PolyFp operator/(const PolyFp& d) const { return divmod(d).first; }
    PolyFp monic() const;
    PolyFp derivative() const;
    bool divides(const PolyFp& other) const;

    // encodes sum c_i p^i; requires degree <= 8 so it fits in 64 bits
    uint64_t value() const;
    static PolyFp from_value(long p, uint64_t v);

    std::string str() const; // canonical text, descending powers

private:
    long p_;
    std::vector<long> c_;
    void trim();
};

PolyFp poly_gcd(PolyFp a, PolyFp b); // monic
// g = gcd(a, b) with x*a + y*b = g
void poly_ext_gcd(const PolyFp& a, const PolyFp& b, PolyFp& g, PolyFp& x, PolyFp& y);
PolyFp poly_powmod_u(PolyFp base, uint64_t e, const PolyFp& mod);
PolyFp poly_invmod(const PolyFp& a, const PolyFp& mod); // throws if not coprime

bool poly_irreducible(const PolyFp& f); // monic, degree >= 1

// monic irreducible factors with multiplicities; f nonzero. The unit
// (leading coefficient) is returned separately.
std::map<PolyFp, long> poly_factor(const PolyFp& f, long& unit);

PolyFp parse_poly(const std::string& text, long p); // throws std::invalid_argument

} // namespace bnh
