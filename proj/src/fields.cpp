#include "bnh/fields.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace bnh {

const Caps& default_caps() {
    static Caps caps;
    return caps;
}

std::string FieldRef::str() const {
    if (tag == FieldTag::Q) return "q";
    return "f" + std::to_string(p) + "t";
}

// ---- primality and factoring helpers ----

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

bool mr_witness(uint64_t a, uint64_t d, int s, uint64_t n) {
    uint64_t x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

bool mpz_is_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
    // fixed-base Miller-Rabin, deterministic output
    static const long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    for (long b : bases) {
        mpz_class x;
        mpz_class base(b);
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned long i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// deterministic Brent rho; returns a nontrivial factor or throws
mpz_class rho_factor(const mpz_class& n) {
    for (long c = 1; c <= 24; ++c) {
        mpz_class y = 2, r = 1, q = 1, g = 1, x, ys;
        long budget = 1 << 21;
        while (g == 1 && budget > 0) {
            x = y;
            for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
            mpz_class k = 0;
            while (k < r && g == 1) {
                ys = y;
                long m = 128;
                for (long i = 0; i < m && i < r.get_si() - k.get_si(); ++i) {
                    y = (y * y + c) % n;
                    mpz_class diff = x - y;
                    q = q * (diff < 0 ? -diff : diff) % n;
                }
                g = gcd(q, n);
                k += m;
                budget -= m;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                mpz_class diff = x - ys;
                g = gcd(mpz_class(diff < 0 ? -diff : diff), n);
            }
        }
        if (g != n && g > 1) return g;
    }
    throw std::domain_error("factorization resisted the configured bounds");
}

void factor_mpz_into(mpz_class n, std::map<mpz_class, long>& out, const Caps& caps) {
    if (n < 0) n = -n;
    if (n == 0) throw std::invalid_argument("cannot factor zero");
    if ((int)mpz_sizeinbase(n.get_mpz_t(), 2) > caps.max_input_bits)
        throw std::domain_error("input too large to factor under the configured bounds");
    for (mpz_class d = 2; d * d <= n && d <= caps.trial_division_bound; ++d) {
        while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            ++out[d];
            n /= d;
        }
    }
    if (n == 1) return;
    if (mpz_is_prime(n)) {
        ++out[n];
        return;
    }
    mpz_class g = rho_factor(n);
    factor_mpz_into(g, out, caps);
    factor_mpz_into(n / g, out, caps);
}

long torsion_exponent_q(long sign) { return sign < 0 ? 1 : 0; }

long smallest_generator_mod(long p) {
    if (p == 2) return 1; // trivial unit group
    // p prime; order of candidates checked against the prime factors of p-1
    std::vector<long> pf;
    long m = p - 1;
    for (long d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            pf.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) pf.push_back(m);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long f : pf)
            if (powmod_u64((uint64_t)g, (uint64_t)((p - 1) / f), (uint64_t)p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("no generator found");
}

std::vector<uint64_t> prime_factors_u64(uint64_t m) {
    std::vector<uint64_t> pf;
    for (uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            pf.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) pf.push_back(m);
    return pf;
}

} // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (mr_witness(a, d, s, n)) return false;
    return true;
}

// ---- Place ----

Place Place::real_sign() { return Place(Kind::RealSign, 0, PolyFp()); }
Place Place::dyadic() { return Place(Kind::Dyadic, 2, PolyFp()); }

Place Place::odd_prime(long p) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64((uint64_t)p))
        throw std::invalid_argument("odd prime place requires an odd prime");
    return Place(Kind::OddPrime, p, PolyFp());
}

Place Place::irreducible(PolyFp f) {
    if (!poly_irreducible(f)) throw std::invalid_argument("place polynomial must be monic irreducible");
    long p = f.p();
    return Place(Kind::MonicIrreducible, p, std::move(f));
}

uint64_t Place::residue_order() const {
    switch (kind_) {
    case Kind::Dyadic: return 2;
    case Kind::OddPrime: return (uint64_t)prime_;
    case Kind::MonicIrreducible: {
        uint64_t q = 1;
        for (int i = 0; i < poly_.degree(); ++i) q *= (uint64_t)prime_;
        return q;
    }
    default: throw std::invalid_argument("real place has no residue field");
    }
}

bool Place::operator==(const Place& o) const {
    return kind_ == o.kind_ && prime_ == o.prime_ && poly_ == o.poly_;
}

bool Place::operator<(const Place& o) const {
    if (kind_ != o.kind_) return (int)kind_ < (int)o.kind_;
    if (kind_ == Kind::OddPrime) return prime_ < o.prime_;
    if (kind_ == Kind::MonicIrreducible) {
        if (prime_ != o.prime_) return prime_ < o.prime_;
        return poly_ < o.poly_;
    }
    return false;
}

std::string Place::str() const {
    switch (kind_) {
    case Kind::RealSign: return "real";
    case Kind::Dyadic: return "2";
    case Kind::OddPrime: return std::to_string(prime_);
    default: return poly_.str();
    }
}

// ---- FieldElem ----

FieldElem FieldElem::rational(mpq_class v) {
    FieldElem e;
    e.tag_ = FieldTag::Q;
    v.canonicalize();
    e.q_ = std::move(v);
    return e;
}

FieldElem FieldElem::function(PolyFp num, PolyFp den) {
    if (num.p() != den.p()) throw std::invalid_argument("characteristic mismatch");
    if (den.is_zero()) throw std::invalid_argument("zero denominator");
    long p = num.p();
    PolyFp g = poly_gcd(num, den);
    if (g.degree() > 0) {
        num = num / g;
        den = den / g;
    }
    // make the denominator monic, folding its unit into the numerator
    long inv = 1;
    {
        long lc = den.lc(), e = p - 2, b = lc, r = 1;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        inv = r;
    }
    FieldElem e;
    e.tag_ = FieldTag::Fpt;
    e.num_ = PolyFp::constant(p, inv) * num;
    e.den_ = den.monic();
    return e;
}

const mpq_class& FieldElem::rat() const {
    if (tag_ != FieldTag::Q) throw std::logic_error("not a rational");
    return q_;
}

const PolyFp& FieldElem::num() const {
    if (tag_ != FieldTag::Fpt) throw std::logic_error("not a function field element");
    return num_;
}

const PolyFp& FieldElem::den() const {
    if (tag_ != FieldTag::Fpt) throw std::logic_error("not a function field element");
    return den_;
}

bool FieldElem::is_zero() const { return tag_ == FieldTag::Q ? q_ == 0 : num_.is_zero(); }

bool FieldElem::is_one() const {
    return tag_ == FieldTag::Q ? q_ == 1 : (num_ == den_);
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    if (tag_ != o.tag_) throw std::invalid_argument("field mismatch");
    if (tag_ == FieldTag::Q) return rational(q_ + o.q_);
    return function(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

FieldElem FieldElem::operator-(const FieldElem& o) const { return *this + (-o); }

FieldElem FieldElem::operator-() const {
    if (tag_ == FieldTag::Q) return rational(-q_);
    FieldElem e = *this;
    e.num_ = -e.num_;
    return e;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    if (tag_ != o.tag_) throw std::invalid_argument("field mismatch");
    if (tag_ == FieldTag::Q) return rational(q_ * o.q_);
    return function(num_ * o.num_, den_ * o.den_);
}

FieldElem FieldElem::operator/(const FieldElem& o) const { return *this * o.inverse(); }

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw std::invalid_argument("inverse of zero");
    if (tag_ == FieldTag::Q) return rational(1 / q_);
    return function(den_, num_);
}

bool FieldElem::operator==(const FieldElem& o) const {
    if (tag_ != o.tag_) return false;
    if (tag_ == FieldTag::Q) return q_ == o.q_;
    return num_ == o.num_ && den_ == o.den_;
}

bool FieldElem::operator<(const FieldElem& o) const {
    if (tag_ != o.tag_) return (int)tag_ < (int)o.tag_;
    if (tag_ == FieldTag::Q) return q_ < o.q_;
    if (num_ != o.num_) return num_ < o.num_;
    return den_ < o.den_;
}

std::string FieldElem::str() const {
    if (tag_ == FieldTag::Q) return q_.get_str();
    std::string suffix = "@p=" + std::to_string(num_.p());
    if (den_.degree() == 0) return num_.str() + suffix;
    return "(" + num_.str() + ")/(" + den_.str() + ")" + suffix;
}

FieldElem parse_field_elem(const std::string& text, const FieldRef& field) {
    std::string body = text;
    // trim
    auto strip = [](std::string s) {
        size_t a = s.find_first_not_of(" \t");
        if (a == std::string::npos) return std::string();
        size_t b = s.find_last_not_of(" \t");
        return s.substr(a, b - a + 1);
    };
    body = strip(body);
    if (field.tag == FieldTag::Q) {
        std::string compact;
        for (char ch : body)
            if (ch != ' ' && ch != '\t') compact += ch;
        if (!compact.empty() && compact[0] == '+') compact.erase(0, 1);
        body = compact;
        if (body.empty()) throw std::invalid_argument("empty rational");
        if (body.find("@") != std::string::npos)
            throw std::invalid_argument("unexpected field annotation on a rational");
        mpq_class v;
        if (mpq_set_str(v.get_mpq_t(), body.c_str(), 10) != 0)
            throw std::invalid_argument("bad rational: " + body);
        if (mpz_sgn(mpq_denref(v.get_mpq_t())) == 0)
            throw std::invalid_argument("zero denominator: " + body);
        v.canonicalize();
        return FieldElem::rational(v);
    }
    long p = field.p;
    size_t at = body.rfind("@p=");
    if (at != std::string::npos) {
        long pv = 0;
        try {
            pv = std::stol(body.substr(at + 3));
        } catch (...) {
            throw std::invalid_argument("bad characteristic annotation: " + body);
        }
        if (p != 0 && pv != p) throw std::invalid_argument("characteristic mismatch in " + body);
        p = pv;
        body = strip(body.substr(0, at));
    }
    if (p == 0) throw std::invalid_argument("characteristic not specified for " + body);
    // top-level '/'
    int depth = 0;
    size_t slash = std::string::npos;
    for (size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '(') ++depth;
        else if (body[i] == ')') --depth;
        else if (body[i] == '/' && depth == 0) {
            if (slash != std::string::npos) throw std::invalid_argument("multiple '/' in " + text);
            slash = i;
        }
    }
    auto deparen = [&strip](std::string s) {
        s = strip(s);
        while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
            int d = 0;
            bool wraps = true;
            for (size_t i = 0; i + 1 < s.size(); ++i) {
                if (s[i] == '(') ++d;
                else if (s[i] == ')') --d;
                if (d == 0) {
                    wraps = false;
                    break;
                }
            }
            if (!wraps) break;
            s = strip(s.substr(1, s.size() - 2));
        }
        return s;
    };
    PolyFp num, den;
    if (slash == std::string::npos) {
        num = parse_poly(deparen(body), p);
        den = PolyFp::constant(p, 1);
    } else {
        num = parse_poly(deparen(body.substr(0, slash)), p);
        den = parse_poly(deparen(body.substr(slash + 1)), p);
        if (den.is_zero()) throw std::invalid_argument("zero denominator: " + text);
    }
    return FieldElem::function(num, den);
}

// ---- UnitVector ----

long UnitVector::exp_at(const Place& pl) const {
    auto it = exps.find(pl);
    return it == exps.end() ? 0 : it->second;
}

UnitVector UnitVector::operator*(const UnitVector& o) const {
    if (!(field == o.field)) throw std::invalid_argument("field mismatch");
    UnitVector r{field, torsion, exps};
    if (field.tag == FieldTag::Q)
        r.torsion = torsion * o.torsion;
    else
        r.torsion = torsion * o.torsion % field.p;
    for (const auto& [pl, e] : o.exps) {
        long& slot = r.exps[pl];
        slot += e;
        if (slot == 0) r.exps.erase(pl);
    }
    return r;
}

UnitVector UnitVector::inverse() const {
    UnitVector r{field, torsion, {}};
    if (field.tag == FieldTag::Fpt) {
        long p = field.p, e = p - 2, b = torsion % p, acc = 1;
        while (e) {
            if (e & 1) acc = acc * b % p;
            b = b * b % p;
            e >>= 1;
        }
        r.torsion = acc;
    }
    for (const auto& [pl, e] : exps) r.exps[pl] = -e;
    return r;
}

UnitVector UnitVector::pow(long e) const {
    UnitVector base = e < 0 ? inverse() : *this;
    long k = e < 0 ? -e : e;
    UnitVector r = one(field);
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

bool UnitVector::operator==(const UnitVector& o) const {
    return field == o.field && torsion == o.torsion && exps == o.exps;
}

bool UnitVector::operator<(const UnitVector& o) const {
    if (torsion != o.torsion) return torsion < o.torsion;
    return exps < o.exps;
}

FieldElem UnitVector::value() const {
    if (field.tag == FieldTag::Q) {
        mpq_class v(torsion);
        for (const auto& [pl, e] : exps) {
            mpz_class base(pl.prime());
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), (unsigned long)(e < 0 ? -e : e));
            if (e >= 0)
                v *= mpq_class(pw);
            else
                v /= mpq_class(pw);
        }
        v.canonicalize();
        return FieldElem::rational(v);
    }
    long p = field.p;
    PolyFp num = PolyFp::constant(p, torsion), den = PolyFp::constant(p, 1);
    for (const auto& [pl, e] : exps) {
        for (long i = 0; i < (e < 0 ? -e : e); ++i) {
            if (e > 0)
                num = num * pl.poly();
            else
                den = den * pl.poly();
        }
    }
    return FieldElem::function(num, den);
}

std::string UnitVector::str() const {
    std::ostringstream os;
    os << (field.tag == FieldTag::Q ? (torsion < 0 ? "-1" : "+1") : std::to_string(torsion));
    for (const auto& [pl, e] : exps) os << " * " << pl.str() << "^" << e;
    return os.str();
}

UnitVector factor_element(const FieldElem& x, const Caps& caps) {
    if (x.is_zero()) throw std::invalid_argument("cannot factor zero");
    UnitVector u{x.field(), 1, {}};
    if (x.tag() == FieldTag::Q) {
        const mpq_class& v = x.rat();
        u.torsion = sgn(v) < 0 ? -1 : 1;
        std::map<mpz_class, long> fac;
        std::map<mpz_class, long> dfac;
        factor_mpz_into(mpz_class(v.get_num()), fac, caps);
        factor_mpz_into(mpz_class(v.get_den()), dfac, caps);
        for (const auto& [q, e] : dfac) fac[q] -= e;
        for (const auto& [q, e] : fac) {
            if (e == 0) continue;
            if (!mpz_fits_slong_p(q.get_mpz_t()))
                throw std::domain_error("prime factor exceeds place bounds");
            long qp = mpz_get_si(q.get_mpz_t());
            u.exps[qp == 2 ? Place::dyadic() : Place::odd_prime(qp)] = e;
        }
        return u;
    }
    long p = x.char_p();
    long unit_n = 1, unit_d = 1;
    std::map<PolyFp, long> fn = poly_factor(x.num(), unit_n);
    std::map<PolyFp, long> fd = poly_factor(x.den(), unit_d);
    for (const auto& [q, e] : fd) fn[q] -= e;
    long inv_d = 1;
    {
        long e = p - 2, b = unit_d, r = 1;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        inv_d = r;
    }
    u.torsion = unit_n * inv_d % p;
    for (const auto& [q, e] : fn) {
        if (e == 0) continue;
        u.exps[Place::irreducible(q)] = e;
    }
    return u;
}

// ---- ResidueField ----

namespace {

uint64_t encode_q_residue(const mpq_class& x, long p) {
    mpz_class num(x.get_num()), den(x.get_den());
    mpz_class pz(p);
    if (mpz_divisible_p(num.get_mpz_t(), pz.get_mpz_t()) ||
        mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t()))
        throw std::invalid_argument("element is not a unit at the place");
    mpz_class nm = num % pz, dm = den % pz, dinv, r;
    if (nm < 0) nm += pz;
    if (dm < 0) dm += pz;
    mpz_invert(dinv.get_mpz_t(), dm.get_mpz_t(), pz.get_mpz_t());
    r = nm * dinv % pz;
    return mpz_get_ui(r.get_mpz_t());
}

} // namespace

long ResidueField::log_of(uint64_t encoded) const {
    if (encoded >= dlog.size() || dlog[encoded] < 0)
        throw std::invalid_argument("element is not a unit in the residue field");
    return dlog[encoded];
}

uint64_t ResidueField::encode(const FieldElem& x) const {
    if (x.is_zero()) throw std::invalid_argument("zero has no residue class");
    if (place.kind() == Place::Kind::MonicIrreducible) {
        const PolyFp& pi = place.poly();
        PolyFp n = x.num() % pi, d = x.den() % pi;
        if (n.is_zero() || d.is_zero())
            throw std::invalid_argument("element is not a unit at the place");
        return (n * poly_invmod(d, pi) % pi).value();
    }
    return encode_q_residue(x.rat(), place.prime());
}

std::string ResidueField::elem_str(uint64_t encoded) const {
    if (place.kind() == Place::Kind::MonicIrreducible)
        return PolyFp::from_value(char_p, encoded).str();
    return std::to_string(encoded);
}

namespace {

std::shared_ptr<const ResidueField> build_residue_field(const Place& pl, const Caps& caps) {
    if (!pl.is_finite()) throw std::invalid_argument("real place has no residue field");
    uint64_t q = pl.residue_order();
    if (q > caps.max_residue_order)
        throw std::domain_error("residue field order " + std::to_string(q) +
                                " exceeds the configured bound");
    auto rf = std::make_shared<ResidueField>();
    rf->place = pl;
    rf->order = q;
    if (pl.kind() == Place::Kind::MonicIrreducible) {
        rf->char_p = pl.prime();
        rf->degree = pl.poly().degree();
    } else {
        rf->char_p = pl.prime();
        rf->degree = 1;
    }
    rf->dlog.assign(q, -1);
    if (q == 2) {
        rf->generator = 1;
        rf->dlog[1] = 0;
        return rf;
    }
    auto pf = prime_factors_u64(q - 1);
    if (pl.kind() == Place::Kind::MonicIrreducible) {
        const PolyFp& pi = pl.poly();
        long p = pl.prime();
        PolyFp gen;
        for (uint64_t cand = 2;; ++cand) {
            if (cand >= q) throw std::logic_error("generator search exhausted");
            PolyFp g = PolyFp::from_value(p, cand);
            bool ok = true;
            for (uint64_t f : pf) {
                PolyFp pw = poly_powmod_u(g, (q - 1) / f, pi);
                if (pw.degree() == 0 && pw.coeff(0) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                gen = g;
                break;
            }
        }
        rf->generator = gen.value();
        PolyFp cur = PolyFp::constant(p, 1);
        for (uint64_t k = 0; k < q - 1; ++k) {
            rf->dlog[cur.value()] = (int32_t)k;
            cur = cur * gen % pi;
        }
    } else {
        uint64_t p = (uint64_t)pl.prime();
        uint64_t gen = 0;
        for (uint64_t cand = 2; cand < p; ++cand) {
            bool ok = true;
            for (uint64_t f : pf)
                if (powmod_u64(cand, (p - 1) / f, p) == 1) {
                    ok = false;
                    break;
                }
            if (ok) {
                gen = cand;
                break;
            }
        }
        rf->generator = gen;
        uint64_t cur = 1;
        for (uint64_t k = 0; k < q - 1; ++k) {
            rf->dlog[cur] = (int32_t)k;
            cur = mulmod_u64(cur, gen, p);
        }
    }
    return rf;
}

} // namespace

std::shared_ptr<const ResidueField> residue_field(const Place& pl, const Caps& caps) {
    static std::mutex mu;
    static std::map<Place, std::shared_ptr<const ResidueField>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(pl);
        if (it != cache.end()) return it->second;
    }
    auto rf = build_residue_field(pl, caps);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(pl, rf);
    return it->second; // first builder wins on a race
}

long residue_log(const Place& pl, const FieldElem& x, const Caps& caps) {
    auto rf = residue_field(pl, caps);
    return rf->log_of(rf->encode(x));
}

long residue_log(const Place& pl, const UnitVector& x, const Caps& caps) {
    if (x.exp_at(pl) != 0)
        throw std::invalid_argument("unit vector has nonzero valuation at the place");
    auto rf = residue_field(pl, caps);
    uint64_t q = rf->order;
    if (pl.kind() == Place::Kind::MonicIrreducible) {
        const PolyFp& pi = pl.poly();
        long p = pl.prime();
        PolyFp acc = PolyFp::constant(p, x.torsion);
        for (const auto& [qpl, e] : x.exps) {
            PolyFp base = qpl.poly() % pi;
            if (e < 0) base = poly_invmod(base, pi);
            uint64_t ee = (uint64_t)((e < 0 ? -e : e) % (long)(q - 1));
            acc = acc * poly_powmod_u(base, ee, pi) % pi;
        }
        return rf->log_of(acc.value());
    }
    uint64_t p = (uint64_t)pl.prime();
    uint64_t acc = x.torsion < 0 ? p - 1 : 1;
    for (const auto& [qpl, e] : x.exps) {
        uint64_t base = (uint64_t)(qpl.prime() % (long)p);
        if (base == 0) throw std::invalid_argument("unit vector is not a unit at the place");
        if (e < 0) base = powmod_u64(base, p - 2, p);
        acc = mulmod_u64(acc, powmod_u64(base, (uint64_t)((e < 0 ? -e : e) % (long)(p - 1)), p), p);
    }
    return rf->log_of(acc);
}

// ---- archimedean and dyadic symbols ----

int real_symbol(const mpq_class& a, const mpq_class& b) {
    if (a == 0 || b == 0) throw std::invalid_argument("symbol of zero");
    return (a < 0 && b < 0) ? -1 : 1;
}

namespace {

// odd part x/y of a nonzero rational as xy mod 8, plus the 2-adic valuation
void dyadic_split(const mpq_class& a, long& val, long& xy8) {
    bool neg = a < 0;
    mpz_class num = abs(mpz_class(a.get_num())), den(a.get_den()); // canonical den > 0
    unsigned long vn = mpz_scan1(num.get_mpz_t(), 0);
    unsigned long vd = mpz_scan1(den.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), vn);
    mpz_tdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), vd);
    val = (long)vn - (long)vd;
    mpz_class r = num * den % 8;
    xy8 = mpz_get_si(r.get_mpz_t());
    if (neg) xy8 = 8 - xy8;
}

} // namespace

int hilbert_dyadic(const mpq_class& a, const mpq_class& b) {
    if (a == 0 || b == 0) throw std::invalid_argument("symbol of zero");
    long alpha, u8, beta, v8;
    dyadic_split(a, alpha, u8);
    dyadic_split(b, beta, v8);
    long eps_u = (u8 % 4 == 3) ? 1 : 0;
    long eps_v = (v8 % 4 == 3) ? 1 : 0;
    long om_u = (u8 == 3 || u8 == 5) ? 1 : 0;
    long om_v = (v8 == 3 || v8 == 5) ? 1 : 0;
    long e = eps_u * eps_v + alpha * om_v + beta * om_u;
    return (e % 2) ? -1 : 1;
}

// ---- Support ----

Support Support::make(const FieldRef& field, std::vector<Place> finite_places, const Caps& caps) {
    Support s;
    s.field_ = field;
    if (field.tag == FieldTag::Fpt) {
        if (field.p < 2 || field.p > caps.max_p || !is_prime_u64((uint64_t)field.p))
            throw std::invalid_argument("characteristic must be a prime within bounds");
        s.torsion_gen_ = smallest_generator_mod(field.p);
    } else {
        s.torsion_gen_ = -1;
    }
    std::sort(finite_places.begin(), finite_places.end());
    for (size_t i = 0; i < finite_places.size(); ++i) {
        const Place& pl = finite_places[i];
        if (!pl.is_finite()) throw std::invalid_argument("support places must be finite");
        bool poly_place = pl.kind() == Place::Kind::MonicIrreducible;
        if ((field.tag == FieldTag::Fpt) != poly_place)
            throw std::invalid_argument("place does not belong to the field");
        if (poly_place) {
            if (pl.prime() != field.p) throw std::invalid_argument("place characteristic mismatch");
            if (pl.poly().degree() > caps.max_poly_degree)
                throw std::domain_error("place degree exceeds the configured bound");
        }
        if (pl.residue_order() > caps.max_residue_order)
            throw std::domain_error("residue field exceeds the configured bound");
        if (i > 0 && finite_places[i - 1] == pl)
            throw std::invalid_argument("duplicate place in support");
    }
    s.places_ = std::move(finite_places);
    if (s.basis_size() > caps.max_support)
        throw std::domain_error("support size exceeds the configured bound");
    return s;
}

Support Support::parse(const FieldRef& field, const std::vector<std::string>& items,
                       const Caps& caps) {
    std::vector<Place> places;
    for (const std::string& raw : items) {
        std::string item = raw;
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty support item");
        item = item.substr(a, b - a + 1);
        if (field.tag == FieldTag::Q) {
            if (item == "-1") continue; // the sign generator is always present
            long v = 0;
            try {
                v = std::stol(item);
            } catch (...) {
                throw std::invalid_argument("bad support item: " + item);
            }
            if (v < 2 || !is_prime_u64((uint64_t)v))
                throw std::invalid_argument("support item is not prime: " + item);
            places.push_back(v == 2 ? Place::dyadic() : Place::odd_prime(v));
        } else {
            FieldElem e = parse_field_elem(item, field);
            if (e.den().degree() != 0 || !e.den().is_monic())
                throw std::invalid_argument("support item must be a polynomial: " + item);
            PolyFp f = e.num();
            if (!f.is_monic()) throw std::invalid_argument("support item must be monic: " + item);
            places.push_back(Place::irreducible(f));
        }
    }
    return make(field, std::move(places), caps);
}

bool Support::contains(const Place& pl) const {
    return std::binary_search(places_.begin(), places_.end(), pl);
}

UnitVector Support::basis_unit(int i) const {
    if (i < 0 || i >= basis_size()) throw std::out_of_range("basis index");
    UnitVector u = UnitVector::one(field_);
    if (i == 0) {
        u.torsion = torsion_gen_ < 0 ? -1 : torsion_gen_;
        return u;
    }
    u.exps[places_[i - 1]] = 1;
    return u;
}

long Support::torsion_generator() const { return torsion_gen_; }

std::vector<long> Support::coords(const UnitVector& u) const {
    if (!(u.field == field_)) throw std::invalid_argument("field mismatch");
    std::vector<long> c(basis_size(), 0);
    if (field_.tag == FieldTag::Q) {
        c[0] = torsion_exponent_q(u.torsion);
    } else {
        long p = field_.p, g = torsion_gen_, cur = 1;
        long target = ((u.torsion % p) + p) % p;
        long k = 0;
        for (; k < p - 1; ++k) {
            if (cur == target) break;
            cur = cur * g % p;
        }
        if (k == p - 1) throw std::invalid_argument("torsion part is not a unit");
        c[0] = k;
    }
    for (const auto& [pl, e] : u.exps) {
        auto it = std::lower_bound(places_.begin(), places_.end(), pl);
        if (it == places_.end() || !(*it == pl))
            throw std::invalid_argument("unit vector uses a place outside the support: " + pl.str());
        c[1 + (it - places_.begin())] = e;
    }
    return c;
}

UnitVector Support::from_coords(const std::vector<long>& c) const {
    if ((int)c.size() != basis_size()) throw std::invalid_argument("coordinate length");
    UnitVector u = UnitVector::one(field_);
    long w = torsion_order();
    long t = ((c[0] % w) + w) % w;
    if (field_.tag == FieldTag::Q) {
        u.torsion = t ? -1 : 1;
    } else {
        long p = field_.p, acc = 1, b = torsion_gen_;
        long e = t;
        while (e) {
            if (e & 1) acc = acc * b % p;
            b = b * b % p;
            e >>= 1;
        }
        u.torsion = acc;
    }
    for (size_t i = 1; i < c.size(); ++i)
        if (c[i] != 0) u.exps[places_[i - 1]] = c[i];
    return u;
}

bool Support::operator==(const Support& o) const {
    return field_ == o.field_ && places_ == o.places_;
}

std::vector<std::string> Support::item_strings() const {
    std::vector<std::string> out;
    out.push_back(field_.tag == FieldTag::Q ? "-1" : std::to_string(torsion_gen_));
    for (const Place& pl : places_) out.push_back(pl.str());
    return out;
}

std::string Support::str() const {
    std::string out;
    for (const std::string& s : item_strings()) {
        if (!out.empty()) out += ",";
        out += s;
    }
    return out;
}

} // namespace bnh
