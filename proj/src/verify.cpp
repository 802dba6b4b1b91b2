#include "bnh/verify.hpp"

#include "bnh/barcycles.hpp"
#include "bnh/rng.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace bnh {
namespace {

const FieldRef kQ{FieldTag::Q, 0};

mpq_class random_rational(Rng& rng, long height) {
    while (true) {
        long num = rng.range(-height, height);
        long den = rng.range(1, height);
        if (num == 0) continue;
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

// union support of already factored units, wide enough for random inputs
Support union_support(const std::vector<const UnitVector*>& us, const Caps& caps) {
    std::set<Place> places;
    for (const UnitVector* u : us)
        for (const auto& [pl, e] : u->exps)
            if (e != 0) places.insert(pl);
    return Support::make(kQ, std::vector<Place>(places.begin(), places.end()), caps);
}

bool all_zero(const std::vector<mpz_class>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

VerifySummary suite_steinberg(long count, uint64_t seed, const Caps& caps) {
    VerifySummary out{"steinberg", true, 0, 0, ""};
    Rng rng(seed);
    Caps wide = caps;
    wide.max_support = 40; // random inputs spread over many small primes
    for (long it = 0; it < count; ++it) {
        mpq_class a = random_rational(rng, 1000);
        while (a == 1) a = random_rational(rng, 1000);
        mpq_class b = random_rational(rng, 1000);
        try {
            UnitVector ua = factor_element(FieldElem::rational(a), wide);
            UnitVector uma = factor_element(FieldElem::rational(1 - a), wide);
            UnitVector una = factor_element(FieldElem::rational(-a), wide);
            UnitVector ub = factor_element(FieldElem::rational(b), wide);
            Support s = union_support({&ua, &uma, &una, &ub}, wide);
            auto k2 = TruncatedKGroup::get(s, 2, wide);
            if (!all_zero(k2->normal_form({ua, uma}))) {
                out.pass = false;
                out.detail = "{a, 1-a} survives at a = " + q_str(a);
                break;
            }
            if (!all_zero(k2->normal_form({ua, una}))) {
                out.pass = false;
                out.detail = "{a, -a} survives at a = " + q_str(a);
                break;
            }
            std::vector<mpz_class> ab = k2->normal_form({ua, ub});
            std::vector<mpz_class> ba = k2->normal_form({ub, ua});
            const auto& mods = k2->moduli();
            for (size_t r = 0; r < mods.size(); ++r) {
                mpz_class sum = ab[r] + ba[r];
                if (mods[r] != 0) sum %= mods[r];
                if (sum != 0) {
                    out.pass = false;
                    out.detail = "swap fails to negate at a = " + q_str(a) + ", b = " + q_str(b);
                    break;
                }
            }
            if (!out.pass) break;
            ++out.checked;
        } catch (const std::domain_error&) {
            ++out.skipped;
        }
    }
    return out;
}

VerifySummary suite_product_formula(long count, uint64_t seed, const Caps& caps) {
    VerifySummary out{"product-formula", true, 0, 0, ""};
    Rng rng(seed);
    Caps wide = caps;
    wide.max_support = 40;
    for (long it = 0; it < count; ++it) {
        mpq_class a = random_rational(rng, 1000);
        mpq_class b = random_rational(rng, 1000);
        try {
            UnitVector ua = factor_element(FieldElem::rational(a), wide);
            UnitVector ub = factor_element(FieldElem::rational(b), wide);
            std::set<Place> odd;
            for (const auto& [pl, e] : ua.exps)
                if (pl.kind() == Place::Kind::OddPrime && e != 0) odd.insert(pl);
            for (const auto& [pl, e] : ub.exps)
                if (pl.kind() == Place::Kind::OddPrime && e != 0) odd.insert(pl);
            int prod = real_symbol(a, b) * hilbert_dyadic(a, b);
            for (const Place& pl : odd)
                prod *= (tame_symbol(pl, ua, ub, wide) % 2 != 0) ? -1 : 1;
            if (prod != 1) {
                out.pass = false;
                out.detail = "local symbols multiply to -1 at a = " + q_str(a) + ", b = " + q_str(b);
                break;
            }
            ++out.checked;
        } catch (const std::domain_error&) {
            ++out.skipped;
        }
    }
    return out;
}

VerifySummary suite_dd_zero(long count, uint64_t seed, const Caps& caps) {
    VerifySummary out{"dd-zero", true, 0, 0, ""};
    Rng rng(seed);
    struct Case {
        FieldRef field;
        std::vector<std::string> items;
        int n;
    };
    const std::vector<Case> cases = {
        {kQ, {"-1", "2", "3"}, 4},
        {{FieldTag::Fpt, 3}, {"t", "t+1"}, 4},
    };
    for (const Case& cs : cases) {
        Support s = Support::parse(cs.field, cs.items, caps);
        BnBuildOptions opt;
        opt.caps = caps;
        auto cx = SymbolComplex::build(s, cs.n, opt);
        for (int i = 2; i <= cs.n && out.pass; ++i) {
            for (int g = 0; g < cx->gens(); ++g) {
                SparseVec y = cx->apply_differential(i - 1, cx->apply_differential(i, {{g, 1}}));
                if (!cx->is_zero_at(i - 2, y)) {
                    out.pass = false;
                    std::ostringstream os;
                    os << "composite survives on generator " << g << " at position " << i
                       << " over " << s.str();
                    out.detail = os.str();
                    break;
                }
                ++out.checked;
            }
            for (long r = 0; r < count && out.pass; ++r) {
                SparseVec x;
                int nnz = 1 + (int)rng.below(8);
                for (int k = 0; k < nnz; ++k)
                    x[(int)rng.below((uint64_t)cx->gens())] = rng.nonzero(9);
                SparseVec y = cx->apply_differential(i - 1, cx->apply_differential(i, x));
                if (!cx->is_zero_at(i - 2, y)) {
                    out.pass = false;
                    out.detail = "composite survives on a random element at position " +
                                 std::to_string(i) + " over " + s.str();
                    break;
                }
                ++out.checked;
            }
        }
        if (!out.pass) break;
    }
    return out;
}

QMatrix random_diag(Rng& rng, int m) {
    std::vector<mpq_class> d(m);
    for (auto& v : d) {
        v = mpq_class(rng.nonzero(9), rng.range(1, 9));
        v.canonicalize();
    }
    return QMatrix::diagonal(d);
}

QMatrix random_invertible(Rng& rng, int m) {
    std::vector<mpq_class> lo(m * m, 0), up(m * m, 0);
    for (int i = 0; i < m; ++i) {
        lo[i * m + i] = 1;
        up[i * m + i] = 1;
        for (int j = 0; j < i; ++j) lo[i * m + j] = mpq_class(rng.range(-4, 4));
        for (int j = i + 1; j < m; ++j) up[i * m + j] = mpq_class(rng.range(-4, 4));
    }
    return QMatrix::from_rows(m, lo) * QMatrix::from_rows(m, up) * random_diag(rng, m);
}

VerifySummary suite_bar_cycles(long count, uint64_t seed, const Caps&) {
    VerifySummary out{"bar-cycles", true, 0, 0, ""};
    Rng rng(seed);
    for (long it = 0; it < count && out.pass; ++it) {
        int n = 1 + (int)rng.below(5);
        int m = 2 + (int)rng.below(3);
        std::vector<QMatrix> fam;
        for (int k = 0; k < n; ++k) fam.push_back(random_diag(rng, m));
        BarChain<QMatrix> c = c_cycle(fam);
        if (!bar_boundary(c).is_zero()) {
            out.pass = false;
            out.detail = "alternating cycle has a boundary at sample " + std::to_string(it);
            break;
        }
        ++out.checked;

        int deg = 2 + (int)rng.below(4);
        int sz = 2 + (int)rng.below(2);
        BarChain<QMatrix> chain(deg);
        int terms = 1 + (int)rng.below(3);
        for (int t = 0; t < terms; ++t) {
            std::vector<QMatrix> tup;
            for (int k = 0; k < deg; ++k) tup.push_back(random_invertible(rng, sz));
            chain.add(tup, mpq_class(rng.nonzero(5)));
        }
        BarChain<QMatrix> b1 = bar_boundary(chain);
        if (!bar_boundary(b1).is_zero()) {
            out.pass = false;
            out.detail = "double boundary survives at sample " + std::to_string(it);
            break;
        }
        ++out.checked;
    }
    return out;
}

QMatrix random_sunit_diag(Rng& rng, int m) {
    std::vector<mpq_class> d(m);
    const long primes[3] = {2, 3, 5};
    for (auto& v : d) {
        mpq_class x = rng.coin() ? -1 : 1;
        for (long p : primes) {
            long e = rng.range(-3, 3);
            for (long k = 0; k < (e < 0 ? -e : e); ++k)
                x *= (e < 0) ? mpq_class(1, p) : mpq_class(p);
        }
        x.canonicalize();
        v = x;
    }
    return QMatrix::diagonal(d);
}

mpz_class fact(int n) {
    mpz_class f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

VerifySummary suite_exterior(long count, uint64_t seed, const Caps& caps) {
    VerifySummary out{"exterior", true, 0, 0, ""};
    Rng rng(seed);
    for (long it = 0; it < count && out.pass; ++it) {
        int n = 1 + (int)rng.below(4);
        int m = 2 + (int)rng.below(2);
        std::vector<QMatrix> fam;
        for (int k = 0; k < n; ++k) fam.push_back(random_sunit_diag(rng, m));
        BarChain<QMatrix> c = c_cycle(fam);
        BarChain<QMatrix> pure(n);
        pure.add(fam, 1);
        ExteriorClass lhs = exterior_class(c, caps);
        ExteriorClass rhs = exterior_class(pure, caps).scaled(mpq_class(fact(n)));
        if (!(lhs == rhs)) {
            out.pass = false;
            out.detail = "alternating cycle misses the scaled wedge at sample " + std::to_string(it);
            break;
        }
        ++out.checked;

        int deg = 2 + (int)rng.below(3);
        BarChain<QMatrix> chain(deg);
        int terms = 1 + (int)rng.below(3);
        for (int t = 0; t < terms; ++t) {
            std::vector<QMatrix> tup;
            for (int k = 0; k < deg; ++k) tup.push_back(random_sunit_diag(rng, m));
            chain.add(tup, mpq_class(rng.nonzero(5)));
        }
        BarChain<QMatrix> b = bar_boundary(chain);
        if (!exterior_class(b, caps).is_zero()) {
            out.pass = false;
            out.detail = "a boundary has a nonzero exterior class at sample " + std::to_string(it);
            break;
        }
        ++out.checked;
    }
    return out;
}

} // namespace

std::vector<std::string> verify_suite_names() {
    return {"steinberg", "product-formula", "dd-zero", "bar-cycles", "exterior"};
}

VerifySummary run_verify_suite(const std::string& suite, long count, uint64_t seed,
                               const Caps& caps) {
    if (count <= 0) throw std::invalid_argument("count must be positive");
    if (suite == "steinberg") return suite_steinberg(count, seed, caps);
    if (suite == "product-formula") return suite_product_formula(count, seed, caps);
    if (suite == "dd-zero") return suite_dd_zero(count, seed, caps);
    if (suite == "bar-cycles") return suite_bar_cycles(count, seed, caps);
    if (suite == "exterior") return suite_exterior(count, seed, caps);
    throw std::invalid_argument("unknown verify suite: " + suite);
}

} // namespace bnh
