#include "bnh/milnor.hpp"

#include <set>
#include <stdexcept>

namespace bnh {

long tame_symbol(const Place& pl, const UnitVector& a, const UnitVector& b, const Caps& caps) {
    if (!pl.is_finite()) throw std::invalid_argument("tame symbol needs a finite place");
    long va = a.exp_at(pl), vb = b.exp_at(pl);
    UnitVector t = a.pow(vb) * b.pow(-va);
    if ((va * vb) % 2 != 0) {
        if (t.field.tag == FieldTag::Q)
            t.torsion = -t.torsion;
        else
            t.torsion = (t.field.p - t.torsion) % t.field.p;
    }
    return residue_log(pl, t, caps);
}

bool steinberg_vanishes(const FieldElem& a, const Caps& caps) {
    FieldElem one = a.tag() == FieldTag::Q
                        ? FieldElem::rational(1)
                        : FieldElem::function(PolyFp::constant(a.char_p(), 1),
                                              PolyFp::constant(a.char_p(), 1));
    FieldElem b = one - a;
    if (a.is_zero() || b.is_zero()) throw std::invalid_argument("symbol {a, 1-a} needs a outside {0, 1}");
    UnitVector ua = factor_element(a, caps), ub = factor_element(b, caps);
    if (a.tag() == FieldTag::Q && hilbert_dyadic(a.rat(), b.rat()) != 1) return false;
    std::set<Place> finite;
    for (const auto& [pl, e] : ua.exps) finite.insert(pl);
    for (const auto& [pl, e] : ub.exps) finite.insert(pl);
    for (const Place& pl : finite) {
        if (pl.kind() == Place::Kind::Dyadic) continue; // trivial residue group
        if (tame_symbol(pl, ua, ub, caps) != 0) return false;
    }
    return true;
}

namespace {

int checked_power(int base, int exp) {
    long v = 1;
    for (int i = 0; i < exp; ++i) {
        v *= base;
        if (v > (1 << 20)) throw std::domain_error("generator count exceeds the configured bound");
    }
    return (int)v;
}

} // namespace

TruncatedKGroup::TruncatedKGroup(Support s, int m, const Caps& caps)
    : support_(std::move(s)), m_(m), caps_(caps) {
    if (m < 0) throw std::invalid_argument("negative weight");
    int b = support_.basis_size();
    gen_count_ = checked_power(b, m);
    const bool rational = support_.field().tag == FieldTag::Q;
    if (m == 0) {
        moduli_ = {mpz_class(0)};
        coords_ = IntMatrix(1, 1);
        coords_.set(0, 0, 1);
        return;
    }
    if (m == 1) {
        moduli_.assign(b, mpz_class(0));
        moduli_[0] = support_.torsion_order();
        coords_ = IntMatrix::identity(b);
        return;
    }
    if (m == 2) {
        std::vector<Place> tame_places;
        if (rational) {
            moduli_.push_back(2); // 2-adic square-class bit
            for (const Place& pl : support_.places())
                if (pl.kind() == Place::Kind::OddPrime) tame_places.push_back(pl);
        } else {
            tame_places = support_.places();
        }
        for (const Place& pl : tame_places) moduli_.push_back(mpz_class(pl.residue_order() - 1));
        coords_ = IntMatrix((int)moduli_.size(), gen_count_);
        for (int k = 0; k < gen_count_; ++k) {
            UnitVector u0 = support_.basis_unit(k / b), u1 = support_.basis_unit(k % b);
            int r = 0;
            if (rational) {
                if (hilbert_dyadic(u0.value().rat(), u1.value().rat()) < 0) coords_.set(0, k, 1);
                r = 1;
            }
            for (const Place& pl : tame_places)
                coords_.set(r++, k, tame_symbol(pl, u0, u1, caps_));
        }
        return;
    }
    if (rational) {
        moduli_ = {mpz_class(2)};
        coords_ = IntMatrix(1, gen_count_);
        coords_.set(0, 0, 1); // the all-torsion tuple is the only negative one
    } else {
        coords_ = IntMatrix(0, gen_count_);
    }
}

std::shared_ptr<const TruncatedKGroup> TruncatedKGroup::get(const Support& s, int m,
                                                            const Caps& caps) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const TruncatedKGroup>> cache;
    std::string key = s.field().str() + "#" + s.str() + "#" + std::to_string(m);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::shared_ptr<const TruncatedKGroup> built(new TruncatedKGroup(s, m, caps));
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, built);
    return it->second;
}

std::vector<int> TruncatedKGroup::gen_tuple(int k) const {
    if (k < 0 || k >= gen_count_) throw std::out_of_range("generator index");
    std::vector<int> digits(m_, 0);
    int b = support_.basis_size();
    for (int s = m_ - 1; s >= 0; --s) {
        digits[s] = k % b;
        k /= b;
    }
    return digits;
}

int TruncatedKGroup::tuple_index(const std::vector<int>& digits) const {
    if ((int)digits.size() != m_) throw std::invalid_argument("tuple length");
    int b = support_.basis_size(), k = 0;
    for (int d : digits) {
        if (d < 0 || d >= b) throw std::out_of_range("basis digit");
        k = k * b + d;
    }
    return k;
}

std::vector<mpz_class> TruncatedKGroup::normal_form(const std::vector<UnitVector>& sym) const {
    if ((int)sym.size() != m_) throw std::invalid_argument("symbol length");
    for (const UnitVector& u : sym)
        if (!(u.field == support_.field())) throw std::invalid_argument("field mismatch");
    std::vector<mpz_class> out(moduli_.size(), mpz_class(0));
    const bool rational = support_.field().tag == FieldTag::Q;
    if (m_ == 0) {
        out[0] = 1;
        return out;
    }
    if (m_ == 1) {
        std::vector<long> c = support_.coords(sym[0]);
        for (size_t i = 0; i < c.size(); ++i) out[i] = c[i];
        return out;
    }
    if (m_ == 2) {
        int r = 0;
        if (rational) {
            out[0] = hilbert_dyadic(sym[0].value().rat(), sym[1].value().rat()) < 0 ? 1 : 0;
            r = 1;
        }
        for (const Place& pl : support_.places()) {
            if (rational && pl.kind() != Place::Kind::OddPrime) continue;
            out[r++] = tame_symbol(pl, sym[0], sym[1], caps_);
        }
        return out;
    }
    if (rational) {
        bool allneg = true;
        for (const UnitVector& u : sym) allneg = allneg && u.torsion < 0;
        out[0] = allneg ? 1 : 0;
    }
    return out;
}

std::vector<mpz_class> TruncatedKGroup::normal_form_coords(const SparseVec& x) const {
    std::vector<mpz_class> out(moduli_.size(), mpz_class(0));
    for (const auto& [k, v] : x) {
        if (k < 0 || k >= gen_count_) throw std::out_of_range("generator index");
        for (int r = 0; r < (int)moduli_.size(); ++r) {
            const mpz_class& c = coords_.at(r, k);
            if (c != 0) out[r] += c * v;
        }
    }
    for (size_t r = 0; r < moduli_.size(); ++r)
        if (moduli_[r] != 0) {
            out[r] %= moduli_[r];
            if (out[r] < 0) out[r] += moduli_[r];
        }
    return out;
}

bool TruncatedKGroup::is_zero(const SparseVec& x) const {
    for (const mpz_class& v : normal_form_coords(x))
        if (v != 0) return false;
    return true;
}

SparseVec TruncatedKGroup::symbol_coords(const std::vector<UnitVector>& sym) const {
    if ((int)sym.size() != m_) throw std::invalid_argument("symbol length");
    int b = support_.basis_size();
    SparseVec acc;
    acc[0] = 1;
    for (const UnitVector& u : sym) {
        std::vector<long> c = support_.coords(u);
        SparseVec next;
        for (const auto& [idx, v] : acc)
            for (int j = 0; j < b; ++j)
                if (c[j] != 0) next[idx * b + j] += v * c[j];
        acc = std::move(next);
    }
    // drop zeros introduced by cancellation
    for (auto it = acc.begin(); it != acc.end();)
        it = it->second == 0 ? acc.erase(it) : std::next(it);
    return acc;
}

SparseVec TruncatedKGroup::multiply_unit(const UnitVector& u, const SparseVec& x) const {
    std::vector<long> c = support_.coords(u);
    SparseVec out;
    for (const auto& [k, v] : x) {
        if (k < 0 || k >= gen_count_) throw std::out_of_range("generator index");
        for (size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0) out[(int)j * gen_count_ + k] += c[j] * v;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

const IntMatrix& TruncatedKGroup::relations() const {
    std::call_once(rel_once_, [this] {
        int nmod = 0;
        for (const mpz_class& m : moduli_)
            if (m != 0) ++nmod;
        IntMatrix aux((int)moduli_.size(), nmod);
        int j = 0;
        for (int r = 0; r < (int)moduli_.size(); ++r)
            if (moduli_[r] != 0) aux.set(r, j++, moduli_[r]);
        rel_ = std::make_unique<IntMatrix>(preimage_lattice(coords_, aux));
        group_ = std::make_unique<FgAbGroup>(gen_count_, *rel_);
    });
    return *rel_;
}

const FgAbGroup& TruncatedKGroup::group() const {
    relations();
    return *group_;
}

} // namespace bnh
