#pragma once
#include "bnh/polyfp.hpp"

#include <gmpxx.h>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bnh {

enum class FieldTag { Q, Fpt };

struct FieldRef {
    FieldTag tag = FieldTag::Q;
    long p = 0; // characteristic, 0 for Q
    bool operator==(const FieldRef&) const = default;
    std::string str() const; // "q" or "f<p>t"
};

struct Caps {
    uint64_t max_residue_order = 1'000'000;
    long trial_division_bound = 1'000'000;
    int max_support = 6; // basis size: torsion generator plus finite places
    int max_n = 6;
    int max_poly_degree = 8;
    long max_p = 97;
    int max_input_bits = 512;
};

const Caps& default_caps();

class Place {
public:
    enum class Kind { RealSign, Dyadic, OddPrime, MonicIrreducible };

    Place() : kind_(Kind::RealSign) {}
    static Place real_sign();
    static Place dyadic();
    static Place odd_prime(long p);
    static Place irreducible(PolyFp f); // monic irreducible required

    Kind kind() const { return kind_; }
    long prime() const { return prime_; } // uniformizer for Q kinds; char for poly kind
    const PolyFp& poly() const { return poly_; }
    bool is_finite() const { return kind_ != Kind::RealSign; }

    // order of the residue field (finite places only)
    uint64_t residue_order() const;

    bool operator==(const Place& o) const;
    bool operator<(const Place& o) const; // real < dyadic < odd primes asc; polys by degree then lex
    std::string str() const;

private:
    Kind kind_;
    long prime_ = 0;
    PolyFp poly_;
    Place(Kind k, long pr, PolyFp po) : kind_(k), prime_(pr), poly_(std::move(po)) {}
};

// element of Q or F_p(t), exact
class FieldElem {
public:
    FieldElem() : tag_(FieldTag::Q), q_(0) {}
    static FieldElem rational(mpq_class v);
    static FieldElem rational(long v) { return rational(mpq_class(v)); }
    static FieldElem function(PolyFp num, PolyFp den); // normalized: den monic, coprime

    FieldTag tag() const { return tag_; }
    long char_p() const { return tag_ == FieldTag::Q ? 0 : num_.p(); }
    FieldRef field() const { return {tag_, char_p()}; }
    const mpq_class& rat() const;
    const PolyFp& num() const;
    const PolyFp& den() const;

    bool is_zero() const;
    bool is_one() const;
    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem inverse() const;
    bool operator==(const FieldElem& o) const;
    bool operator<(const FieldElem& o) const; // arbitrary total order within a field

    std::string str() const;

private:
    FieldTag tag_;
    mpq_class q_;
    PolyFp num_, den_;
};

FieldElem parse_field_elem(const std::string& text, const FieldRef& field);

// factored nonzero field element: torsion part and finite place exponents
struct UnitVector {
    FieldRef field;
    long torsion = 1; // Q: sign +1/-1; Fpt: leading unit in [1, p)
    std::map<Place, long> exps;

    static UnitVector one(const FieldRef& f) { return {f, 1, {}}; }

    long exp_at(const Place& pl) const;
    bool is_one() const { return torsion == 1 && exps.empty(); }
    UnitVector operator*(const UnitVector& o) const;
    UnitVector inverse() const;
    UnitVector pow(long e) const;
    bool operator==(const UnitVector& o) const;
    bool operator<(const UnitVector& o) const;

    FieldElem value() const; // exact reconstruction
    std::string str() const;
};

// factor a nonzero element; throws std::invalid_argument on zero,
// std::domain_error when the element resists the configured bounds
UnitVector factor_element(const FieldElem& x, const Caps& caps = default_caps());

struct ResidueField {
    Place place;
    long char_p = 0;
    int degree = 1;
    uint64_t order = 0;           // q
    uint64_t generator = 0;       // encoded; generates the unit group
    std::vector<int32_t> dlog;    // encoded element -> discrete log base generator, -1 unused

    long log_of(uint64_t encoded) const;
    uint64_t encode(const FieldElem& x) const;  // reduce a unit at the place
    std::string elem_str(uint64_t encoded) const;
};

// cached; throws std::domain_error when the order exceeds caps
std::shared_ptr<const ResidueField> residue_field(const Place& pl,
                                                  const Caps& caps = default_caps());

// discrete log of the residue of x at a finite place with v(x) = 0
long residue_log(const Place& pl, const FieldElem& x, const Caps& caps = default_caps());
long residue_log(const Place& pl, const UnitVector& x, const Caps& caps = default_caps());

// 2-adic Hilbert symbol of nonzero rationals, +1 or -1
int hilbert_dyadic(const mpq_class& a, const mpq_class& b);
// real place symbol: -1 iff both negative
int real_symbol(const mpq_class& a, const mpq_class& b);

// S-unit support: torsion generator (implicit) plus sorted finite places
class Support {
public:
    Support() = default;
    static Support make(const FieldRef& field, std::vector<Place> finite_places,
                        const Caps& caps = default_caps());
    // items: "-1", "2", "3" for Q; "t", "t+1", "t^2+1@p=3" for F_p(t)
    static Support parse(const FieldRef& field, const std::vector<std::string>& items,
                         const Caps& caps = default_caps());

    const FieldRef& field() const { return field_; }
    const std::vector<Place>& places() const { return places_; }
    int basis_size() const { return 1 + (int)places_.size(); }
    long torsion_order() const { return field_.tag == FieldTag::Q ? 2 : field_.p - 1; }

    bool contains(const Place& pl) const;
    // basis index 0 is the torsion generator; 1.. are place uniformizers
    UnitVector basis_unit(int i) const;
    long torsion_generator() const; // Q: -1 stands alone; Fpt: smallest generator of F_p^*
    // exponents of u in the basis (torsion exponent reduced mod torsion_order);
    // throws if u involves a place outside the support
    std::vector<long> coords(const UnitVector& u) const;
    UnitVector from_coords(const std::vector<long>& c) const;

    bool operator==(const Support& o) const;
    std::string str() const; // comma-joined canonical item list
    std::vector<std::string> item_strings() const;

private:
    FieldRef field_;
    std::vector<Place> places_;
    long torsion_gen_ = 0;
};

bool is_prime_u64(uint64_t n);

} // namespace bnh
