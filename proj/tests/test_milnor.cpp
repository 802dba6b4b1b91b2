#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bnh/milnor.hpp"
#include "bnh/rng.hpp"

#include <set>

using namespace bnh;

namespace {

const FieldRef kQ{FieldTag::Q, 0};
const FieldRef kF3{FieldTag::Fpt, 3};

UnitVector uq(long n, long d = 1) {
    return factor_element(FieldElem::rational(mpq_class(n, d)));
}

UnitVector uf3(const std::string& s) {
    return factor_element(parse_field_elem(s, kF3));
}

std::vector<mpz_class> zv(const std::vector<long>& v) {
    return std::vector<mpz_class>(v.begin(), v.end());
}

// order of the subgroup of prod Z/m_r generated by the coordinate columns,
// by closure; all moduli must be finite
size_t closure_order(const TruncatedKGroup& kg) {
    const auto& mod = kg.moduli();
    std::vector<long> m;
    for (const mpz_class& x : mod) {
        REQUIRE(x != 0);
        m.push_back(mpz_get_si(x.get_mpz_t()));
    }
    std::vector<std::vector<long>> gens;
    for (int k = 0; k < kg.gen_count(); ++k) {
        std::vector<long> g(m.size());
        for (size_t r = 0; r < m.size(); ++r)
            g[r] = mpz_get_si(kg.coord_matrix().at((int)r, k).get_mpz_t()) % m[r];
        gens.push_back(g);
    }
    std::set<std::vector<long>> seen{std::vector<long>(m.size(), 0)};
    std::vector<std::vector<long>> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
        std::vector<std::vector<long>> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                std::vector<long> y(m.size());
                for (size_t r = 0; r < m.size(); ++r) y[r] = (x[r] + g[r]) % m[r];
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen.size();
}

mpz_class group_order(const FgAbGroup& g) {
    REQUIRE(g.free_rank() == 0);
    mpz_class n = 1;
    for (const mpz_class& f : g.invariant_factors()) n *= f;
    return n;
}

UnitVector random_sunit(Rng& rng, const Support& s) {
    std::vector<long> c(s.basis_size());
    c[0] = rng.range(0, s.torsion_order() - 1);
    for (int i = 1; i < s.basis_size(); ++i) c[i] = rng.range(-5, 5);
    return s.from_coords(c);
}

} // namespace

TEST_CASE("tame symbols at odd and polynomial places") {
    CHECK(tame_symbol(Place::odd_prime(5), uq(2), uq(5)) == 1);
    CHECK(tame_symbol(Place::odd_prime(5), uq(5), uq(5)) == 2); // residue -1 = 2^2
    CHECK(tame_symbol(Place::odd_prime(3), uq(3), uq(-2)) == 0);
    CHECK(tame_symbol(Place::odd_prime(7), uq(3, 5), uq(11)) == 0); // both units there

    Place pt = Place::irreducible(parse_poly("t", 3));
    Place pt1 = Place::irreducible(parse_poly("t+1", 3));
    Place pq = Place::irreducible(parse_poly("t^2+1", 3));
    CHECK(tame_symbol(pt, uf3("t"), uf3("t")) == 1); // residue -1
    CHECK(tame_symbol(pt, uf3("t"), uf3("t+1")) == 0);
    CHECK(tame_symbol(pt1, uf3("t"), uf3("t+1")) == 1);
    CHECK(tame_symbol(pq, uf3("t"), uf3("t^2+1")) == 6);

    SUBCASE("bimultiplicative and alternating") {
        Rng rng(240);
        Support s = Support::parse(kQ, {"-1", "2", "3", "5"});
        Place pl = Place::odd_prime(5);
        long order = 4;
        for (int it = 0; it < 200; ++it) {
            UnitVector a = random_sunit(rng, s), b = random_sunit(rng, s),
                       c = random_sunit(rng, s);
            CHECK(tame_symbol(pl, a * c, b) ==
                  (tame_symbol(pl, a, b) + tame_symbol(pl, c, b)) % order);
            CHECK((tame_symbol(pl, a, b) + tame_symbol(pl, b, a)) % order == 0);
            UnitVector minus_a = a * uq(-1);
            CHECK(tame_symbol(pl, a, minus_a) == 0);
        }
    }
}

TEST_CASE("symbols of the shape a, 1-a vanish") {
    CHECK(steinberg_vanishes(FieldElem::rational(3)));  // {3, -2}
    CHECK(steinberg_vanishes(FieldElem::rational(-1))); // {-1, 2}
    CHECK(steinberg_vanishes(FieldElem::rational(mpq_class(5, 8))));
    CHECK_THROWS_AS(steinberg_vanishes(FieldElem::rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(steinberg_vanishes(FieldElem::rational(1)), std::invalid_argument);

    Rng rng(515);
    int checked = 0;
    for (int it = 0; it < 500; ++it) {
        long n = rng.range(-999, 999), d = rng.range(1, 999);
        mpq_class a(n, d);
        if (a == 0 || a == 1) continue;
        ++checked;
        CHECK(steinberg_vanishes(FieldElem::rational(a)));
    }
    CHECK(checked > 450);

    for (int it = 0; it < 60; ++it) {
        std::vector<long> cs;
        for (int i = 0, deg = (int)rng.range(1, 3); i <= deg; ++i) cs.push_back(rng.range(0, 2));
        PolyFp num(3, cs);
        if (num.is_zero() || num == PolyFp::constant(3, 1)) continue;
        FieldElem a = FieldElem::function(num, PolyFp::t(3) * PolyFp::t(3) +
                                                   PolyFp::constant(3, 2));
        if (a.is_zero() || a.is_one()) continue;
        CHECK(steinberg_vanishes(a));
    }
}

TEST_CASE("truncated symbol groups have the expected shapes") {
    Support s12 = Support::parse(kQ, {"-1", "2"});
    auto k0 = TruncatedKGroup::get(s12, 0);
    CHECK(k0->gen_count() == 1);
    CHECK(k0->group().free_rank() == 1);
    CHECK(k0->group().invariant_factors().empty());

    auto k1 = TruncatedKGroup::get(s12, 1);
    CHECK(k1->group().free_rank() == 1);
    CHECK(k1->group().invariant_factors() == std::vector<mpz_class>{2});

    auto k2 = TruncatedKGroup::get(s12, 2);
    CHECK(k2->gen_count() == 4);
    CHECK(k2->group().free_rank() == 0);
    CHECK(k2->group().invariant_factors() == std::vector<mpz_class>{2});

    auto k3 = TruncatedKGroup::get(s12, 3);
    CHECK(k3->group().invariant_factors() == std::vector<mpz_class>{2});
    auto k5 = TruncatedKGroup::get(s12, 5);
    CHECK(k5->group().invariant_factors() == std::vector<mpz_class>{2});

    Support sf = Support::parse(kF3, {"t", "t+1", "t^2+1"});
    auto kf3 = TruncatedKGroup::get(sf, 3);
    CHECK(kf3->coord_rows() == 0);
    CHECK(kf3->group().is_trivial());
    auto kf1 = TruncatedKGroup::get(sf, 1);
    CHECK(kf1->group().free_rank() == 3);
    CHECK(kf1->group().invariant_factors() == std::vector<mpz_class>{2});

    CHECK(TruncatedKGroup::get(s12, 2).get() == k2.get()); // memoized

    SUBCASE("weight two orders match a closure computation") {
        for (const Support& s : {Support::parse(kQ, {"-1", "2", "5"}),
                                 Support::parse(kQ, {"-1", "2", "3", "5"}),
                                 Support::parse(kQ, {"-1", "3", "7"})}) {
            auto kg = TruncatedKGroup::get(s, 2);
            CHECK(group_order(kg->group()) == closure_order(*kg));
        }
        auto kg = TruncatedKGroup::get(sf, 2);
        CHECK(group_order(kg->group()) == closure_order(*kg));
    }
}

TEST_CASE("normal forms of explicit symbols") {
    Support s12 = Support::parse(kQ, {"-1", "2"});
    auto k2 = TruncatedKGroup::get(s12, 2);
    CHECK(k2->normal_form({uq(-1), uq(-1)}) == zv({1}));
    CHECK(k2->normal_form({uq(-1), uq(2)}) == zv({0}));

    Support s125 = Support::parse(kQ, {"-1", "2", "5"});
    auto k25 = TruncatedKGroup::get(s125, 2);
    CHECK(k25->moduli() == zv({2, 4}));
    CHECK(k25->normal_form({uq(2), uq(5)}) == zv({1, 1}));
    CHECK(k25->normal_form({uq(5), uq(5)}) == zv({0, 2}));

    Support s123 = Support::parse(kQ, {"-1", "2", "3"});
    auto k23 = TruncatedKGroup::get(s123, 2);
    CHECK(k23->normal_form({uq(3), uq(-2)}) == zv({0, 0}));
    CHECK(k23->is_zero(k23->symbol_coords({uq(3), uq(-2)})));

    auto k33 = TruncatedKGroup::get(s123, 3);
    CHECK(k33->normal_form({uq(-1), uq(-1), uq(-1)}) == zv({1}));
    CHECK(k33->normal_form({uq(-3), uq(-2, 3), uq(-1)}) == zv({1}));
    CHECK(k33->normal_form({uq(-3), uq(2), uq(-1)}) == zv({0}));

    Support sf = Support::parse(kF3, {"t", "t+1", "t^2+1"});
    auto kf2 = TruncatedKGroup::get(sf, 2);
    CHECK(kf2->moduli() == zv({2, 2, 8}));
    CHECK(kf2->normal_form({uf3("t"), uf3("t")}) == zv({1, 0, 0}));
    CHECK(kf2->normal_form({uf3("t"), uf3("t+1")}) == zv({0, 1, 0}));
    CHECK(kf2->normal_form({uf3("t"), uf3("t^2+1")}) == zv({0, 0, 6}));
}

TEST_CASE("normal forms extend multilinearly") {
    Rng rng(808);
    Support sq = Support::parse(kQ, {"-1", "2", "3", "5"});
    Support sf = Support::parse(kF3, {"t", "t+1", "t^2+1"});
    for (int m : {1, 2, 3}) {
        auto kq = TruncatedKGroup::get(sq, m);
        auto kf = TruncatedKGroup::get(sf, m);
        for (int it = 0; it < 60; ++it) {
            std::vector<UnitVector> symq, symf;
            for (int i = 0; i < m; ++i) {
                symq.push_back(random_sunit(rng, sq));
                symf.push_back(random_sunit(rng, sf));
            }
            CHECK(kq->normal_form(symq) == kq->normal_form_coords(kq->symbol_coords(symq)));
            CHECK(kf->normal_form(symf) == kf->normal_form_coords(kf->symbol_coords(symf)));
        }
    }
    SUBCASE("additive in one slot") {
        auto k2 = TruncatedKGroup::get(sq, 2);
        for (int it = 0; it < 100; ++it) {
            UnitVector a = random_sunit(rng, sq), a2 = random_sunit(rng, sq),
                       b = random_sunit(rng, sq);
            auto lhs = k2->normal_form({a * a2, b});
            auto r1 = k2->normal_form({a, b});
            auto r2 = k2->normal_form({a2, b});
            for (size_t r = 0; r < lhs.size(); ++r)
                CHECK(lhs[r] == (r1[r] + r2[r]) % k2->moduli()[r]);
            // alternating: {a, -a} dies, and swapping negates
            CHECK(k2->is_zero(k2->symbol_coords({a, a * uq(-1)})));
            auto fwd = k2->normal_form({a, b});
            auto bwd = k2->normal_form({b, a});
            for (size_t r = 0; r < fwd.size(); ++r)
                CHECK((fwd[r] + bwd[r]) % k2->moduli()[r] == 0);
        }
    }
}

TEST_CASE("generator bookkeeping round trips") {
    Support sq = Support::parse(kQ, {"-1", "2", "3"});
    auto k3 = TruncatedKGroup::get(sq, 3);
    CHECK(k3->gen_count() == 27);
    for (int k = 0; k < 27; ++k) CHECK(k3->tuple_index(k3->gen_tuple(k)) == k);
    CHECK(k3->gen_tuple(0) == std::vector<int>({0, 0, 0}));
    CHECK(k3->gen_tuple(5) == std::vector<int>({0, 1, 2}));

    auto k0 = TruncatedKGroup::get(sq, 0);
    SparseVec empty_sym = k0->symbol_coords({});
    CHECK(empty_sym == SparseVec{{0, 1}});

    auto k1 = TruncatedKGroup::get(sq, 1);
    UnitVector u = uq(-18); // -1 * 2 * 3^2
    SparseVec c = k1->symbol_coords({u});
    CHECK(c == SparseVec({{0, 1}, {1, 1}, {2, 2}}));
}

TEST_CASE("multiplying by a unit prepends a slot") {
    Rng rng(4242);
    Support sq = Support::parse(kQ, {"-1", "2", "3", "5"});
    auto k2 = TruncatedKGroup::get(sq, 2);
    auto k3 = TruncatedKGroup::get(sq, 3);
    for (int it = 0; it < 80; ++it) {
        UnitVector a = random_sunit(rng, sq), b = random_sunit(rng, sq),
                   c = random_sunit(rng, sq);
        SparseVec bc = k2->symbol_coords({b, c});
        CHECK(k2->multiply_unit(a, bc) == k3->symbol_coords({a, b, c}));
    }
    SUBCASE("zero normal form is preserved") {
        // {3, -2} already dies in weight two, so a * {3, -2} dies in weight three
        SparseVec x = k2->symbol_coords({uq(3), uq(-2)});
        REQUIRE(k2->is_zero(x));
        for (int it = 0; it < 20; ++it) {
            UnitVector a = random_sunit(rng, sq);
            CHECK(k3->is_zero(k2->multiply_unit(a, x)));
        }
    }
}

TEST_CASE("relation columns die in the coordinate map") {
    for (int m : {1, 2, 3}) {
        auto kg = TruncatedKGroup::get(Support::parse(kQ, {"-1", "2", "5"}), m);
        const IntMatrix& rel = kg->relations();
        CHECK(rel.rows() == kg->gen_count());
        for (int j = 0; j < rel.cols(); ++j) {
            SparseVec col = rel.col(j);
            CHECK(kg->is_zero(col));
        }
    }
    auto kf = TruncatedKGroup::get(Support::parse(kF3, {"t", "t+1"}), 2);
    for (int j = 0; j < kf->relations().cols(); ++j)
        CHECK(kf->is_zero(kf->relations().col(j)));
}
