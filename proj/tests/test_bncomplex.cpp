#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bnh/bncomplex.hpp"
#include "bnh/rng.hpp"
#include "oracle_dense.hpp"

#include <map>

using namespace bnh;

namespace {

const FieldRef kQ{FieldTag::Q, 0};
const FieldRef kF3{FieldTag::Fpt, 3};

UnitVector random_sunit(Rng& rng, const Support& s) {
    std::vector<long> c(s.basis_size());
    c[0] = rng.range(0, s.torsion_order() - 1);
    for (int i = 1; i < s.basis_size(); ++i) c[i] = rng.range(-4, 4);
    return s.from_coords(c);
}

SparseVec random_chain(Rng& rng, int gens, int nnz) {
    SparseVec x;
    for (int k = 0; k < nnz; ++k) {
        long v = rng.range(-5, 5);
        if (v != 0) x[(int)rng.range(0, gens - 1)] += v;
    }
    for (auto it = x.begin(); it != x.end();)
        it = it->second == 0 ? x.erase(it) : std::next(it);
    return x;
}

// independent dense model: explicit digit tuples, relation lattices from the
// textbook kernel, no index arithmetic shared with the library
struct DenseModel {
    int b = 0, n = 0, gens = 0;
    std::vector<oracle::Mat> d;   // d[i-1] is the map leaving position i
    std::vector<oracle::Mat> rel; // rel[i] spans the relations at position i
};

std::vector<std::vector<int>> all_tuples(int len, int b) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(len, 0);
    while (true) {
        out.push_back(cur);
        int p = len - 1;
        while (p >= 0 && cur[p] == b - 1) {
            cur[p] = 0;
            --p;
        }
        if (p < 0) break;
        ++cur[p];
    }
    return out;
}

DenseModel dense_model(const Support& s, int n) {
    DenseModel m;
    m.b = s.basis_size();
    m.n = n;
    std::vector<std::vector<std::vector<int>>> tup(n + 1);
    for (int l = 0; l <= n; ++l) tup[l] = all_tuples(l, m.b);
    m.gens = 1;
    for (int i = 0; i < n; ++i) m.gens *= m.b;

    // generator index maps per position
    std::vector<std::map<std::pair<std::vector<int>, std::vector<int>>, int>> idx(n + 1);
    for (int i = 0; i <= n; ++i) {
        int k = 0;
        for (const auto& tau : tup[i])
            for (const auto& kap : tup[n - i]) idx[i][{tau, kap}] = k++;
    }

    for (int i = 1; i <= n; ++i) {
        oracle::Mat di = oracle::zeros(m.gens, m.gens);
        for (const auto& tau : tup[i])
            for (const auto& kap : tup[n - i]) {
                int col = idx[i].at({tau, kap});
                for (int j = 0; j < i; ++j) {
                    std::vector<int> tau2 = tau;
                    tau2.erase(tau2.begin() + j);
                    std::vector<int> kap2 = kap;
                    kap2.insert(kap2.begin(), tau[j]);
                    di[idx[i - 1].at({tau2, kap2})][col] += 1;
                }
            }
        m.d.push_back(std::move(di));
    }

    long w = s.torsion_order();
    for (int i = 0; i <= n; ++i) {
        auto kg = TruncatedKGroup::get(s, n - i);
        int nk = (int)tup[n - i].size();
        // symbol relations from the textbook kernel of the invariant columns
        oracle::Mat cd = oracle::zeros(kg->coord_rows(), nk);
        for (int kap = 0; kap < nk; ++kap) {
            std::vector<UnitVector> sym;
            for (int digit : tup[n - i][kap]) sym.push_back(s.basis_unit(digit));
            auto nf = kg->normal_form(sym);
            for (size_t r = 0; r < nf.size(); ++r) cd[r][kap] = nf[r];
        }
        oracle::Mat modcols = oracle::zeros(kg->coord_rows(), 0);
        for (int r = 0; r < kg->coord_rows(); ++r)
            if (kg->moduli()[r] != 0) {
                oracle::Mat e = oracle::zeros(kg->coord_rows(), 1);
                e[r][0] = kg->moduli()[r];
                modcols = oracle::ncols(modcols) ? oracle::hcat(modcols, e) : e;
            }
        oracle::Mat kker =
            cd.empty() ? oracle::ident(nk)
                       : oracle::kernel(oracle::ncols(modcols) ? oracle::hcat(cd, modcols) : cd);
        oracle::Mat krel = oracle::zeros(nk, oracle::ncols(kker));
        for (int r = 0; r < nk; ++r)
            for (int c = 0; c < oracle::ncols(kker); ++c) krel[r][c] = kker[r][c];

        std::vector<std::vector<mpz_class>> cols;
        for (const auto& tau : tup[i]) {
            bool tors = false;
            for (int digit : tau) tors = tors || digit == 0;
            for (int c = 0; c < oracle::ncols(krel); ++c) {
                std::vector<mpz_class> col(m.gens, mpz_class(0));
                for (int kap = 0; kap < nk; ++kap)
                    col[idx[i].at({tau, tup[n - i][kap]})] = krel[kap][c];
                cols.push_back(col);
            }
            if (tors)
                for (int kap = 0; kap < nk; ++kap) {
                    std::vector<mpz_class> col(m.gens, mpz_class(0));
                    col[idx[i].at({tau, tup[n - i][kap]})] = w;
                    cols.push_back(col);
                }
        }
        oracle::Mat ri = oracle::zeros(m.gens, (int)cols.size());
        for (size_t c = 0; c < cols.size(); ++c)
            for (int r = 0; r < m.gens; ++r) ri[r][c] = cols[c][r];
        m.rel.push_back(std::move(ri));
    }
    return m;
}

} // namespace

TEST_CASE("differential structure on small complexes") {
    Support s = Support::parse(kQ, {"-1", "2"});
    auto cx = SymbolComplex::build(s, 3);
    CHECK(cx->gens() == 8);
    CHECK(cx->differential(1) == IntMatrix::identity(8));

    // d_2 on generator 5 = (tau (1,0), kappa (1)): drop either slot
    SparseVec out = cx->apply_differential(2, SparseVec{{5, 1}});
    CHECK(out == SparseVec({{3, 1}, {5, 1}}));

    // duplicated slots merge into one coefficient
    SparseVec dup = cx->apply_differential(2, SparseVec{{7, 1}}); // tau (1,1), kappa (1)
    CHECK(dup == SparseVec{{7, 2}});

    CHECK(cx->torsion_tau(2, 0));
    CHECK(cx->torsion_tau(2, 2));
    CHECK_FALSE(cx->torsion_tau(2, 3));
    CHECK_THROWS_AS(SymbolComplex::build(s, 0), std::invalid_argument);
}

TEST_CASE("composites of differentials vanish") {
    for (int n = 3; n <= 5; ++n) {
        auto cq = SymbolComplex::build(Support::parse(kQ, {"-1", "2", "3"}), n);
        CHECK(cq->dd_vanishes());
        auto cf = SymbolComplex::build(Support::parse(kF3, {"t", "t+1"}), n);
        CHECK(cf->dd_vanishes());
    }
    SUBCASE("random chains die after two steps") {
        Rng rng(1311);
        auto cx = SymbolComplex::build(Support::parse(kQ, {"-1", "2", "5"}), 4);
        for (int i = 2; i <= 4; ++i)
            for (int it = 0; it < 60; ++it) {
                SparseVec x = random_chain(rng, cx->gens(), 5);
                SparseVec y = cx->apply_differential(i - 1, cx->apply_differential(i, x));
                CHECK(cx->is_zero_at(i - 2, y));
            }
    }
}

TEST_CASE("zero tests agree across three routes") {
    Rng rng(7227);
    for (const Support& s :
         {Support::parse(kQ, {"-1", "2", "5"}), Support::parse(kF3, {"t", "t+1"})}) {
        auto cx = SymbolComplex::build(s, 3);
        for (int i = 0; i <= 3; ++i) {
            const auto& cr = cx->coord_rows(i);
            const FgAbGroup& pg = cx->position_group(i);
            for (int it = 0; it < 40; ++it) {
                SparseVec x = random_chain(rng, cx->gens(), 4);
                bool direct = cx->is_zero_at(i, x);
                bool via_group = pg.represents_zero(sv_dense(x, cx->gens()));
                std::vector<mpz_class> rowval = cr.rows.apply(sv_dense(x, cx->gens()));
                bool via_rows = true;
                for (int r = 0; r < (int)rowval.size(); ++r) {
                    if (cr.moduli[r] == 0) {
                        via_rows = via_rows && rowval[r] == 0;
                    } else {
                        via_rows = via_rows && rowval[r] % cr.moduli[r] == 0;
                    }
                }
                CHECK(direct == via_group);
                CHECK(direct == via_rows);
            }
            // relation columns are zero elements
            const IntMatrix& rel = cx->position_relations(i);
            for (int c = 0; c < std::min(rel.cols(), 30); ++c)
                CHECK(cx->is_zero_at(i, rel.col(c)));
        }
    }
    SUBCASE("a doubled free-block symbol survives") {
        Support s = Support::parse(kQ, {"-1", "2", "5"});
        auto cx = SymbolComplex::build(s, 3);
        // tau = uniformizer slot 2, kappa = the pair (2, 5): coordinates (1, 1)
        auto k2 = TruncatedKGroup::get(s, 2);
        int g = 2 * k2->gen_count() + k2->tuple_index({1, 2});
        CHECK_FALSE(cx->is_zero_at(1, SparseVec{{g, 2}}));
        CHECK(cx->is_zero_at(1, SparseVec{{g, 4}})); // both coordinates have order dividing 4
    }
}

TEST_CASE("homology matches the dense textbook model") {
    struct Case {
        Support s;
        int n;
    };
    const Case cases[] = {
        {Support::parse(kQ, {"-1", "2"}), 3},
        {Support::parse(kQ, {"-1", "2"}), 4},
        {Support::parse(kQ, {"-1", "2", "3"}), 3},
        {Support::parse(kQ, {"-1", "2", "3", "5"}), 3},
        {Support::parse(kF3, {"t", "t+1"}), 3},
        {Support::parse(kF3, {"t", "t+1"}), 4},
    };
    for (const Case& c : cases) {
        auto cx = SymbolComplex::build(c.s, c.n);
        DenseModel dm = dense_model(c.s, c.n);
        for (int i = 1; i < c.n; ++i) {
            FgAbGroup h = cx->homology_at(i);
            oracle::GroupShape ref = oracle::homology_shape(dm.gens, dm.d[i - 1], dm.rel[i - 1],
                                                            dm.d[i], dm.rel[i]);
            CAPTURE(c.n);
            CAPTURE(i);
            CHECK(h.free_rank() == ref.free_rank);
            CHECK(h.invariant_factors() == ref.factors);
        }
    }
}

TEST_CASE("weight gates of the homology entry point") {
    Support s = Support::parse(kQ, {"-1", "2"});
    CHECK(b_group(s, 1).is_trivial());
    try {
        b_group(s, 2);
        FAIL("weight 2 should refuse");
    } catch (const UnsupportedWeight& e) {
        CHECK(std::string(e.what()).find("K_3^ind") != std::string::npos);
    }
    FgAbGroup b3 = b_group(s, 3);
    auto cx = SymbolComplex::build(s, 3);
    CHECK(b3.same_isomorphism_class(cx->homology_at(2)));
}

TEST_CASE("first homology vanishes") {
    for (int n : {3, 4}) {
        CHECK(SymbolComplex::build(Support::parse(kQ, {"-1", "2", "3"}), n)
                  ->homology_at(1)
                  .is_trivial());
        CHECK(SymbolComplex::build(Support::parse(kF3, {"t", "t+1"}), n)
                  ->homology_at(1)
                  .is_trivial());
    }
}

TEST_CASE("the leading-slot section splits the first differential") {
    Rng rng(3141);
    for (const Support& s :
         {Support::parse(kQ, {"-1", "2", "3"}), Support::parse(kF3, {"t", "t+1"})}) {
        auto cx = SymbolComplex::build(s, 3);
        for (int g = 0; g < cx->gens(); ++g) {
            SparseVec e{{g, 1}};
            SparseVec back = cx->apply_differential(1, cx->section(e));
            sv_axpy(back, mpz_class(-1), e);
            CHECK(cx->is_zero_at(0, back));
        }
        for (int it = 0; it < 40; ++it)
            CHECK(cx->section_defect_is_boundary(random_chain(rng, cx->gens(), 4)));
    }
}

TEST_CASE("theta chains are cycles") {
    Rng rng(2718);
    Support s = Support::parse(kQ, {"-1", "2", "3", "5"});
    auto cx = SymbolComplex::build(s, 3);
    bool saw_nonzero = false;
    for (int it = 0; it < 100; ++it) {
        UnitVector a = random_sunit(rng, s), b = random_sunit(rng, s),
                   c = random_sunit(rng, s);
        SparseVec th = theta_chain(*cx, a, b, c);
        CHECK(cx->is_zero_at(0, cx->apply_differential(1, th)));
        saw_nonzero = saw_nonzero || !cx->is_zero_at(1, th);
        CHECK(theta_chain(*cx, a, a, c).empty()); // alternating in the wedge slots
    }
    CHECK(saw_nonzero);

    Support sf = Support::parse(kF3, {"t", "t+1"});
    auto cf = SymbolComplex::build(sf, 3);
    for (int it = 0; it < 50; ++it) {
        SparseVec th = theta_chain(*cf, random_sunit(rng, sf), random_sunit(rng, sf),
                                   random_sunit(rng, sf));
        CHECK(cf->is_zero_at(0, cf->apply_differential(1, th)));
    }
}

TEST_CASE("generator order does not influence the answers") {
    Support s = Support::parse(kQ, {"-1", "2", "3"});
    auto base = SymbolComplex::build(s, 3);
    FgAbGroup h1 = base->homology_at(1), h2 = base->homology_at(2);
    for (uint64_t seed : {7u, 1999u}) {
        BnBuildOptions opt;
        opt.shuffle_seed = seed;
        auto cx = SymbolComplex::build(s, 3, opt);
        CHECK(cx->dd_vanishes());
        CHECK(cx->homology_at(1).same_isomorphism_class(h1));
        CHECK(cx->homology_at(2).same_isomorphism_class(h2));
        Rng rng(seed);
        for (int it = 0; it < 30; ++it)
            CHECK(cx->section_defect_is_boundary(random_chain(rng, cx->gens(), 4)));
    }
}

TEST_CASE("top position carries the tensor power of the units") {
    Support s = Support::parse(kQ, {"-1", "2"});
    auto cx = SymbolComplex::build(s, 2);
    auto u = TruncatedKGroup::get(s, 1)->group();
    TensorProduct uu = tensor(u, u);
    CHECK(cx->position_group(2).same_isomorphism_class(uu.group));
    CHECK(cx->position_group(0).same_isomorphism_class(TruncatedKGroup::get(s, 2)->group()));
}

TEST_CASE("support growth induces a chain map") {
    BnBuildOptions shuffled;
    shuffled.shuffle_seed = 5;
    auto src = SymbolComplex::build(Support::parse(kQ, {"-1", "2", "3"}), 3);
    auto dst = SymbolComplex::build(Support::parse(kQ, {"-1", "2", "3", "5"}), 3, shuffled);
    std::vector<IntMatrix> phi;
    for (int i = 0; i <= 3; ++i) phi.push_back(stabilization_matrix(*src, *dst, i));
    for (int i = 1; i <= 3; ++i)
        CHECK(dst->differential(i).mul(phi[i]) == phi[i - 1].mul(src->differential(i)));
    for (int i = 0; i <= 3; ++i) {
        IntMatrix moved = phi[i].mul(src->position_relations(i));
        for (int c = 0; c < moved.cols(); ++c) CHECK(dst->is_zero_at(i, moved.col(c)));
    }
    // transported cycles stay cycles and span at most the source free rank
    IntMatrix z = phi[2].mul(src->cycle_basis(2));
    for (int c = 0; c < z.cols(); ++c)
        CHECK(dst->is_zero_at(1, dst->apply_differential(2, z.col(c))));
    IntMatrix bounds = dst->differential(3).hcat(dst->position_relations(2));
    long base = rank_of(bounds);
    long moved = rank_of(z.hcat(bounds));
    CHECK(moved - base >= 0);
    CHECK(moved - base <= src->homology_at(2).free_rank());

    auto other = SymbolComplex::build(Support::parse(kQ, {"-1", "2", "7"}), 3);
    CHECK_THROWS_AS(stabilization_matrix(*other, *src, 1), std::invalid_argument);
}

TEST_CASE("reports carry the homology shape") {
    Support s = Support::parse(kQ, {"-1", "2"});
    BnReport r3 = bn_report(s, 3);
    CHECK(r3.field == "q");
    CHECK(r3.support_items == std::vector<std::string>({"-1", "2"}));
    CHECK(r3.gens_per_position == 8);
    CHECK(r3.differential_ranks.size() == 3);
    CHECK_FALSE(r3.refused);
    FgAbGroup b3 = b_group(s, 3);
    CHECK(r3.free_rank == b3.free_rank());
    CHECK(r3.invariant_factors == b3.invariant_factors());

    BnReport r2 = bn_report(s, 2);
    CHECK(r2.refused);
    CHECK(r2.refusal_reason.find("K_3^ind") != std::string::npos);
    BnReport r1 = bn_report(s, 1);
    CHECK(r1.free_rank == 0);
    CHECK(r1.invariant_factors.empty());
}
