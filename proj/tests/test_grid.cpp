#include "matmax/grid.hpp"
#include "matmax/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace matmax;

TEST_CASE("make_grid sizes and bounds")
{
    CHECK(make_grid(0, 0).cell_count() == 1);
    const Grid g = make_grid(1, 1);
    CHECK(g.n1() == 2);
    CHECK(g.n2() == 2);
    CHECK(g.cell_measure() == 0.25);
    const Grid wide = make_grid(5, 3);
    CHECK(wide.n1() == 32);
    CHECK(wide.n2() == 8);
    CHECK_THROWS_AS(make_grid(-1, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 13), std::invalid_argument);
}

TEST_CASE("regions_containing matches exhaustive enumeration")
{
    const Grid g = make_grid(1, 1);
    const RegionFamily rects{g, RegionFamilyKind::dyadic_rectangles};
    const auto through_origin = regions_containing(rects, 0, 0);
    CHECK(through_origin.size() == 4); // cell, row, column, full

    // Oracle: filter the full enumeration by membership.
    std::vector<Region> filtered;
    for_each_region(rects, [&](const Region& r) {
        if (r.contains(0, 0))
            filtered.push_back(r);
    });
    REQUIRE(filtered.size() == through_origin.size());
    for (const Region& r : through_origin)
        CHECK(std::count(filtered.begin(), filtered.end(), r) == 1);

    const RegionFamily one_cell{make_grid(0, 0), RegionFamilyKind::all_rectangles};
    CHECK(regions_containing(one_cell, 0, 0).size() == 1);

    const RegionFamily cubes{make_grid(2, 2), RegionFamilyKind::dyadic_cubes};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(regions_containing(cubes, i, j).size() == 3); // sides 1, 2, 4

    CHECK_THROWS_AS(regions_containing(cubes, 4, 0), std::invalid_argument);
}

TEST_CASE("dyadic rectangle counts and asymmetric cubes")
{
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        const Grid g = make_grid(rng.uniform_int(5), rng.uniform_int(5));
        const RegionFamily fam{g, RegionFamilyKind::dyadic_rectangles};
        const int i = rng.uniform_int(g.n1());
        const int j = rng.uniform_int(g.n2());
        CHECK(static_cast<int>(regions_containing(fam, i, j).size()) == (g.levels1 + 1) * (g.levels2 + 1));
    }

    // 8x2 grid: cubes of geometric side 1, 1/2 exist; every cube is a
    // rectangle of the dyadic family.
    const Grid g = make_grid(3, 1);
    const RegionFamily cubes{g, RegionFamilyKind::dyadic_cubes};
    const auto through = regions_containing(cubes, 5, 1);
    CHECK(through.size() == 2);
    CHECK(through[0] == Region{0, 8, 0, 2});
    CHECK(through[1] == Region{4, 8, 1, 2});
}

TEST_CASE("family nesting: cubes within rectangles within all rectangles")
{
    const Grid g = make_grid(2, 3);
    auto members = [&](RegionFamilyKind kind) {
        std::vector<Region> out;
        for_each_region(RegionFamily{g, kind}, [&](const Region& r) { out.push_back(r); });
        return out;
    };
    const auto cubes = members(RegionFamilyKind::dyadic_cubes);
    const auto rects = members(RegionFamilyKind::dyadic_rectangles);
    const auto all = members(RegionFamilyKind::all_rectangles);
    for (const Region& c : cubes)
        CHECK(std::count(rects.begin(), rects.end(), c) == 1);
    for (const Region& r : rects)
        CHECK(std::count(all.begin(), all.end(), r) == 1);
    for (const Region& a : {Region{0, 1, 0, 1}, Region{1, 3, 2, 5}})
        CHECK(std::count(all.begin(), all.end(), a) == 1);
}

TEST_CASE("all-rectangles enumeration is capped at 16 cells per axis")
{
    const RegionFamily big{make_grid(5, 5), RegionFamilyKind::all_rectangles};
    CHECK_THROWS_AS(region_count(big), std::invalid_argument);
    CHECK_THROWS_AS(regions_containing(big, 0, 0), std::invalid_argument);
}

TEST_CASE("average_scalar: constants, the quarter indicator, and the naive oracle")
{
    const Grid g = make_grid(1, 1);
    ScalarField ind(g);
    ind.set(0, 0, 1.0);
    CHECK(average_scalar(ind, Region{0, 2, 0, 2}) == 0.25);

    ScalarField constant(make_grid(3, 2), 0.7);
    CHECK(average_scalar(constant, Region{1, 5, 0, 3}) == doctest::Approx(0.7).epsilon(1e-15));

    Rng rng(22);
    for (int levels = 0; levels <= 6; levels += 2) {
        const Grid grid = make_grid(levels, levels);
        ScalarField s(grid);
        for (long c = 0; c < grid.cell_count(); ++c)
            s.set(c, rng.normal());
        const PrefixTable table(s);
        for (int t = 0; t < 200; ++t) {
            const int i0 = rng.uniform_int(grid.n1());
            const int j0 = rng.uniform_int(grid.n2());
            const Region r{i0, i0 + 1 + rng.uniform_int(grid.n1() - i0), j0,
                           j0 + 1 + rng.uniform_int(grid.n2() - j0)};
            double naive = 0.0;
            for (int i = r.i0; i < r.i1; ++i)
                for (int j = r.j0; j < r.j1; ++j)
                    naive += s.at(i, j);
            naive /= static_cast<double>(r.cell_count());
            CHECK(std::abs(table.average(r) - naive) <= 1e-12);
        }
    }

    CHECK_THROWS_AS(average_scalar(ind, Region{0, 3, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(average_scalar(ind, Region{1, 1, 0, 1}), std::invalid_argument);
}

TEST_CASE("weighted_lp_norm examples, oracle, and homogeneity")
{
    const Grid g = make_grid(2, 2);
    WeightField eye(g, 2, std::vector<Matrix>(static_cast<std::size_t>(g.cell_count()), Matrix::identity(2)));
    VectorField f(g, 2);
    for (long c = 0; c < g.cell_count(); ++c)
        f.set(c, Vec{1.0, 0.0});
    for (double p : {0.5, 1.0, 2.0, 7.0})
        CHECK(weighted_lp_norm(eye, f, p) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(weighted_lp_norm(eye, f, std::numeric_limits<double>::infinity()) == 1.0);

    WeightField stretch(g, 2,
                        std::vector<Matrix>(static_cast<std::size_t>(g.cell_count()), Matrix::diag({2.0, 1.0})));
    CHECK(weighted_lp_norm(stretch, f, std::numeric_limits<double>::infinity()) == 2.0);

    CHECK_THROWS_AS(weighted_lp_norm(eye, f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(weighted_lp_norm(eye, f, -2.0), std::invalid_argument);

    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        const Grid grid = make_grid(1 + rng.uniform_int(3), 1 + rng.uniform_int(3));
        const int d = 1 + rng.uniform_int(3);
        std::vector<Matrix> cells;
        for (long c = 0; c < grid.cell_count(); ++c) {
            Matrix m = Matrix::identity(d);
            for (int k = 0; k < d; ++k)
                m(k, k) = 0.5 + rng.uniform();
            cells.push_back(m);
        }
        const WeightField w(grid, d, cells);
        VectorField v(grid, d);
        for (long c = 0; c < grid.cell_count(); ++c) {
            Vec x(d);
            for (int k = 0; k < d; ++k)
                x[k] = rng.normal();
            v.set(c, x);
        }
        const double p = 0.5 + 3.0 * rng.uniform();

        long double naive = 0.0L;
        for (long c = 0; c < grid.cell_count(); ++c)
            naive += std::pow(static_cast<long double>((w.at(c) * v.at(c)).norm()), static_cast<long double>(p));
        naive *= static_cast<long double>(grid.cell_measure());
        const double expect = static_cast<double>(std::pow(naive, 1.0L / static_cast<long double>(p)));
        CHECK(weighted_lp_norm(w, v, p) == doctest::Approx(expect).epsilon(1e-12));

        // Absolute homogeneity.
        const double tfac = -2.75;
        VectorField scaled(grid, d);
        for (long c = 0; c < grid.cell_count(); ++c)
            scaled.set(c, v.at(c) * tfac);
        CHECK(weighted_lp_norm(w, scaled, p)
              == doctest::Approx(std::abs(tfac) * weighted_lp_norm(w, v, p)).epsilon(1e-12));
    }
}

TEST_CASE("weight field caches inverses and rejects bad cells")
{
    const Grid g = make_grid(1, 0);
    std::vector<Matrix> cells{Matrix::diag({2.0, 4.0}), Matrix::identity(2)};
    const WeightField w(g, 2, cells);
    CHECK(w.inverse_at(0L)(0, 0) == 0.5);
    CHECK(w.inverse_at(0L)(1, 1) == 0.25);

    Matrix asym(2);
    asym(0, 0) = 1.0;
    asym(0, 1) = 0.5;
    asym(1, 0) = 0.0;
    asym(1, 1) = 1.0;
    CHECK_THROWS_AS(WeightField(g, 2, {Matrix::identity(2), asym}), std::invalid_argument);

    try {
        WeightField bad(g, 2, {Matrix::identity(2), Matrix::diag({1.0, -1.0})});
        CHECK(false);
    } catch (const NearSingularError& e) {
        CHECK(e.cell() == 1);
    }
}
