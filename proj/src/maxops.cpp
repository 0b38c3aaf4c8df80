#include "matmax/maxops.hpp"

#include "matmax/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace matmax {

namespace {

ScalarField abs_field(const ScalarField& s)
{
    ScalarField a(s.grid());
    for (long c = 0; c < s.grid().cell_count(); ++c)
        a.set(c, std::abs(s.at(c)));
    return a;
}

double max_average_over(const PrefixTable& table, const std::vector<Region>& regions)
{
    double best = -std::numeric_limits<double>::infinity();
    for (const Region& r : regions)
        best = std::max(best, table.average(r));
    return best;
}

// Minkowski averages of a set field over every region of a family, each body
// built exactly once. Dyadic families use the bottom-up pyramid (children
// merge with weights 1/2, 1/2); the all-rectangles oracle extends strips and
// rectangles one slice at a time.
class RegionAverages {
public:
    RegionAverages(const SetField& f, RegionFamilyKind kind, const ApproxBudget& budget)
        : grid_(f.grid())
    {
        if (kind == RegionFamilyKind::all_rectangles) {
            build_all_rectangles(f, budget);
            return;
        }
        build_pyramid(f, budget);
    }

    const SymBody& at(const Region& r) const
    {
        if (!pyramid_.empty()) {
            const int span1 = r.i1 - r.i0;
            const int span2 = r.j1 - r.j0;
            const int s1 = std::countr_zero(static_cast<unsigned>(span1));
            const int s2 = std::countr_zero(static_cast<unsigned>(span2));
            const auto& level = pyramid_[level_index(s1, s2)];
            const long blocks2 = grid_.n2() >> s2;
            return level[static_cast<std::size_t>((r.i0 >> s1) * blocks2 + (r.j0 >> s2))];
        }
        const auto it = general_.find(key(r));
        if (it == general_.end())
            throw std::logic_error("RegionAverages: unknown region");
        return it->second;
    }

private:
    std::size_t level_index(int s1, int s2) const
    {
        return static_cast<std::size_t>(s1) * (grid_.levels2 + 1) + s2;
    }

    static std::uint64_t key(const Region& r)
    {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r.i0)) << 48)
            | (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r.i1) & 0xffffu) << 32)
            | (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r.j0) & 0xffffu) << 16)
            | (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r.j1) & 0xffffu));
    }

    void build_pyramid(const SetField& f, const ApproxBudget& budget)
    {
        const int l1 = grid_.levels1, l2 = grid_.levels2;
        pyramid_.assign(static_cast<std::size_t>(l1 + 1) * (l2 + 1), {});

        auto& base = pyramid_[level_index(0, 0)];
        base.resize(static_cast<std::size_t>(grid_.cell_count()));
        for (long c = 0; c < grid_.cell_count(); ++c)
            base[static_cast<std::size_t>(c)] = f.at(c);

        const std::vector<double> halves{0.5, 0.5};
        // Aggregate along axis 2 first, then axis 1 for every axis-2 level.
        for (int s2 = 1; s2 <= l2; ++s2) {
            const auto& child = pyramid_[level_index(0, s2 - 1)];
            auto& level = pyramid_[level_index(0, s2)];
            const long b1 = grid_.n1();
            const long b2 = grid_.n2() >> s2;
            level.resize(static_cast<std::size_t>(b1 * b2));
            for (long i = 0; i < b1; ++i)
                for (long j = 0; j < b2; ++j)
                    level[static_cast<std::size_t>(i * b2 + j)] =
                        minkowski_avg({child[static_cast<std::size_t>(i * (b2 * 2) + 2 * j)],
                                       child[static_cast<std::size_t>(i * (b2 * 2) + 2 * j + 1)]},
                                      halves, budget);
        }
        for (int s2 = 0; s2 <= l2; ++s2) {
            for (int s1 = 1; s1 <= l1; ++s1) {
                const auto& child = pyramid_[level_index(s1 - 1, s2)];
                auto& level = pyramid_[level_index(s1, s2)];
                const long b1 = grid_.n1() >> s1;
                const long b2 = grid_.n2() >> s2;
                level.resize(static_cast<std::size_t>(b1 * b2));
                for (long i = 0; i < b1; ++i)
                    for (long j = 0; j < b2; ++j)
                        level[static_cast<std::size_t>(i * b2 + j)] =
                            minkowski_avg({child[static_cast<std::size_t>((2 * i) * b2 + j)],
                                           child[static_cast<std::size_t>((2 * i + 1) * b2 + j)]},
                                          halves, budget);
            }
        }
    }

    void build_all_rectangles(const SetField& f, const ApproxBudget& budget)
    {
        const int n1 = grid_.n1(), n2 = grid_.n2();
        if (n1 > 16 || n2 > 16)
            throw std::invalid_argument("all-rectangles set averages are capped at 16x16 grids");

        // Row strips [i,i+1) x [j0,j1), extended one cell at a time.
        std::unordered_map<std::uint64_t, SymBody> strips;
        for (int i = 0; i < n1; ++i) {
            for (int j0 = 0; j0 < n2; ++j0) {
                SymBody acc = f.at(i, j0);
                strips.emplace(key(Region{i, i + 1, j0, j0 + 1}), acc);
                for (int j1 = j0 + 2; j1 <= n2; ++j1) {
                    const int len = j1 - j0;
                    acc = minkowski_avg({acc, f.at(i, j1 - 1)},
                                        {static_cast<double>(len - 1) / len, 1.0 / len}, budget);
                    strips.emplace(key(Region{i, i + 1, j0, j1}), acc);
                }
            }
        }
        for (int j0 = 0; j0 < n2; ++j0) {
            for (int j1 = j0 + 1; j1 <= n2; ++j1) {
                for (int i0 = 0; i0 < n1; ++i0) {
                    SymBody acc = strips.at(key(Region{i0, i0 + 1, j0, j1}));
                    general_.emplace(key(Region{i0, i0 + 1, j0, j1}), acc);
                    for (int i1 = i0 + 2; i1 <= n1; ++i1) {
                        const int h = i1 - i0;
                        acc = minkowski_avg({acc, strips.at(key(Region{i1 - 1, i1, j0, j1}))},
                                            {static_cast<double>(h - 1) / h, 1.0 / h}, budget);
                        general_.emplace(key(Region{i0, i1, j0, j1}), acc);
                    }
                }
            }
        }
    }

    Grid grid_;
    std::vector<std::vector<SymBody>> pyramid_;
    std::unordered_map<std::uint64_t, SymBody> general_;
};

} // namespace

ScalarField scalar_max(const ScalarField& s, const MaxParams& params)
{
    const PrefixTable table(abs_field(s));
    const RegionFamily fam{s.grid(), params.family};
    ScalarField out(s.grid());
    const int n2 = s.grid().n2();
    parallel_for(s.grid().cell_count(), [&](std::int64_t c) {
        const int i = static_cast<int>(c / n2);
        const int j = static_cast<int>(c % n2);
        out.set(c, max_average_over(table, regions_containing(fam, i, j)));
    });
    return out;
}

ScalarField cg_max(const WeightField& w, const VectorField& f, const MaxParams& params)
{
    if (!(w.grid() == f.grid()) || w.dim() != f.dim())
        throw std::invalid_argument("cg_max: shape mismatch");
    const Grid& g = w.grid();
    const long n = g.cell_count();
    const int n2 = g.n2();

    // h(y) = W(y)^{-1} f(y), shared across all evaluation cells.
    VectorField h(g, f.dim());
    for (long y = 0; y < n; ++y)
        h.set(y, w.inverse_at(y) * f.at(y));

    const RegionFamily fam{g, params.family};
    ScalarField out(g);
    parallel_for(n, [&](std::int64_t x) {
        const Matrix wx = w.at(x);
        ScalarField gx(g);
        for (long y = 0; y < n; ++y)
            gx.set(y, (wx * h.at(y)).norm());
        const PrefixTable table(gx);
        const int i = static_cast<int>(x / n2);
        const int j = static_cast<int>(x % n2);
        out.set(x, max_average_over(table, regions_containing(fam, i, j)));
    });
    return out;
}

SetField set_max(const SetField& f, const MaxParams& params)
{
    const Grid& g = f.grid();
    const RegionAverages averages(f, params.family, params.budget);
    const RegionFamily fam{g, params.family};
    SetField out(g, f.dim());
    const int n2 = g.n2();
    std::vector<SymBody> results(static_cast<std::size_t>(g.cell_count()));
    parallel_for(g.cell_count(), [&](std::int64_t c) {
        const int i = static_cast<int>(c / n2);
        const int j = static_cast<int>(c % n2);
        std::vector<SymBody> bodies;
        for (const Region& r : regions_containing(fam, i, j))
            bodies.push_back(averages.at(r));
        results[static_cast<std::size_t>(c)] = hull_union(bodies, params.budget);
    });
    for (long c = 0; c < g.cell_count(); ++c)
        out.set(c, std::move(results[static_cast<std::size_t>(c)]));
    return out;
}

SetField set_max_axis(const SetField& f, int axis, const ApproxBudget& budget)
{
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("set_max_axis: axis must be 1 or 2");
    MaxParams params;
    params.family = axis == 1 ? RegionFamilyKind::axis1_intervals : RegionFamilyKind::axis2_intervals;
    params.budget = budget;
    return set_max(f, params);
}

SetField iterate_set_max(const SetField& f, int k, const MaxParams& params)
{
    if (k < 1 || k > 8)
        throw std::invalid_argument("iterate_set_max: k must be in [1, 8]");
    SetField out = f;
    for (int it = 0; it < k; ++it)
        out = set_max(out, params);
    return out;
}

ScalarField weighted_set_max_magnitude(const WeightField& w, const SetField& f, const MaxParams& params)
{
    if (!(w.grid() == f.grid()) || w.dim() != f.dim())
        throw std::invalid_argument("weighted_set_max_magnitude: shape mismatch");
    const Grid& g = w.grid();

    // G(y) = W(y)^{-1} F(y); its region averages are shared across cells.
    SetField ginv(g, f.dim());
    for (long y = 0; y < g.cell_count(); ++y)
        ginv.set(y, linear_image(w.inverse_at(y), f.at(y)));
    const RegionAverages averages(ginv, params.family, params.budget);

    const RegionFamily fam{g, params.family};
    ScalarField out(g);
    const int n2 = g.n2();
    parallel_for(g.cell_count(), [&](std::int64_t c) {
        const int i = static_cast<int>(c / n2);
        const int j = static_cast<int>(c % n2);
        const Matrix wx = w.at(c);
        double best = 0.0;
        for (const Region& r : regions_containing(fam, i, j))
            best = std::max(best, magnitude(linear_image(wx, averages.at(r))));
        out.set(c, best);
    });
    return out;
}

} // namespace matmax
