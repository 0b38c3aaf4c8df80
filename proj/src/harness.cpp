#include "matmax/harness.hpp"

#include "matmax/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace matmax {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Suites that assert exact-in-theory statements run the convex calculus with
// the vertex cap disabled so no approximation widens or tightens a bound.
const MaxParams kExactRect{RegionFamilyKind::dyadic_rectangles, ApproxBudget::unlimited()};

Grid random_grid(int max_levels1, int max_levels2, Rng& rng)
{
    return make_grid(rng.uniform_int(max_levels1 + 1), rng.uniform_int(max_levels2 + 1));
}

struct SlackTracker {
    CheckResult result;

    explicit SlackTracker(std::string name, double tol)
    {
        result.name = std::move(name);
        result.tolerance = tol;
        result.worst_slack = -kInf;
    }

    void observe(double slack, const std::function<json()>& witness)
    {
        result.worst_slack = std::max(result.worst_slack, slack);
        if (slack > result.tolerance) {
            ++result.failures;
            if (result.witness.empty())
                result.witness = witness().dump();
        }
    }

    CheckResult take(int trials)
    {
        result.trials = trials;
        if (result.worst_slack == -kInf)
            result.worst_slack = 0.0;
        return result;
    }
};

json doc_witness(const Grid& grid, int d, const WeightField* w, const VectorField* f, const SetField* bodies)
{
    FieldDoc doc;
    doc.grid = grid;
    doc.d = d;
    if (w)
        doc.weight = *w;
    if (f)
        doc.f = *f;
    if (bodies)
        doc.bodies = *bodies;
    return field_doc_json(doc);
}

} // namespace

VectorField random_vector_field(const Grid& grid, int d, Rng& rng)
{
    VectorField f(grid, d);
    double maxabs = 0.0;
    for (long c = 0; c < grid.cell_count(); ++c) {
        Vec v(d);
        for (int k = 0; k < d; ++k) {
            v[k] = rng.normal();
            maxabs = std::max(maxabs, std::abs(v[k]));
        }
        f.set(c, v);
    }
    if (maxabs > 0.0)
        for (long c = 0; c < grid.cell_count(); ++c)
            f.set(c, f.at(c) * (1.0 / maxabs));
    return f;
}

ScalarField random_scalar_field(const Grid& grid, Rng& rng)
{
    ScalarField s(grid);
    double maxabs = 0.0;
    for (long c = 0; c < grid.cell_count(); ++c) {
        const double x = rng.normal();
        maxabs = std::max(maxabs, std::abs(x));
        s.set(c, x);
    }
    if (maxabs > 0.0)
        for (long c = 0; c < grid.cell_count(); ++c)
            s.set(c, s.at(c) / maxabs);
    return s;
}

WeightField random_weight_field(const Grid& grid, int d, Rng& rng, double cond_cap)
{
    WeightParams params;
    params.d = d;
    params.cond_cap = cond_cap;
    params.sigma = 0.5;
    const int kind = rng.uniform_int(5);
    const std::uint64_t seed = rng.next_u64();
    switch (kind) {
    case 0: {
        // Constant random SPD cell, drawn from the log-SPD generator.
        WeightParams one = params;
        const WeightField cell = gen_weight(WeightKind::random_log_spd, one, make_grid(0, 0), seed);
        params.base = cell.at(0L);
        return gen_weight(WeightKind::constant, params, grid, seed);
    }
    case 1:
        return gen_weight(WeightKind::two_block, params, grid, seed);
    case 2:
        params.alpha1 = rng.uniform(-0.45, 0.45);
        params.alpha2 = rng.uniform(-0.45, 0.45);
        return gen_weight(WeightKind::diagonal_power, params, grid, seed);
    case 3:
        if (d >= 2) {
            params.lambda = std::exp(rng.uniform(0.0, 1.2));
            params.theta1 = rng.uniform(0.0, 6.0);
            params.theta2 = rng.uniform(0.0, 6.0);
            return gen_weight(WeightKind::rotating_frame, params, grid, seed);
        }
        [[fallthrough]];
    default:
        return gen_weight(WeightKind::random_log_spd, params, grid, seed);
    }
}

SetField random_set_field(const Grid& grid, int d, Rng& rng)
{
    SetField f(grid, d);
    for (long c = 0; c < grid.cell_count(); ++c) {
        const int shape = rng.uniform_int(3);
        auto rand_vec = [&] {
            Vec v(d);
            for (int k = 0; k < d; ++k)
                v[k] = rng.normal();
            return v * 0.5;
        };
        if (d == 2 && shape == 1) {
            f.set(c, SymBody::polygon({rand_vec(), rand_vec()}));
        } else if (shape == 2) {
            std::vector<Vec> gens;
            const int m = 1 + rng.uniform_int(3);
            for (int k = 0; k < m; ++k)
                gens.push_back(rand_vec() * (1.0 / m));
            f.set(c, SymBody::zonotope(d, std::move(gens)));
        } else {
            f.set(c, SymBody::segment(rand_vec()));
        }
    }
    return f;
}

Region random_region(const Grid& grid, Rng& rng)
{
    const int i0 = rng.uniform_int(grid.n1());
    const int j0 = rng.uniform_int(grid.n2());
    const int i1 = i0 + 1 + rng.uniform_int(grid.n1() - i0);
    const int j1 = j0 + 1 + rng.uniform_int(grid.n2() - j0);
    return Region{i0, i1, j0, j1};
}

SetField segment_field(const VectorField& f)
{
    SetField out(f.grid(), f.dim());
    for (long c = 0; c < f.grid().cell_count(); ++c)
        out.set(c, SymBody::segment(f.at(c)));
    return out;
}

WeightField identity_weight(const Grid& grid, int d)
{
    return WeightField(grid, d,
                       std::vector<Matrix>(static_cast<std::size_t>(grid.cell_count()), Matrix::identity(d)));
}

// ---- suites ---------------------------------------------------------------

CheckResult verify_lemma2(int trials, const std::vector<int>& dims, std::uint64_t seed, double tol)
{
    if (trials < 1)
        throw std::invalid_argument("verify_lemma2: trials must be >= 1");
    SlackTracker tracker("body-average-sandwich", tol);
    Rng rng(seed);
    int total = 0;
    for (int d : dims) {
        for (int t = 0; t < trials; ++t, ++total) {
            const Grid grid = random_grid(4, 4, rng);
            const VectorField f = random_vector_field(grid, d, rng);
            const Region e = random_region(grid, rng);
            const double avg_mag = average_scalar(magnitude_field(f), e);
            const double mid = magnitude(body_average(f, e));
            const double slack = std::max(avg_mag / d - mid, mid - avg_mag);
            tracker.observe(slack, [&] {
                return json{{"trial", t},
                            {"d", d},
                            {"region", {e.i0, e.i1, e.j0, e.j1}},
                            {"avg_mag", avg_mag},
                            {"body_avg_mag", mid},
                            {"doc", doc_witness(grid, d, nullptr, &f, nullptr)}};
            });
        }
    }
    return tracker.take(total);
}

CheckResult verify_domination_scalar(int max_levels1, int max_levels2, int trials, std::uint64_t seed,
                                     double tol)
{
    SlackTracker tracker("scalar-strong-domination", tol);
    Rng rng(seed);

    const MaxParams rect{RegionFamilyKind::dyadic_rectangles, {}};
    const MaxParams ax1{RegionFamilyKind::axis1_intervals, {}};
    const MaxParams ax2{RegionFamilyKind::axis2_intervals, {}};

    // Exact indicator case on the 2x2 grid: values 1, 1/2, 1/2, 1/4.
    {
        const Grid g22 = make_grid(1, 1);
        ScalarField ind(g22);
        ind.set(0, 0, 1.0);
        const ScalarField ms = scalar_max(ind, rect);
        const double expect[2][2] = {{1.0, 0.5}, {0.5, 0.25}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                tracker.observe(std::abs(ms.at(i, j) - expect[i][j]), [&] {
                    return json{{"case", "indicator-2x2"}, {"cell", {i, j}}, {"value", ms.at(i, j)}};
                });
    }

    for (int t = 0; t < trials; ++t) {
        const Grid grid = random_grid(max_levels1, max_levels2, rng);
        const ScalarField s = random_scalar_field(grid, rng);
        const ScalarField ms = scalar_max(s, rect);
        const ScalarField m2 = scalar_max(s, ax2);
        const ScalarField m1m2 = scalar_max(m2, ax1);
        double slack = -kInf;
        long argcell = 0;
        for (long c = 0; c < grid.cell_count(); ++c) {
            const double v = ms.at(c) - m1m2.at(c);
            if (v > slack) {
                slack = v;
                argcell = c;
            }
        }
        tracker.observe(slack, [&] {
            return json{{"trial", t},
                        {"cell", argcell},
                        {"ms", ms.at(argcell)},
                        {"m1m2", m1m2.at(argcell)},
                        {"doc", json{{"levels1", grid.levels1}, {"levels2", grid.levels2}, {"s", s.values()}}}};
        });
    }
    return tracker.take(trials + 1);
}

CheckResult verify_domination_set(int levels1, int levels2, int trials, std::uint64_t seed, double tol)
{
    if (levels1 > 5 || levels2 > 5)
        throw std::invalid_argument("verify_domination_set: set-valued grids are capped at 32x32");
    SlackTracker tracker("set-strong-domination", tol);
    Rng rng(seed);
    const Grid grid = make_grid(levels1, levels2);
    for (int t = 0; t < trials; ++t) {
        const SetField f = random_set_field(grid, 2, rng);
        const SetField ms = set_max(f, kExactRect);
        const SetField m2 = set_max_axis(f, 2, ApproxBudget::unlimited());
        const SetField m1m2 = set_max_axis(m2, 1, ApproxBudget::unlimited());
        double slack = -kInf;
        long argcell = 0;
        for (long c = 0; c < grid.cell_count(); ++c) {
            const double gap = containment_gap(m1m2.at(c), ms.at(c)) - m1m2.at(c).defect() - ms.at(c).defect();
            if (gap > slack) {
                slack = gap;
                argcell = c;
            }
        }
        tracker.observe(slack, [&] {
            return json{{"trial", t}, {"cell", argcell}, {"doc", doc_witness(grid, 2, nullptr, nullptr, &f)}};
        });
    }
    return tracker.take(trials);
}

CheckResult verify_equivalence(const WeightField& w, const VectorField& f, std::uint64_t seed, double tol)
{
    SlackTracker tracker("weighted-set-magnitude-sandwich", tol);
    const int d = w.dim();
    const SetField segs = segment_field(f);
    const ScalarField g = weighted_set_max_magnitude(w, segs, kExactRect);
    const ScalarField cg = cg_max(w, f, kExactRect);

    const Grid& grid = w.grid();
    for (long c = 0; c < grid.cell_count(); ++c) {
        const double lower = cg.at(c) / d - g.at(c); // cg/d <= g
        const double upper = g.at(c) - cg.at(c);     // g <= cg
        tracker.observe(std::max(lower, upper), [&] {
            return json{{"cell", c},
                        {"g", g.at(c)},
                        {"cg", cg.at(c)},
                        {"doc", doc_witness(grid, d, &w, &f, nullptr)}};
        });
    }

    // Sampled selections only bound g from below.
    for (int s = 0; s < 3; ++s) {
        const Selection sel = sample_selection(segs, seed + static_cast<std::uint64_t>(s));
        const ScalarField cgs = cg_max(w, sel.values, kExactRect);
        for (long c = 0; c < grid.cell_count(); ++c)
            tracker.observe(cgs.at(c) / d - g.at(c), [&] {
                return json{{"cell", c}, {"selection", s}, {"doc", doc_witness(grid, d, &w, &f, nullptr)}};
            });
    }
    return tracker.take(static_cast<int>(grid.cell_count()) * 4);
}

CheckResult verify_equivalence_set(const WeightField& w, const SetField& bodies, std::uint64_t seed,
                                   double tol)
{
    SlackTracker tracker("weighted-set-magnitude-sandwich", tol);
    const int d = w.dim();
    const ScalarField g = weighted_set_max_magnitude(w, bodies, kExactRect);
    const Grid& grid = w.grid();
    int trials = 0;
    for (int s = 0; s < 5; ++s) {
        const Selection sel = sample_selection(bodies, seed + static_cast<std::uint64_t>(s));
        const ScalarField cgs = cg_max(w, sel.values, kExactRect);
        for (long c = 0; c < grid.cell_count(); ++c, ++trials)
            tracker.observe(cgs.at(c) / d - g.at(c), [&] {
                return json{{"cell", c}, {"selection", s}, {"doc", doc_witness(grid, d, &w, nullptr, &bodies)}};
            });
    }
    return tracker.take(trials);
}

CheckResult verify_equivalence_random(int levels1, int levels2, int d, int trials, std::uint64_t seed,
                                      double tol)
{
    SlackTracker tracker("weighted-set-magnitude-sandwich", tol);
    Rng rng(seed);
    const Grid grid = make_grid(levels1, levels2);
    for (int t = 0; t < trials; ++t) {
        const WeightField w = random_weight_field(grid, d, rng);
        const VectorField f = random_vector_field(grid, d, rng);
        const CheckResult one = verify_equivalence(w, f, rng.next_u64(), tol);
        tracker.observe(one.worst_slack, [&] { return json::parse(one.witness.empty() ? "{}" : one.witness); });
    }
    return tracker.take(trials);
}

CheckResult verify_linfty_bound(const WeightField& w, const SetField& bodies, double tol)
{
    SlackTracker tracker("weighted-linfty-bound", tol);
    const SetField ms = set_max(bodies, kExactRect);
    const double lhs = lp_norm_set(w, ms, kInf);
    const double apinf = ap_constant(w, kInf, RegionFamilyKind::dyadic_rectangles).value;
    const double rhs = apinf * lp_norm_set(w, bodies, kInf);
    tracker.observe(lhs - rhs, [&] {
        return json{{"lhs", lhs},
                    {"ap_inf", apinf},
                    {"rhs", rhs},
                    {"doc", doc_witness(w.grid(), w.dim(), &w, nullptr, &bodies)}};
    });
    return tracker.take(1);
}

CheckResult verify_linfty_random(int levels1, int levels2, int d, int trials, std::uint64_t seed,
                                 double tol)
{
    SlackTracker tracker("weighted-linfty-bound", tol);
    Rng rng(seed);
    const Grid grid = make_grid(levels1, levels2);
    for (int t = 0; t < trials; ++t) {
        const WeightField w = random_weight_field(grid, d, rng);
        const SetField f = random_set_field(grid, d, rng);
        const CheckResult one = verify_linfty_bound(w, f, tol);
        tracker.observe(one.worst_slack, [&] { return json::parse(one.witness.empty() ? "{}" : one.witness); });
    }
    return tracker.take(trials);
}

CheckResult verify_identity_collapse(int max_levels1, int max_levels2, int trials, std::uint64_t seed,
                                     double tol)
{
    SlackTracker tracker("identity-collapse", tol);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const Grid grid = random_grid(max_levels1, max_levels2, rng);
        const int d = 1 + rng.uniform_int(3);
        const VectorField f = random_vector_field(grid, d, rng);
        const WeightField eye = identity_weight(grid, d);
        const ScalarField lhs = cg_max(eye, f, MaxParams{});
        const ScalarField rhs = scalar_max(magnitude_field(f), MaxParams{});
        double slack = 0.0;
        for (long c = 0; c < grid.cell_count(); ++c)
            slack = std::max(slack, std::abs(lhs.at(c) - rhs.at(c)));
        tracker.observe(slack, [&] {
            return json{{"trial", t}, {"doc", doc_witness(grid, d, nullptr, &f, nullptr)}};
        });
    }
    return tracker.take(trials);
}

CheckResult verify_scalar_factorization(int levels1, int levels2, int trials, std::uint64_t seed,
                                        double tol)
{
    SlackTracker tracker("scalar-factorization", tol);
    Rng rng(seed);
    const Grid grid = make_grid(levels1, levels2);
    for (int t = 0; t < trials; ++t) {
        // Scalar weight with a mild condition cap keeps magnitudes near 1.
        std::vector<Matrix> cells(static_cast<std::size_t>(grid.cell_count()), Matrix::identity(1));
        for (auto& m : cells)
            m(0, 0) = std::clamp(std::exp(0.8 * rng.normal()), 0.1, 10.0);
        const WeightField w(grid, 1, cells);
        const VectorField f = random_vector_field(grid, 1, rng);

        const ScalarField cg = cg_max(w, f, MaxParams{});
        ScalarField ratio(grid);
        for (long c = 0; c < grid.cell_count(); ++c)
            ratio.set(c, std::abs(f.at(c)[0]) / w.at(c)(0, 0));
        const ScalarField m = scalar_max(ratio, MaxParams{});
        double slack = 0.0;
        for (long c = 0; c < grid.cell_count(); ++c)
            slack = std::max(slack, std::abs(cg.at(c) - w.at(c)(0, 0) * m.at(c)));
        tracker.observe(slack, [&] {
            return json{{"trial", t}, {"doc", doc_witness(grid, 1, &w, &f, nullptr)}};
        });
    }
    return tracker.take(trials);
}

CheckResult verify_ap_constants(int trials, std::uint64_t seed, double tol)
{
    // Each case has its own allowance; slacks are recorded as the excess
    // over it, so the suite tolerance defaults to 0.
    SlackTracker tracker("ap-constants", tol);
    Rng rng(seed);
    const std::vector<double> ps{1.0, 1.5, 2.0, 4.0, kInf};
    int cases = 0;

    // Constant weights give exactly 1 for every p and family.
    {
        const Grid grid = make_grid(2, 1);
        for (const Matrix& base : {Matrix::identity(2), Matrix::diag({2.0, 1.0})}) {
            WeightParams params;
            params.d = 2;
            params.base = base;
            const WeightField w = gen_weight(WeightKind::constant, params, grid, 1);
            for (double p : ps)
                for (auto family : {RegionFamilyKind::dyadic_cubes, RegionFamilyKind::dyadic_rectangles,
                                    RegionFamilyKind::all_rectangles}) {
                    const double v = ap_constant(w, p, family).value;
                    ++cases;
                    tracker.observe(std::abs(v - 1.0), [&] {
                        return json{{"case", "constant"}, {"p", p}, {"family", family_name(family)}, {"value", v}};
                    });
                }
        }
    }

    // Two-cell scalar weight (1, 2): closed form 1.25 at p = 2.
    {
        const Grid grid = make_grid(1, 0);
        std::vector<Matrix> cells{Matrix::diag({1.0}), Matrix::diag({2.0})};
        const WeightField w(grid, 1, cells);
        const double v = ap_constant(w, 2.0, RegionFamilyKind::dyadic_rectangles).value;
        ++cases;
        tracker.observe(std::abs(v - 1.25) - 1e-12, [&] {
            return json{{"case", "two-cell"}, {"value", v}};
        });
    }

    // Two-block d = 2 weight: sqrt(2.5) at p = 2.
    {
        const Grid grid = make_grid(2, 2);
        WeightParams params;
        params.d = 2;
        const WeightField w = gen_weight(WeightKind::two_block, params, grid, 1);
        const double v = ap_constant(w, 2.0, RegionFamilyKind::dyadic_rectangles).value;
        ++cases;
        tracker.observe(std::abs(v - std::sqrt(2.5)) - 1e-10, [&] {
            return json{{"case", "two-block"}, {"value", v}};
        });
    }

    // Family monotonicity on random weights; nested families make this exact.
    for (int t = 0; t < trials; ++t) {
        const Grid grid = make_grid(1 + rng.uniform_int(2), 1 + rng.uniform_int(2));
        const int d = 1 + rng.uniform_int(2);
        const WeightField w = random_weight_field(grid, d, rng);
        const double p = std::vector<double>{1.0, 1.5, 2.0, 3.0, kInf}[static_cast<std::size_t>(rng.uniform_int(5))];
        const double cubes = ap_constant(w, p, RegionFamilyKind::dyadic_cubes).value;
        const double rects = ap_constant(w, p, RegionFamilyKind::dyadic_rectangles).value;
        const double all = ap_constant(w, p, RegionFamilyKind::all_rectangles).value;
        const double slack = std::max(cubes - rects, rects - all);
        ++cases;
        tracker.observe(slack, [&] {
            return json{{"case", "monotonicity"}, {"p", p}, {"cubes", cubes}, {"rects", rects}, {"all", all}};
        });
    }
    return tracker.take(cases);
}

CheckResult verify_hull_zonotope(int trials, std::uint64_t seed, double tol)
{
    SlackTracker tracker("hull-zonotope-algebra", tol);
    Rng rng(seed);

    // magnitude(hull_union(L)) = max of member magnitudes.
    const int hull_trials = std::max(trials, 1);
    for (int t = 0; t < hull_trials; ++t) {
        std::vector<SymBody> bodies;
        const int n = 1 + rng.uniform_int(5);
        double expect = 0.0;
        for (int k = 0; k < n; ++k) {
            auto rv = [&] {
                Vec v(2);
                v[0] = rng.normal();
                v[1] = rng.normal();
                return v;
            };
            SymBody b = rng.coin() ? SymBody::polygon({rv(), rv(), rv()}) : SymBody::zonotope(2, {rv(), rv()});
            expect = std::max(expect, magnitude(b));
            bodies.push_back(std::move(b));
        }
        const double got = magnitude(hull_union(bodies, ApproxBudget::unlimited()));
        tracker.observe(std::abs(got - expect), [&] {
            return json{{"case", "hull-magnitude"}, {"expect", expect}, {"got", got}};
        });
    }

    // Zonotope magnitude against the 2^m corner oracle.
    const int corner_trials = std::max(trials / 2, 1);
    for (int t = 0; t < corner_trials; ++t) {
        const int m = 1 + rng.uniform_int(12);
        std::vector<Vec> gens;
        for (int k = 0; k < m; ++k) {
            Vec g(2);
            g[0] = rng.normal();
            g[1] = rng.normal();
            gens.push_back(g * (1.0 / m));
        }
        double oracle = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            Vec c(2);
            for (int k = 0; k < m; ++k)
                c = c + gens[static_cast<std::size_t>(k)] * ((mask >> k) & 1u ? -1.0 : 1.0);
            oracle = std::max(oracle, c.norm());
        }
        const double got = magnitude(SymBody::zonotope(2, gens));
        tracker.observe(std::abs(got - oracle), [&] {
            return json{{"case", "corner-oracle"}, {"m", m}, {"oracle", oracle}, {"got", got}};
        });
    }
    return tracker.take(hull_trials + corner_trials);
}

// ---- registry ---------------------------------------------------------------

std::vector<std::string> all_check_names()
{
    return {"body-average-sandwich", "scalar-strong-domination", "set-strong-domination",
            "weighted-set-magnitude-sandwich", "weighted-linfty-bound", "identity-collapse",
            "scalar-factorization", "ap-constants", "hull-zonotope-algebra"};
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& names, const VerifyConfig& cfg)
{
    std::vector<std::string> todo = names.empty() ? all_check_names() : names;
    std::sort(todo.begin(), todo.end());
    auto tol = [&](double pinned) { return cfg.tol.value_or(pinned); };
    std::vector<CheckResult> out;
    for (const std::string& name : todo) {
        if (name == "body-average-sandwich") {
            out.push_back(verify_lemma2(cfg.trials, {2, 3}, cfg.seed, tol(1e-9)));
        } else if (name == "scalar-strong-domination") {
            out.push_back(verify_domination_scalar(std::max(cfg.levels1, 5), std::max(cfg.levels2, 5),
                                                   cfg.trials, cfg.seed, tol(1e-10)));
        } else if (name == "set-strong-domination") {
            out.push_back(verify_domination_set(cfg.levels1, cfg.levels2, std::max(cfg.trials / 2, 1),
                                                cfg.seed, tol(1e-9)));
        } else if (name == "weighted-set-magnitude-sandwich") {
            out.push_back(verify_equivalence_random(cfg.levels1, cfg.levels2, cfg.d,
                                                    std::max(cfg.trials / 2, 1), cfg.seed, tol(1e-9)));
        } else if (name == "weighted-linfty-bound") {
            out.push_back(verify_linfty_random(cfg.levels1, cfg.levels2, cfg.d,
                                               std::max(cfg.trials / 2, 1), cfg.seed, tol(1e-9)));
        } else if (name == "identity-collapse") {
            out.push_back(verify_identity_collapse(5, 5, cfg.trials, cfg.seed, tol(1e-12)));
        } else if (name == "scalar-factorization") {
            out.push_back(verify_scalar_factorization(5, 5, cfg.trials, cfg.seed, tol(1e-10)));
        } else if (name == "ap-constants") {
            out.push_back(verify_ap_constants(std::max(cfg.trials / 2, 1), cfg.seed, tol(0.0)));
        } else if (name == "hull-zonotope-algebra") {
            out.push_back(verify_hull_zonotope(cfg.trials * 5, cfg.seed, tol(1e-12)));
        } else {
            throw std::invalid_argument("unknown check: " + name);
        }
    }
    return out;
}

std::string check_table(const std::vector<CheckResult>& results)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %8s %9s %12s %22s %s\n", "check", "trials", "failures",
                  "tolerance", "worst-slack", "status");
    out << line;
    for (const CheckResult& r : results) {
        std::snprintf(line, sizeof line, "%-34s %8d %9d %12g %22.17g %s\n", r.name.c_str(), r.trials,
                      r.failures, r.tolerance, r.worst_slack, r.passed() ? "PASS" : "FAIL");
        out << line;
    }
    return out.str();
}

nlohmann::json check_results_json(const std::vector<CheckResult>& results)
{
    json arr = json::array();
    for (const CheckResult& r : results) {
        json j{{"name", r.name},
               {"trials", r.trials},
               {"failures", r.failures},
               {"tolerance", r.tolerance},
               {"worst_slack", r.worst_slack},
               {"passed", r.passed()}};
        if (!r.witness.empty())
            j["witness"] = json::parse(r.witness);
        arr.push_back(std::move(j));
    }
    return arr;
}

// ---- norm ratios -------------------------------------------------------------

std::vector<double> default_q_sweep(double p, double q_from, double q_to, int steps)
{
    if (steps < 1)
        throw std::invalid_argument("default_q_sweep: steps must be >= 1");
    if (std::isinf(p))
        throw std::invalid_argument("default_q_sweep: sweeps need finite p");
    const double lo = q_from > 0.0 ? q_from : std::max(1.1, p - 0.5);
    const double hi = q_to > 0.0 ? q_to : p + 0.5;
    if (hi < lo)
        throw std::invalid_argument("default_q_sweep: empty range");
    std::vector<double> qs;
    for (int k = 0; k < steps; ++k)
        qs.push_back(steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1));
    return qs;
}

NormRatioReport norm_ratio_report(const WeightField& w, const VectorField* f, const SetField* bodies,
                                  const NormRatioOptions& opt)
{
    const bool scalar_op = opt.op == "m" || opt.op == "ms";
    const bool cg_op = opt.op == "mw" || opt.op == "mws";
    const bool set_op = opt.op == "mk" || opt.op == "mks";
    if (!scalar_op && !cg_op && !set_op)
        throw std::invalid_argument("norm_ratio_report: unknown operator " + opt.op);
    if ((scalar_op || cg_op) && !f)
        throw std::invalid_argument("norm_ratio_report: operator needs a vector field");
    if (set_op && !bodies)
        throw std::invalid_argument("norm_ratio_report: operator needs a set field");
    if (!(opt.p > 1.0))
        throw std::invalid_argument("norm_ratio_report: p must be in (1, inf]");

    const bool strong = opt.op == "ms" || opt.op == "mws" || opt.op == "mks";
    NormRatioReport rep;
    rep.op = opt.op;
    rep.p = opt.p;
    rep.family = strong ? RegionFamilyKind::dyadic_rectangles : RegionFamilyKind::dyadic_cubes;
    rep.bound_expr = cg_op || set_op ? (strong ? "[W]_Ap^(2p')" : "[W]_Ap^(p')") : "";

    MaxParams params;
    params.family = rep.family;
    params.budget = ApproxBudget::unlimited();

    // The operator output is q-independent; compute it once.
    ScalarField out_scalar;
    SetField out_set;
    ScalarField in_scalar;
    if (scalar_op) {
        in_scalar = magnitude_field(*f);
        out_scalar = scalar_max(in_scalar, params);
    } else if (cg_op) {
        in_scalar = magnitude_field(*f);
        out_scalar = cg_max(w, *f, params);
    } else {
        out_set = set_max(*bodies, params);
        for (int flag : out_set.approx_flags())
            rep.approx_cells += flag;
    }

    std::vector<double> qs = opt.qs.empty() ? std::vector<double>{opt.p} : opt.qs;
    for (double q : qs)
        if (!(q > 1.0))
            throw std::invalid_argument("norm_ratio_report: q must be in (1, inf]");

    // One region sweep covers every exponent of the sweep.
    std::vector<ApReport> aps;
    if (cg_op || set_op)
        aps = ap_constant_multi(w, qs, rep.family);

    for (std::size_t k = 0; k < qs.size(); ++k) {
        const double q = qs[k];
        NormRatioRow row;
        row.q = q;
        if (set_op) {
            row.input_norm = lp_norm_set(w, *bodies, q);
            row.output_norm = lp_norm_set(w, out_set, q);
        } else {
            row.input_norm = lp_norm_scalar(in_scalar, q);
            row.output_norm = lp_norm_scalar(out_scalar, q);
        }
        row.ratio = row.input_norm > 0.0 ? row.output_norm / row.input_norm
                                         : (row.output_norm > 0.0 ? kInf : 0.0);
        if (cg_op || set_op) {
            const ApReport& ap = aps[k];
            row.ap_value = ap.value;
            row.ap_infinite = ap.infinite;
            const double expo = std::isinf(q) ? 1.0 : (strong ? 2.0 : 1.0) * q / (q - 1.0);
            row.bound = ap.infinite ? kInf : std::pow(ap.value, expo);
            row.bound_satisfied = std::isfinite(row.bound) && std::isfinite(row.ratio)
                                      ? (row.ratio <= row.bound ? 1 : 0)
                                      : -1;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::string norm_ratio_csv(const NormRatioReport& rep)
{
    std::ostringstream out;
    out << "op,q,input_norm,output_norm,ratio,ap_constant,bound,bound_satisfied\n";
    for (const NormRatioRow& r : rep.rows) {
        out << rep.op << ',' << format_float(r.q) << ',' << format_float(r.input_norm) << ','
            << format_float(r.output_norm) << ',' << format_float(r.ratio) << ','
            << (r.ap_infinite ? "inf" : format_float(r.ap_value)) << ',' << format_float(r.bound) << ','
            << r.bound_satisfied << '\n';
    }
    return out.str();
}

nlohmann::json norm_ratio_json(const NormRatioReport& rep)
{
    json rows = json::array();
    for (const NormRatioRow& r : rep.rows)
        rows.push_back(json{{"q", r.q},
                            {"input_norm", r.input_norm},
                            {"output_norm", r.output_norm},
                            {"ratio", r.ratio},
                            {"ap_constant", r.ap_infinite ? json("inf") : json(r.ap_value)},
                            {"bound", std::isfinite(r.bound) ? json(r.bound) : json("inf")},
                            {"bound_satisfied", r.bound_satisfied}});
    return json{{"op", rep.op},
                {"p", rep.p},
                {"family", family_name(rep.family)},
                {"bound_expr", rep.bound_expr},
                {"approx_cells", rep.approx_cells},
                {"rows", std::move(rows)}};
}

} // namespace matmax
