#include "matmax/weights.hpp"

#include "matmax/parallel.hpp"
#include "matmax/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace matmax {

namespace {

constexpr double kInfThreshold = 1e100;

// The double-average A_p expression on one region, for every exponent at
// once. Pair norms (and their logs) are evaluated once per (x, y).
void region_ap_values(const WeightField& w, const Region& r, const std::vector<double>& ps, double* out)
{
    std::vector<long> cells;
    cells.reserve(static_cast<std::size_t>(r.cell_count()));
    for (int i = r.i0; i < r.i1; ++i)
        for (int j = r.j0; j < r.j1; ++j)
            cells.push_back(w.grid().cell_index(i, j));
    const std::size_t nc = cells.size();
    const auto ncl = static_cast<long double>(nc);

    bool need_log = false;
    bool need_colsum = false;
    bool need_rowsum = false;
    for (double p : ps) {
        if (std::isinf(p))
            need_rowsum = true;
        else if (p == 1.0)
            need_colsum = true;
        else
            need_log = true;
    }

    std::vector<long double> colsum(need_colsum ? nc : 0, 0.0L);
    double best_rowmean = 0.0;
    std::vector<long double> outer(ps.size(), 0.0L);
    std::vector<long double> inner(ps.size());

    for (std::size_t xi = 0; xi < nc; ++xi) {
        const long x = cells[xi];
        long double rowsum = 0.0L;
        std::fill(inner.begin(), inner.end(), 0.0L);
        for (std::size_t yi = 0; yi < nc; ++yi) {
            const double nu = w.pair_norm(x, cells[yi]);
            rowsum += nu;
            if (need_colsum)
                colsum[yi] += nu;
            if (need_log) {
                // Extended range: nu^p' can pass 1e308 while staying meaningful.
                const long double lognu = std::log(static_cast<long double>(nu));
                for (std::size_t k = 0; k < ps.size(); ++k) {
                    const double p = ps[k];
                    if (!std::isinf(p) && p != 1.0) {
                        const long double pp = static_cast<long double>(p) / (p - 1.0);
                        const long double t = pp * lognu;
                        if (nu == 1.0)
                            inner[k] += 1.0L;
                        else if (t > -700.0L && t < 700.0L)
                            inner[k] += static_cast<long double>(std::exp(static_cast<double>(t)));
                        else
                            inner[k] += std::exp(t);
                    }
                }
            }
        }
        if (need_rowsum)
            best_rowmean = std::max(best_rowmean, static_cast<double>(rowsum / ncl));
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const double p = ps[k];
            if (std::isinf(p) || p == 1.0)
                continue;
            const long double mean = inner[k] / ncl;
            // The outer exponent p/p' equals p - 1.
            outer[k] += mean == 1.0L ? 1.0L : std::pow(mean, static_cast<long double>(p - 1.0));
        }
    }

    double best_colmean = 0.0;
    for (std::size_t yi = 0; need_colsum && yi < nc; ++yi)
        best_colmean = std::max(best_colmean, static_cast<double>(colsum[yi] / ncl));

    for (std::size_t k = 0; k < ps.size(); ++k) {
        const double p = ps[k];
        if (std::isinf(p)) {
            out[k] = best_rowmean;
        } else if (p == 1.0) {
            out[k] = best_colmean;
        } else {
            const long double mean = outer[k] / ncl;
            out[k] = static_cast<double>(mean == 1.0L ? 1.0L : std::pow(mean, 1.0L / static_cast<long double>(p)));
        }
    }
}

} // namespace

std::vector<ApReport> ap_constant_multi(const WeightField& w, const std::vector<double>& ps,
                                        RegionFamilyKind family)
{
    for (double p : ps)
        if (std::isnan(p) || p < 1.0)
            throw std::invalid_argument("ap_constant: p must be in [1, inf]");
    if (ps.empty())
        return {};

    RegionFamily fam{w.grid(), family};
    std::vector<Region> regions;
    for_each_region(fam, [&](const Region& r) { regions.push_back(r); });

    std::vector<double> values(regions.size() * ps.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(regions.size()), [&](std::int64_t k) {
        region_ap_values(w, regions[static_cast<std::size_t>(k)], ps,
                         values.data() + static_cast<std::size_t>(k) * ps.size());
    });

    std::vector<ApReport> reports(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        ApReport& rep = reports[k];
        rep.p = ps[k];
        rep.family = family;
        double best = -1.0;
        bool found_inf = false;
        // Deterministic reduction in canonical enumeration order.
        for (std::size_t r = 0; r < regions.size(); ++r) {
            const double v = values[r * ps.size() + k];
            if (!std::isfinite(v) || v > kInfThreshold) {
                if (!found_inf) {
                    found_inf = true;
                    rep.argmax = regions[r];
                }
                continue;
            }
            if (!found_inf && v > best) {
                best = v;
                rep.argmax = regions[r];
            }
        }
        if (found_inf) {
            rep.infinite = true;
            rep.value = std::numeric_limits<double>::infinity();
        } else {
            rep.value = best;
        }
    }
    return reports;
}

ApReport ap_constant(const WeightField& w, double p, RegionFamilyKind family, bool want_table)
{
    if (std::isnan(p) || p < 1.0)
        throw std::invalid_argument("ap_constant: p must be in [1, inf]");

    if (!want_table)
        return ap_constant_multi(w, {p}, family).front();

    RegionFamily fam{w.grid(), family};
    std::vector<Region> regions;
    for_each_region(fam, [&](const Region& r) { regions.push_back(r); });

    std::vector<double> values(regions.size(), 0.0);
    const std::vector<double> ps{p};
    parallel_for(static_cast<std::int64_t>(regions.size()), [&](std::int64_t k) {
        region_ap_values(w, regions[static_cast<std::size_t>(k)], ps, &values[static_cast<std::size_t>(k)]);
    });

    ApReport rep;
    rep.p = p;
    rep.family = family;
    double best = -1.0;
    bool found_inf = false;
    for (std::size_t k = 0; k < regions.size(); ++k) {
        const double v = values[k];
        rep.table.emplace_back(regions[k], v);
        if (!std::isfinite(v) || v > kInfThreshold) {
            if (!found_inf) {
                found_inf = true;
                rep.argmax = regions[k];
            }
            continue;
        }
        if (!found_inf && v > best) {
            best = v;
            rep.argmax = regions[k];
        }
    }
    if (found_inf) {
        rep.infinite = true;
        rep.value = std::numeric_limits<double>::infinity();
    } else {
        rep.value = best;
    }
    return rep;
}

SliceApReport slice_ap_report(const WeightField& w, double p)
{
    if (std::isnan(p) || std::isinf(p) || p <= 1.0)
        throw std::invalid_argument("slice_ap_report: p must be in (1, inf)");
    const Grid& g = w.grid();
    SliceApReport rep;
    rep.p = p;

    // Row slices W(x1, .): one-parameter weights on a 1 x n2 grid.
    const Grid row_grid = make_grid(0, g.levels2);
    rep.along_axis2.resize(static_cast<std::size_t>(g.n1()));
    for (int i = 0; i < g.n1(); ++i) {
        std::vector<Matrix> cells;
        cells.reserve(static_cast<std::size_t>(g.n2()));
        for (int j = 0; j < g.n2(); ++j)
            cells.push_back(w.at(i, j));
        const WeightField slice(row_grid, w.dim(), cells);
        rep.along_axis2[static_cast<std::size_t>(i)] =
            ap_constant(slice, p, RegionFamilyKind::dyadic_rectangles).value;
    }

    // Column slices W(., x2) on an n1 x 1 grid.
    const Grid col_grid = make_grid(g.levels1, 0);
    rep.along_axis1.resize(static_cast<std::size_t>(g.n2()));
    for (int j = 0; j < g.n2(); ++j) {
        std::vector<Matrix> cells;
        cells.reserve(static_cast<std::size_t>(g.n1()));
        for (int i = 0; i < g.n1(); ++i)
            cells.push_back(w.at(i, j));
        const WeightField slice(col_grid, w.dim(), cells);
        rep.along_axis1[static_cast<std::size_t>(j)] =
            ap_constant(slice, p, RegionFamilyKind::dyadic_rectangles).value;
    }

    rep.biparameter = ap_constant(w, p, RegionFamilyKind::dyadic_rectangles).value;
    double mx = 0.0;
    for (double v : rep.along_axis1)
        mx = std::max(mx, v);
    for (double v : rep.along_axis2)
        mx = std::max(mx, v);
    rep.max_slice = mx;
    rep.any_infinite = !std::isfinite(rep.biparameter) || !std::isfinite(mx);
    rep.ratio = rep.max_slice / rep.biparameter;
    return rep;
}

WeightKind weight_kind_from_name(const std::string& name)
{
    if (name == "constant")
        return WeightKind::constant;
    if (name == "two-block")
        return WeightKind::two_block;
    if (name == "diagonal-power")
        return WeightKind::diagonal_power;
    if (name == "rotating-frame")
        return WeightKind::rotating_frame;
    if (name == "random-log-spd")
        return WeightKind::random_log_spd;
    throw std::invalid_argument("unknown weight kind: " + name);
}

const char* weight_kind_name(WeightKind kind)
{
    switch (kind) {
    case WeightKind::constant:
        return "constant";
    case WeightKind::two_block:
        return "two-block";
    case WeightKind::diagonal_power:
        return "diagonal-power";
    case WeightKind::rotating_frame:
        return "rotating-frame";
    case WeightKind::random_log_spd:
        return "random-log-spd";
    }
    return "?";
}

namespace {

Matrix default_block(int d, bool left)
{
    Matrix m = Matrix::identity(d);
    if (d == 1) {
        m(0, 0) = left ? 1.0 : 2.0;
    } else if (left) {
        m(0, 0) = 2.0;
    } else {
        m(1, 1) = 2.0;
    }
    return m;
}

Matrix rotation_conjugated(int d, double theta, double lambda)
{
    Matrix rot = Matrix::identity(d);
    const double c = std::cos(theta), s = std::sin(theta);
    rot(0, 0) = c;
    rot(0, 1) = -s;
    rot(1, 0) = s;
    rot(1, 1) = c;
    Matrix diag = Matrix::identity(d);
    diag(0, 0) = lambda;
    diag(1, 1) = 1.0 / lambda;
    return (rot * diag * rot.transposed()).symmetrized();
}

Matrix random_log_spd_cell(int d, double sigma, double cond_cap, Rng& rng)
{
    Matrix s(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const double x = sigma * rng.normal();
            s(i, j) = x;
            s(j, i) = x;
        }
    Matrix vectors;
    std::vector<double> eigs = sym_eigenvalues(s, &vectors);
    const double clamp = 0.5 * std::log(cond_cap);
    Matrix w(d);
    for (int k = 0; k < d; ++k) {
        const double lam = std::exp(std::clamp(eigs[static_cast<std::size_t>(k)], -clamp, clamp));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                w(i, j) += lam * vectors(i, k) * vectors(j, k);
    }
    return w.symmetrized();
}

} // namespace

WeightField gen_weight(WeightKind kind, const WeightParams& params, const Grid& grid, std::uint64_t seed)
{
    const int d = params.d;
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("gen_weight: dimension out of range");
    if (kind == WeightKind::rotating_frame && d < 2)
        throw std::invalid_argument("gen_weight: rotating-frame needs d >= 2");
    if (kind == WeightKind::rotating_frame && !(params.lambda > 0.0))
        throw std::invalid_argument("gen_weight: lambda must be positive");

    const int n1 = grid.n1(), n2 = grid.n2();
    const double eps1 = 0.5 / n1, eps2 = 0.5 / n2;
    std::vector<Matrix> cells(static_cast<std::size_t>(grid.cell_count()), Matrix::identity(d));

    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const long c = grid.cell_index(i, j);
            const double x1 = static_cast<double>(i) / n1 + eps1; // cell center
            const double x2 = static_cast<double>(j) / n2 + eps2;
            Matrix m = Matrix::identity(d);
            switch (kind) {
            case WeightKind::constant:
                m = params.base.value_or(Matrix::identity(d));
                break;
            case WeightKind::two_block: {
                const bool left = n1 > 1 ? (i < n1 / 2) : (n2 > 1 ? (j < n2 / 2) : true);
                m = left ? params.left.value_or(default_block(d, true))
                         : params.right.value_or(default_block(d, false));
                break;
            }
            case WeightKind::diagonal_power:
                m(0, 0) = std::pow(x1, params.alpha1);
                if (d >= 2)
                    m(1, 1) = std::pow(x2, params.alpha2);
                break;
            case WeightKind::rotating_frame:
                m = rotation_conjugated(d, params.theta1 * x1 + params.theta2 * x2, params.lambda);
                break;
            case WeightKind::random_log_spd: {
                Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(c));
                m = random_log_spd_cell(d, params.sigma, params.cond_cap, rng);
                break;
            }
            }
            cells[static_cast<std::size_t>(c)] = m;
        }
    }
    return WeightField(grid, d, cells);
}

} // namespace matmax
