#include "matmax/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace matmax {

namespace {
constexpr int kMaxLevels = 12;
constexpr int kAllRectanglesCap = 16; // cells per axis

bool is_inf(double p) { return std::isinf(p) && p > 0.0; }
} // namespace

Grid make_grid(int levels1, int levels2)
{
    if (levels1 < 0 || levels1 > kMaxLevels || levels2 < 0 || levels2 > kMaxLevels)
        throw std::invalid_argument("make_grid: levels must be in [0, 12]");
    return Grid{levels1, levels2};
}

const char* family_name(RegionFamilyKind kind)
{
    switch (kind) {
    case RegionFamilyKind::dyadic_cubes:
        return "dyadic-cubes";
    case RegionFamilyKind::dyadic_rectangles:
        return "dyadic-rectangles";
    case RegionFamilyKind::all_rectangles:
        return "all-rectangles";
    case RegionFamilyKind::axis1_intervals:
        return "axis1-intervals";
    case RegionFamilyKind::axis2_intervals:
        return "axis2-intervals";
    }
    return "?";
}

RegionFamilyKind family_from_name(const std::string& name)
{
    if (name == "dyadic-cubes")
        return RegionFamilyKind::dyadic_cubes;
    if (name == "dyadic-rectangles")
        return RegionFamilyKind::dyadic_rectangles;
    if (name == "all-rectangles")
        return RegionFamilyKind::all_rectangles;
    if (name == "axis1-intervals")
        return RegionFamilyKind::axis1_intervals;
    if (name == "axis2-intervals")
        return RegionFamilyKind::axis2_intervals;
    throw std::invalid_argument("unknown region family: " + name);
}

void validate_region(const Grid& grid, const Region& r)
{
    if (r.i0 < 0 || r.j0 < 0 || r.i1 > grid.n1() || r.j1 > grid.n2() || r.i0 >= r.i1 || r.j0 >= r.j1)
        throw std::invalid_argument("region out of bounds or empty");
}

namespace {

void check_cell(const Grid& g, int i, int j)
{
    if (i < 0 || i >= g.n1() || j < 0 || j >= g.n2())
        throw std::invalid_argument("cell outside grid");
}

void check_all_rectangles_cap(const Grid& g)
{
    if (g.n1() > kAllRectanglesCap || g.n2() > kAllRectanglesCap)
        throw std::invalid_argument("all-rectangles family is capped at 16x16 grids");
}

// Dyadic block [p*span, (p+1)*span) containing index i at subdivision depth k.
Region dyadic_rect(const Grid& g, int k1, int k2, int i, int j)
{
    const int s1 = g.levels1 - k1;
    const int s2 = g.levels2 - k2;
    const int i0 = (i >> s1) << s1;
    const int j0 = (j >> s2) << s2;
    return Region{i0, i0 + (1 << s1), j0, j0 + (1 << s2)};
}

} // namespace

std::vector<Region> regions_containing(const RegionFamily& family, int i, int j)
{
    const Grid& g = family.grid;
    check_cell(g, i, j);
    std::vector<Region> out;

    switch (family.kind) {
    case RegionFamilyKind::dyadic_rectangles:
        out.reserve(static_cast<std::size_t>(g.levels1 + 1) * (g.levels2 + 1));
        for (int k1 = 0; k1 <= g.levels1; ++k1)
            for (int k2 = 0; k2 <= g.levels2; ++k2)
                out.push_back(dyadic_rect(g, k1, k2, i, j));
        break;
    case RegionFamilyKind::dyadic_cubes: {
        // A cube of side 2^-k is the depth-k dyadic block on both axes.
        const int kmax = std::min(g.levels1, g.levels2);
        for (int k = 0; k <= kmax; ++k)
            out.push_back(dyadic_rect(g, k, k, i, j));
        break;
    }
    case RegionFamilyKind::axis1_intervals:
        for (int k1 = 0; k1 <= g.levels1; ++k1) {
            Region r = dyadic_rect(g, k1, g.levels2, i, j);
            out.push_back(r);
        }
        break;
    case RegionFamilyKind::axis2_intervals:
        for (int k2 = 0; k2 <= g.levels2; ++k2)
            out.push_back(dyadic_rect(g, g.levels1, k2, i, j));
        break;
    case RegionFamilyKind::all_rectangles:
        check_all_rectangles_cap(g);
        for (int i0 = 0; i0 <= i; ++i0)
            for (int i1 = i + 1; i1 <= g.n1(); ++i1)
                for (int j0 = 0; j0 <= j; ++j0)
                    for (int j1 = j + 1; j1 <= g.n2(); ++j1)
                        out.push_back(Region{i0, i1, j0, j1});
        break;
    }
    return out;
}

void for_each_region(const RegionFamily& family, const std::function<void(const Region&)>& fn)
{
    const Grid& g = family.grid;
    switch (family.kind) {
    case RegionFamilyKind::dyadic_rectangles:
        for (int k1 = 0; k1 <= g.levels1; ++k1)
            for (int k2 = 0; k2 <= g.levels2; ++k2) {
                const int s1 = g.levels1 - k1, s2 = g.levels2 - k2;
                for (int p1 = 0; p1 < (1 << k1); ++p1)
                    for (int p2 = 0; p2 < (1 << k2); ++p2)
                        fn(Region{p1 << s1, (p1 + 1) << s1, p2 << s2, (p2 + 1) << s2});
            }
        break;
    case RegionFamilyKind::dyadic_cubes: {
        const int kmax = std::min(g.levels1, g.levels2);
        for (int k = 0; k <= kmax; ++k) {
            const int span1 = 1 << (g.levels1 - k);
            const int span2 = 1 << (g.levels2 - k);
            for (int i0 = 0; i0 < g.n1(); i0 += span1)
                for (int j0 = 0; j0 < g.n2(); j0 += span2)
                    fn(Region{i0, i0 + span1, j0, j0 + span2});
        }
        break;
    }
    case RegionFamilyKind::axis1_intervals:
        for (int k1 = 0; k1 <= g.levels1; ++k1) {
            const int span = 1 << (g.levels1 - k1);
            for (int p1 = 0; p1 < (1 << k1); ++p1)
                for (int j = 0; j < g.n2(); ++j)
                    fn(Region{p1 * span, (p1 + 1) * span, j, j + 1});
        }
        break;
    case RegionFamilyKind::axis2_intervals:
        for (int k2 = 0; k2 <= g.levels2; ++k2) {
            const int span = 1 << (g.levels2 - k2);
            for (int p2 = 0; p2 < (1 << k2); ++p2)
                for (int i = 0; i < g.n1(); ++i)
                    fn(Region{i, i + 1, p2 * span, (p2 + 1) * span});
        }
        break;
    case RegionFamilyKind::all_rectangles:
        check_all_rectangles_cap(g);
        for (int i0 = 0; i0 < g.n1(); ++i0)
            for (int i1 = i0 + 1; i1 <= g.n1(); ++i1)
                for (int j0 = 0; j0 < g.n2(); ++j0)
                    for (int j1 = j0 + 1; j1 <= g.n2(); ++j1)
                        fn(Region{i0, i1, j0, j1});
        break;
    }
}

long region_count(const RegionFamily& family)
{
    long n = 0;
    for_each_region(family, [&](const Region&) { ++n; });
    return n;
}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), v_(std::move(values))
{
    if (static_cast<long>(v_.size()) != grid.cell_count())
        throw std::invalid_argument("ScalarField: value count does not match grid");
}

PrefixTable::PrefixTable(const ScalarField& s) : grid_(s.grid())
{
    const int n1 = grid_.n1(), n2 = grid_.n2();
    p_.assign(static_cast<std::size_t>(n1 + 1) * (n2 + 1), 0.0L);
    auto at = [&](int i, int j) -> long double& { return p_[static_cast<std::size_t>(i) * (n2 + 1) + j]; };
    for (int i = 1; i <= n1; ++i)
        for (int j = 1; j <= n2; ++j)
            at(i, j) = static_cast<long double>(s.at(i - 1, j - 1)) + at(i - 1, j) + at(i, j - 1) - at(i - 1, j - 1);
}

double PrefixTable::sum(const Region& r) const
{
    validate_region(grid_, r);
    const int n2 = grid_.n2();
    auto at = [&](int i, int j) -> long double { return p_[static_cast<std::size_t>(i) * (n2 + 1) + j]; };
    return static_cast<double>(at(r.i1, r.j1) - at(r.i0, r.j1) - at(r.i1, r.j0) + at(r.i0, r.j0));
}

double PrefixTable::average(const Region& r) const
{
    validate_region(grid_, r);
    const int n2 = grid_.n2();
    auto at = [&](int i, int j) -> long double { return p_[static_cast<std::size_t>(i) * (n2 + 1) + j]; };
    const long double s = at(r.i1, r.j1) - at(r.i0, r.j1) - at(r.i1, r.j0) + at(r.i0, r.j0);
    return static_cast<double>(s / static_cast<long double>(r.cell_count()));
}

double average_scalar(const PrefixTable& table, const Region& r) { return table.average(r); }

double average_scalar(const ScalarField& s, const Region& r)
{
    return PrefixTable(s).average(r);
}

VectorField::VectorField(const Grid& grid, int d) : grid_(grid), d_(d)
{
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("VectorField: dimension out of range");
    data_.assign(static_cast<std::size_t>(grid.cell_count()) * d, 0.0);
}

Vec VectorField::at(long cell) const
{
    Vec v(d_);
    const double* src = data_.data() + static_cast<std::size_t>(cell) * d_;
    for (int k = 0; k < d_; ++k)
        v[k] = src[k];
    return v;
}

void VectorField::set(long cell, const Vec& v)
{
    double* dst = data_.data() + static_cast<std::size_t>(cell) * d_;
    for (int k = 0; k < d_; ++k)
        dst[k] = v[k];
}

bool VectorField::all_finite() const
{
    for (double x : data_)
        if (!std::isfinite(x))
            return false;
    return true;
}

ScalarField magnitude_field(const VectorField& f)
{
    ScalarField out(f.grid());
    for (long c = 0; c < f.grid().cell_count(); ++c)
        out.set(c, f.at(c).norm());
    return out;
}

WeightField::WeightField(const Grid& grid, int d, const std::vector<Matrix>& cells)
    : grid_(grid), d_(d)
{
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("WeightField: dimension out of range");
    if (static_cast<long>(cells.size()) != grid.cell_count())
        throw std::invalid_argument("WeightField: cell count does not match grid");
    mats_.assign(static_cast<std::size_t>(grid.cell_count()) * d * d, 0.0);
    invs_ = mats_;
    for (long c = 0; c < grid.cell_count(); ++c) {
        const Matrix& w = cells[static_cast<std::size_t>(c)];
        if (w.dim() != d)
            throw std::invalid_argument("WeightField: matrix dimension mismatch");
        if (!spd_check(w, 1e-12)) {
            bool symmetric = w.all_finite();
            const double scale = std::max(1.0, w.max_abs());
            for (int i = 0; symmetric && i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    if (std::abs(w(i, j) - w(j, i)) > 1e-12 * scale) {
                        symmetric = false;
                        break;
                    }
            if (!symmetric)
                throw std::invalid_argument("WeightField: cell " + std::to_string(c) + " is not symmetric");
            throw NearSingularError("WeightField: cell " + std::to_string(c) + " is not positive definite", c);
        }
        Matrix inv;
        try {
            inv = spd_invert(w);
        } catch (const NearSingularError&) {
            throw NearSingularError("WeightField: cell " + std::to_string(c) + " is near singular", c);
        }
        double* wm = mats_.data() + static_cast<std::size_t>(c) * d * d;
        double* im = invs_.data() + static_cast<std::size_t>(c) * d * d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                wm[i * d + j] = w(i, j);
                im[i * d + j] = inv(i, j);
            }
    }
}

Matrix WeightField::at(long cell) const
{
    Matrix m(d_);
    const double* src = mats_.data() + static_cast<std::size_t>(cell) * d_ * d_;
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            m(i, j) = src[i * d_ + j];
    return m;
}

Matrix WeightField::inverse_at(long cell) const
{
    Matrix m(d_);
    const double* src = invs_.data() + static_cast<std::size_t>(cell) * d_ * d_;
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            m(i, j) = src[i * d_ + j];
    return m;
}

double WeightField::pair_norm(long x, long y) const
{
    const double* a = mats_.data() + static_cast<std::size_t>(x) * d_ * d_;
    const double* b = invs_.data() + static_cast<std::size_t>(y) * d_ * d_;
    if (d_ == 1)
        return std::abs(a[0] * b[0]);
    if (d_ == 2) {
        const double m00 = a[0] * b[0] + a[1] * b[2];
        const double m01 = a[0] * b[1] + a[1] * b[3];
        const double m10 = a[2] * b[0] + a[3] * b[2];
        const double m11 = a[2] * b[1] + a[3] * b[3];
        const double h1 = std::sqrt((m00 + m11) * (m00 + m11) + (m01 - m10) * (m01 - m10));
        const double h2 = std::sqrt((m00 - m11) * (m00 - m11) + (m01 + m10) * (m01 + m10));
        return 0.5 * (h1 + h2);
    }
    return op_norm(at(x) * inverse_at(y));
}

namespace {

double lp_of_values(const std::vector<double>& mags, double measure, double p)
{
    if (!(p > 0.0))
        throw std::invalid_argument("lp norm: p must be positive");
    if (is_inf(p)) {
        double m = 0.0;
        for (double x : mags)
            m = std::max(m, x);
        return m;
    }
    long double acc = 0.0L;
    for (double x : mags)
        acc += std::pow(static_cast<long double>(x), static_cast<long double>(p));
    acc *= static_cast<long double>(measure);
    return static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
}

} // namespace

double weighted_lp_norm(const WeightField& w, const VectorField& f, double p)
{
    if (!(w.grid() == f.grid()) || w.dim() != f.dim())
        throw std::invalid_argument("weighted_lp_norm: shape mismatch");
    std::vector<double> mags(static_cast<std::size_t>(f.grid().cell_count()));
    for (long c = 0; c < f.grid().cell_count(); ++c)
        mags[static_cast<std::size_t>(c)] = (w.at(c) * f.at(c)).norm();
    return lp_of_values(mags, f.grid().cell_measure(), p);
}

double lp_norm_scalar(const ScalarField& s, double p)
{
    std::vector<double> mags(s.values().size());
    for (std::size_t i = 0; i < mags.size(); ++i)
        mags[i] = std::abs(s.values()[i]);
    return lp_of_values(mags, s.grid().cell_measure(), p);
}

} // namespace matmax
