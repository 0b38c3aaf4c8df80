#pragma once

#include "matmax/linalg.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace matmax {

/// Uniform dyadic grid on [0,1)^2 with 2^levels1 x 2^levels2 cells. Axis 1 is
/// the first coordinate; cells are indexed (i, j) with i along axis 1.
struct Grid {
    int levels1 = 0;
    int levels2 = 0;

    int n1() const { return 1 << levels1; }
    int n2() const { return 1 << levels2; }
    long cell_count() const { return static_cast<long>(n1()) * n2(); }
    double cell_measure() const { return std::ldexp(1.0, -(levels1 + levels2)); }
    long cell_index(int i, int j) const { return static_cast<long>(i) * n2() + j; }

    bool operator==(const Grid&) const = default;
};

/// Validated constructor; levels outside [0, 12] are rejected.
Grid make_grid(int levels1, int levels2);

/// Axis-aligned half-open box of whole cells [i0,i1) x [j0,j1).
struct Region {
    int i0 = 0;
    int i1 = 0;
    int j0 = 0;
    int j1 = 0;

    long cell_count() const { return static_cast<long>(i1 - i0) * (j1 - j0); }
    bool contains(int i, int j) const { return i0 <= i && i < i1 && j0 <= j && j < j1; }
    bool operator==(const Region&) const = default;
};

enum class RegionFamilyKind {
    dyadic_cubes,
    dyadic_rectangles,
    all_rectangles,
    axis1_intervals,
    axis2_intervals,
};

const char* family_name(RegionFamilyKind kind);
RegionFamilyKind family_from_name(const std::string& name);

/// A lazily enumerable family of regions over one grid. Enumeration order is
/// canonical (coarse level first, then position), which fixes every argmax
/// tie-break in the toolkit.
struct RegionFamily {
    Grid grid;
    RegionFamilyKind kind = RegionFamilyKind::dyadic_rectangles;
};

/// The family members that contain the given cell, in canonical order.
std::vector<Region> regions_containing(const RegionFamily& family, int i, int j);

/// Visits every member in canonical order. The all-rectangles family is a
/// brute-force oracle and is capped at 16 cells per axis.
void for_each_region(const RegionFamily& family, const std::function<void(const Region&)>& fn);

long region_count(const RegionFamily& family);

/// Piecewise-constant scalar field: one value per cell.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& grid, double fill = 0.0)
        : grid_(grid), v_(static_cast<std::size_t>(grid.cell_count()), fill)
    {
    }
    ScalarField(const Grid& grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    double at(int i, int j) const { return v_[static_cast<std::size_t>(grid_.cell_index(i, j))]; }
    double at(long cell) const { return v_[static_cast<std::size_t>(cell)]; }
    void set(int i, int j, double x) { v_[static_cast<std::size_t>(grid_.cell_index(i, j))] = x; }
    void set(long cell, double x) { v_[static_cast<std::size_t>(cell)] = x; }
    const std::vector<double>& values() const { return v_; }

private:
    Grid grid_;
    std::vector<double> v_;
};

/// Inclusion-exclusion prefix sums; O(1) region sums after O(N) setup.
/// Accumulates in extended precision so the corner differences agree with
/// naive summation to ~1e-15 even on 4096-cell grids.
class PrefixTable {
public:
    explicit PrefixTable(const ScalarField& s);

    const Grid& grid() const { return grid_; }
    double sum(const Region& r) const;
    double average(const Region& r) const;

private:
    Grid grid_;
    std::vector<long double> p_; // (n1+1) x (n2+1)
};

/// Mean of the cell values over the region.
double average_scalar(const PrefixTable& table, const Region& r);
/// Convenience overload; builds the prefix table internally.
double average_scalar(const ScalarField& s, const Region& r);

/// Raises std::invalid_argument unless r is a nonempty box inside the grid.
void validate_region(const Grid& grid, const Region& r);

/// Piecewise-constant field of vectors in R^d.
class VectorField {
public:
    VectorField() = default;
    VectorField(const Grid& grid, int d);

    const Grid& grid() const { return grid_; }
    int dim() const { return d_; }
    Vec at(long cell) const;
    Vec at(int i, int j) const { return at(grid_.cell_index(i, j)); }
    void set(long cell, const Vec& v);
    void set(int i, int j, const Vec& v) { set(grid_.cell_index(i, j), v); }
    bool all_finite() const;

private:
    Grid grid_;
    int d_ = 0;
    std::vector<double> data_;
};

/// Per-cell euclidean norms |f(x)| as a scalar field.
ScalarField magnitude_field(const VectorField& f);

/// Piecewise-constant field of symmetric positive definite matrices with the
/// per-cell inverse cached at construction. Construction validates every
/// cell with spd_check at tol 1e-12; a failing cell raises NearSingularError
/// carrying the cell index (or std::invalid_argument if not symmetric).
class WeightField {
public:
    WeightField() = default;
    WeightField(const Grid& grid, int d, const std::vector<Matrix>& cells);

    const Grid& grid() const { return grid_; }
    int dim() const { return d_; }
    Matrix at(long cell) const;
    Matrix at(int i, int j) const { return at(grid_.cell_index(i, j)); }
    Matrix inverse_at(long cell) const;
    Matrix inverse_at(int i, int j) const { return inverse_at(grid_.cell_index(i, j)); }

    /// ||W(x) W(y)^{-1}|| straight from the cached storage; the d <= 2 paths
    /// avoid any matrix materialization (this is the A_p inner loop).
    double pair_norm(long x, long y) const;

private:
    Grid grid_;
    int d_ = 0;
    std::vector<double> mats_;
    std::vector<double> invs_;
};

/// ( sum_x |W(x) f(x)|^p m(cell) )^{1/p}; max over cells for p = infinity.
/// p must be positive (quasi-norms with p < 1 are allowed).
double weighted_lp_norm(const WeightField& w, const VectorField& f, double p);

/// Unweighted L^p norm of a scalar field under the same conventions.
double lp_norm_scalar(const ScalarField& s, double p);

} // namespace matmax
