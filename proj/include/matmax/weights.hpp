#pragma once

#include "matmax/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace matmax {

/// Result of a matrix Muckenhoupt constant computation over one family.
/// Degenerate weights produce value = +infinity (flagged, never thrown);
/// argmax is the first region attaining the reported value in canonical
/// enumeration order.
struct ApReport {
    double p = 2.0;
    RegionFamilyKind family = RegionFamilyKind::dyadic_rectangles;
    double value = 0.0;
    bool infinite = false;
    Region argmax;
    std::vector<std::pair<Region, double>> table; // filled only on request
};

/// Matrix A_p constant of the weight over the given region family.
/// p in [1, inf]; the p = 1 and p = inf cases use their own sup/average
/// displays rather than a limit of the p in (1, inf) expression.
ApReport ap_constant(const WeightField& w, double p, RegionFamilyKind family, bool want_table = false);

/// Constants for several exponents in one sweep over the regions; the pair
/// norms are evaluated once per (region, x, y) instead of once per exponent.
std::vector<ApReport> ap_constant_multi(const WeightField& w, const std::vector<double>& ps,
                                        RegionFamilyKind family);

/// One-parameter A_p constants of every row and column slice of a
/// bi-parameter weight, next to the bi-parameter constant.
struct SliceApReport {
    double p = 2.0;
    std::vector<double> along_axis1; // one per x2 column: constant of W(., x2)
    std::vector<double> along_axis2; // one per x1 row: constant of W(x1, .)
    double biparameter = 0.0;
    double max_slice = 0.0;
    double ratio = 0.0; // max_slice / biparameter
    bool any_infinite = false;
};

SliceApReport slice_ap_report(const WeightField& w, double p);

enum class WeightKind {
    constant,
    two_block,
    diagonal_power,
    rotating_frame,
    random_log_spd,
};

WeightKind weight_kind_from_name(const std::string& name);
const char* weight_kind_name(WeightKind kind);

struct WeightParams {
    int d = 2;
    std::optional<Matrix> base;  // constant: the cell matrix (default identity)
    std::optional<Matrix> left;  // two-block overrides
    std::optional<Matrix> right;
    double alpha1 = 0.3; // diagonal-power exponents
    double alpha2 = 0.0;
    double lambda = 2.0; // rotating-frame axis ratio
    double theta1 = 3.0; // rotation angle coefficients, theta = t1*x1 + t2*x2
    double theta2 = 1.0;
    double sigma = 0.5;     // random-log-spd entry scale
    double cond_cap = 1e4;  // condition number cap for random weights
};

/// Test-weight generator. Deterministic given the seed; every produced field
/// passes the WeightField validity checks.
WeightField gen_weight(WeightKind kind, const WeightParams& params, const Grid& grid, std::uint64_t seed);

} // namespace matmax
