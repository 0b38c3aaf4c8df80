#pragma once

#include "matmax/convexgeom.hpp"
#include "matmax/grid.hpp"

namespace matmax {

/// Options shared by the maximal operators: the region family realizing the
/// supremum, and the polygon budget passed through to the convex calculus.
/// Ties between regions resolve to the first one in canonical enumeration.
struct MaxParams {
    RegionFamilyKind family = RegionFamilyKind::dyadic_rectangles;
    ApproxBudget budget{};
};

/// Maximal average of |s| over family regions containing each cell. With the
/// axis-interval families this is the one-parameter operator acting on that
/// axis alone.
ScalarField scalar_max(const ScalarField& s, const MaxParams& params);

/// Matrix-weighted maximal function: per cell x the maximal average over
/// regions R of |W(x) W(y)^{-1} f(y)|. Cubes give the one-parameter operator,
/// rectangles its strong (bi-parameter) variant.
ScalarField cg_max(const WeightField& w, const VectorField& f, const MaxParams& params);

/// Convex set-valued maximal operator: per cell the hull of the Minkowski
/// averages of F over the regions containing it. Dyadic families reuse a
/// bottom-up pyramid of region averages; every region body is built once.
SetField set_max(const SetField& f, const MaxParams& params);

/// One-parameter set-valued operator acting on the given axis (1 or 2) with
/// dyadic intervals, slice-wise in the frozen coordinate.
SetField set_max_axis(const SetField& f, int axis, const ApproxBudget& budget = {});

/// k-fold composition of set_max, k in [1, 8].
SetField iterate_set_max(const SetField& f, int k, const MaxParams& params);

/// Per cell x the value |W(x) M^s(W^{-1}F)(x)| computed region-by-region
/// without materializing the hull (the magnitude of a hull of a union is the
/// max of the member magnitudes).
ScalarField weighted_set_max_magnitude(const WeightField& w, const SetField& f, const MaxParams& params);

} // namespace matmax
