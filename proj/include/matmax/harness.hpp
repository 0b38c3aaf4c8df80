#pragma once

#include "matmax/convexgeom.hpp"
#include "matmax/grid.hpp"
#include "matmax/maxops.hpp"
#include "matmax/rng.hpp"
#include "matmax/weights.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace matmax {

/// Outcome of one verification suite. worst_slack is the largest signed
/// violation seen (lhs - rhs for an asserted lhs <= rhs + tol), so
/// failures == 0 exactly when worst_slack <= tolerance.
struct CheckResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    double tolerance = 0.0;
    double worst_slack = 0.0;
    std::string witness; // serialized first failing input; empty when passed

    bool passed() const { return failures == 0; }
};

/// Shared knobs for the randomized suites. tol, when set, replaces every
/// suite's pinned assertion tolerance (useful for tightening the gate).
struct VerifyConfig {
    std::uint64_t seed = 7;
    int trials = 100;
    int levels1 = 3;
    int levels2 = 3;
    int d = 2;
    std::optional<double> tol;
};

// ---- random corpus -------------------------------------------------------

/// Entries i.i.d. centered normal, then scaled so the largest |entry| is 1.
VectorField random_vector_field(const Grid& grid, int d, Rng& rng);
ScalarField random_scalar_field(const Grid& grid, Rng& rng);

/// Rotates through the generator zoo; condition numbers capped at 1e4.
WeightField random_weight_field(const Grid& grid, int d, Rng& rng, double cond_cap = 1e4);

/// Per-cell random segments, parallelogram hulls, or small zonotopes.
SetField random_set_field(const Grid& grid, int d, Rng& rng);

Region random_region(const Grid& grid, Rng& rng);

/// The field of segments conv{-f(x), f(x)}.
SetField segment_field(const VectorField& f);

WeightField identity_weight(const Grid& grid, int d);

// ---- verification suites ---------------------------------------------------

/// d^{-1} <|f|>_E <= |<<f>>_E| <= <|f|>_E on random regions and fields,
/// `trials` trials per entry of dims.
CheckResult verify_lemma2(int trials, const std::vector<int>& dims, std::uint64_t seed, double tol = 1e-9);

/// Pointwise M^s f <= M^1 M^2 f for scalar fields (slack 1e-10), including
/// the exact 2x2 indicator case.
CheckResult verify_domination_scalar(int max_levels1, int max_levels2, int trials, std::uint64_t seed,
                                     double tol = 1e-10);

/// Per-cell containment of the strong set-valued operator in the iterated
/// one-parameter operators, exact polygon mode.
CheckResult verify_domination_set(int levels1, int levels2, int trials, std::uint64_t seed, double tol = 1e-9);

/// Two-sided comparison of |W M^s(W^{-1}F)| with the weighted maximal
/// function: for F = conv{-f, f} the sandwich cg/d <= g <= cg holds per cell;
/// for general F every sampled selection obeys cg(selection)/d <= g.
CheckResult verify_equivalence(const WeightField& w, const VectorField& f, std::uint64_t seed,
                               double tol = 1e-9);
CheckResult verify_equivalence_set(const WeightField& w, const SetField& bodies, std::uint64_t seed,
                                   double tol = 1e-9);
CheckResult verify_equivalence_random(int levels1, int levels2, int d, int trials, std::uint64_t seed,
                                      double tol = 1e-9);

/// ||M^s F||_{L^inf(W)} <= [W]_{A_inf,rect} ||F||_{L^inf(W)} + 1e-9; the
/// constant is exact in the discrete model.
CheckResult verify_linfty_bound(const WeightField& w, const SetField& bodies, double tol = 1e-9);
CheckResult verify_linfty_random(int levels1, int levels2, int d, int trials, std::uint64_t seed,
                                 double tol = 1e-9);

/// cg_max with the identity weight equals scalar_max(|f|) to 1e-12.
CheckResult verify_identity_collapse(int max_levels1, int max_levels2, int trials, std::uint64_t seed,
                                     double tol = 1e-12);

/// d = 1 factorization cg_max(w, f) = w * scalar_max(|f| / w) to 1e-10.
CheckResult verify_scalar_factorization(int levels1, int levels2, int trials, std::uint64_t seed,
                                        double tol = 1e-10);

/// Exact A_p values (constant weight, the 2-cell scalar case, the two-block
/// case) and family monotonicity on random weights.
CheckResult verify_ap_constants(int trials, std::uint64_t seed, double tol = 0.0);

/// magnitude(hull_union) = max of magnitudes, and zonotope magnitude against
/// the 2^m sign-corner oracle for m <= 12.
CheckResult verify_hull_zonotope(int trials, std::uint64_t seed, double tol = 1e-12);

/// Registry used by the CLI: run the named checks (all when empty) with the
/// shared configuration. Unknown names raise std::invalid_argument.
std::vector<std::string> all_check_names();
std::vector<CheckResult> run_checks(const std::vector<std::string>& names, const VerifyConfig& cfg);

/// Fixed-format result table; byte-identical for identical results.
std::string check_table(const std::vector<CheckResult>& results);
nlohmann::json check_results_json(const std::vector<CheckResult>& results);

// ---- norm-ratio reports ----------------------------------------------------

/// One row of a norm-ratio sweep.
struct NormRatioRow {
    double q = 2.0;
    double input_norm = 0.0;
    double output_norm = 0.0;
    double ratio = 0.0;
    double ap_value = 0.0;
    bool ap_infinite = false;
    double bound = 0.0;     // reference bound with C = 1
    int bound_satisfied = -1; // 1/0; -1 when no bound applies
};

/// Report-level record for the operator norm experiments; never gates an
/// exit code beyond finiteness.
struct NormRatioReport {
    std::string op; // m | ms | mw | mws | mk | mks
    double p = 2.0;
    RegionFamilyKind family = RegionFamilyKind::dyadic_rectangles;
    std::string bound_expr;
    std::vector<NormRatioRow> rows;
    int approx_cells = 0;
};

struct NormRatioOptions {
    std::string op = "mws";
    double p = 2.0;
    std::vector<double> qs; // empty: just p
};

/// Default 9-point sweep over [max(1.1, p - 0.5), p + 0.5].
std::vector<double> default_q_sweep(double p, double q_from = 0.0, double q_to = 0.0, int steps = 9);

NormRatioReport norm_ratio_report(const WeightField& w, const VectorField* f, const SetField* bodies,
                                  const NormRatioOptions& opt);

std::string norm_ratio_csv(const NormRatioReport& rep);
nlohmann::json norm_ratio_json(const NormRatioReport& rep);

} // namespace matmax
