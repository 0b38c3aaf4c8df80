// Acceptance suite: runs every gated criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include "matmax/harness.hpp"
#include "matmax/io.hpp"
#include "matmax/maxops.hpp"
#include "matmax/weights.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

using namespace matmax;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSeed = 20240817;

struct Criterion {
    std::string label;
    double time_budget_s;
    std::function<bool(std::string&)> run;
};

bool run_criteria(const std::vector<Criterion>& criteria)
{
    bool all_ok = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[k].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[k].time_budget_s > 0.0 && secs > criteria[k].time_budget_s) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
        }
        std::printf("[%s] %2zu. %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", k + 1,
                    criteria[k].label.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok;
}

bool from_check(const CheckResult& r, std::string& detail)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d trials, worst slack %.3g", r.trials, r.worst_slack);
    detail = buf;
    if (!r.passed())
        detail += ", failures " + std::to_string(r.failures);
    return r.passed();
}

} // namespace

int main()
{
    std::vector<Criterion> criteria;

    criteria.push_back({"body-average sandwich: 1000 trials per d in {2,3}, grids to 16x16, slack 1e-9",
                        10.0, [](std::string& detail) {
                            return from_check(verify_lemma2(1000, {2, 3}, kSeed), detail);
                        }});

    criteria.push_back({"scalar strong domination: 100 random fields to 64x64 (slack 1e-10) plus the exact "
                        "2x2 indicator values (1, 1/2, 1/2, 1/4)",
                        5.0, [](std::string& detail) {
                            return from_check(verify_domination_scalar(6, 6, 100, kSeed), detail);
                        }});

    criteria.push_back({"set-valued strong domination: 50 random set fields, 8x8, d = 2, exact polygons, "
                        "tol 1e-9",
                        60.0, [](std::string& detail) {
                            return from_check(verify_domination_set(3, 3, 50, kSeed), detail);
                        }});

    criteria.push_back({"weighted set magnitude sandwich for segment fields: cg/d <= |W M(W^-1 F)| <= cg, "
                        "100 random (W, f), 8x8, d = 2, slack 1e-9",
                        60.0, [](std::string& detail) {
                            return from_check(verify_equivalence_random(3, 3, 2, 100, kSeed), detail);
                        }});

    criteria.push_back({"exact L-infinity constant: ||MF||_inf(W) <= [W]_Ainf ||F||_inf(W) + 1e-9, "
                        "50 random (W, F), 8x8",
                        60.0, [](std::string& detail) {
                            return from_check(verify_linfty_random(3, 3, 2, 50, kSeed), detail);
                        }});

    criteria.push_back({"identity-weight collapse to the scalar strong operator, 100 fields to 32x32, 1e-12",
                        60.0, [](std::string& detail) {
                            return from_check(verify_identity_collapse(5, 5, 100, kSeed), detail);
                        }});

    criteria.push_back({"scalar factorization cg(w, f) = w * M(|f|/w) at d = 1, 100 trials, 32x32, 1e-10",
                        60.0, [](std::string& detail) {
                            return from_check(verify_scalar_factorization(5, 5, 100, kSeed), detail);
                        }});

    criteria.push_back({"A_p constants: exact constant-weight/two-cell/two-block values and family "
                        "monotonicity on 50 random weights",
                        60.0, [](std::string& detail) {
                            return from_check(verify_ap_constants(50, kSeed), detail);
                        }});

    criteria.push_back({"hull and zonotope algebra: 500 hull-magnitude lists (1e-12), 250 sign-corner "
                        "oracles m <= 12 (1e-12)",
                        60.0, [](std::string& detail) {
                            return from_check(verify_hull_zonotope(500, kSeed), detail);
                        }});

    criteria.push_back({"norm-ratio reports: 20 random (W, f, p) at 16x16 finite, identity ratios >= 1 "
                        "for f >= 0, one 9-row q-sweep",
                        120.0, [](std::string& detail) {
                            Rng rng(kSeed);
                            const Grid grid = make_grid(4, 4);
                            int finite = 0;
                            for (int t = 0; t < 20; ++t) {
                                const WeightField w = random_weight_field(grid, 2, rng);
                                const VectorField f = random_vector_field(grid, 2, rng);
                                NormRatioOptions opt;
                                opt.op = t % 2 == 0 ? "mws" : "mw";
                                opt.p = std::vector<double>{1.5, 2.0, 3.0, 4.0}[static_cast<std::size_t>(t % 4)];
                                const NormRatioReport rep = norm_ratio_report(w, &f, nullptr, opt);
                                if (std::isfinite(rep.rows.at(0).ratio))
                                    ++finite;
                            }

                            // Identity weight, nonnegative f: ratio >= 1.
                            bool identity_ok = true;
                            for (int t = 0; t < 5; ++t) {
                                VectorField f(grid, 2);
                                for (long c = 0; c < grid.cell_count(); ++c) {
                                    Vec v(2);
                                    v[0] = std::abs(rng.normal());
                                    v[1] = std::abs(rng.normal());
                                    f.set(c, v);
                                }
                                NormRatioOptions opt;
                                opt.op = "mws";
                                opt.p = 2.0;
                                const NormRatioReport rep =
                                    norm_ratio_report(identity_weight(grid, 2), &f, nullptr, opt);
                                identity_ok = identity_ok && rep.rows.at(0).ratio >= 1.0 - 1e-12;
                            }

                            NormRatioOptions sweep;
                            sweep.op = "mws";
                            sweep.p = 2.0;
                            sweep.qs = default_q_sweep(2.0);
                            const WeightField w = random_weight_field(grid, 2, rng);
                            const VectorField f = random_vector_field(grid, 2, rng);
                            const NormRatioReport swept = norm_ratio_report(w, &f, nullptr, sweep);
                            bool sweep_ok = swept.rows.size() == 9;
                            for (const NormRatioRow& row : swept.rows)
                                sweep_ok = sweep_ok && std::isfinite(row.ratio);

                            char buf[128];
                            std::snprintf(buf, sizeof buf, "%d/20 finite, identity %s, sweep rows %zu",
                                          finite, identity_ok ? "ok" : "violated", swept.rows.size());
                            detail = buf;
                            return finite == 20 && identity_ok && sweep_ok;
                        }});

    const bool ok = run_criteria(criteria);
    std::printf("%s\n", ok ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT");
    return ok ? 0 : 1;
}
