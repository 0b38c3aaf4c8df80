// matmax command line: weight/field generation, Muckenhoupt constants,
// maximal operators, verification suites, and norm-ratio reports.

#include "matmax/harness.hpp"
#include "matmax/io.hpp"
#include "matmax/maxops.hpp"
#include "matmax/weights.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

namespace {

using namespace matmax;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

Grid parse_grid(const std::string& text)
{
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("--grid expects N1xN2, e.g. 8x8");
    const int n1 = std::stoi(text.substr(0, x));
    const int n2 = std::stoi(text.substr(x + 1));
    auto to_levels = [](int n) {
        if (n < 1 || n > 4096 || (n & (n - 1)) != 0)
            throw std::invalid_argument("--grid cells per axis must be a power of two in [1, 4096]");
        int l = 0;
        while ((1 << l) < n)
            ++l;
        return l;
    };
    return make_grid(to_levels(n1), to_levels(n2));
}

double parse_p(const std::string& text)
{
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    return std::stod(text);
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

int run(int argc, char** argv)
{
    CLI::App app{"matrix-weighted maximal operators on dyadic grids"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a weight/field document");
    std::string gen_kind = "random-log-spd", gen_grid = "8x8", gen_out;
    int gen_d = 2;
    std::uint64_t gen_seed = 1;
    bool gen_bodies = false;
    WeightParams gen_params;
    gen->add_option("--kind", gen_kind, "constant|two-block|diagonal-power|rotating-frame|random-log-spd");
    gen->add_option("--grid", gen_grid, "cells per axis, N1xN2 (powers of two)");
    gen->add_option("--d", gen_d, "vector dimension (1..8)");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--alpha1", gen_params.alpha1, "diagonal-power exponent, axis 1");
    gen->add_option("--alpha2", gen_params.alpha2, "diagonal-power exponent, axis 2");
    gen->add_option("--lambda", gen_params.lambda, "rotating-frame axis ratio");
    gen->add_option("--theta1", gen_params.theta1, "rotation coefficient for x1");
    gen->add_option("--theta2", gen_params.theta2, "rotation coefficient for x2");
    gen->add_option("--sigma", gen_params.sigma, "random-log-spd scale");
    gen->add_option("--cond-cap", gen_params.cond_cap, "condition number cap");
    gen->add_flag("--with-bodies", gen_bodies, "also emit a random set field F");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // ---- apconst ----
    auto* apc = app.add_subcommand("apconst", "matrix A_p constant of a weight");
    std::string apc_in, apc_p = "2", apc_family = "dyadic-rectangles", apc_format = "csv", apc_out;
    bool apc_table = false;
    apc->add_option("--in", apc_in, "input field document")->required();
    apc->add_option("--p", apc_p, "exponent in [1, inf]");
    apc->add_option("--family", apc_family, "dyadic-cubes|dyadic-rectangles|all-rectangles");
    apc->add_option("--format", apc_format, "csv|json");
    apc->add_flag("--table", apc_table, "include the per-region table (json)");
    bool apc_slices = false;
    apc->add_flag("--slices", apc_slices, "emit per-slice one-parameter constants instead");
    apc->add_option("--out", apc_out, "output path (default stdout)");

    // ---- maximal ----
    auto* mx = app.add_subcommand("maximal", "weighted maximal function of f");
    std::string mx_in, mx_weight = "doc", mx_family = "dyadic-rectangles", mx_out;
    mx->add_option("--in", mx_in, "input field document")->required();
    mx->add_option("--weight", mx_weight, "doc|identity");
    mx->add_option("--family", mx_family, "region family");
    mx->add_option("--out", mx_out, "output path (default stdout)");

    // ---- setmax ----
    auto* sm = app.add_subcommand("setmax", "convex set-valued maximal operator");
    std::string sm_in, sm_family = "dyadic-rectangles", sm_out;
    int sm_axis = 0, sm_iterate = 1, sm_max_vertices = 256;
    sm->add_option("--in", sm_in, "input field document with F")->required();
    sm->add_option("--family", sm_family, "region family (axis ops ignore this)");
    sm->add_option("--axis", sm_axis, "0 = full, 1/2 = one-parameter on that axis");
    sm->add_option("--iterate", sm_iterate, "number of compositions (1..8)");
    sm->add_option("--max-vertices", sm_max_vertices, "polygon vertex budget (0 = unlimited)");
    sm->add_option("--out", sm_out, "output path (default stdout)");

    // ---- verify ----
    auto* vf = app.add_subcommand("verify", "run verification suites");
    std::vector<std::string> vf_checks;
    std::string vf_grid = "8x8", vf_format = "table", vf_out;
    int vf_trials = 100, vf_d = 2;
    std::uint64_t vf_seed = 7;
    bool vf_all = false;
    vf->add_flag("--all", vf_all, "run every suite");
    vf->add_option("--check", vf_checks, "suite name (repeatable); see --list");
    bool vf_list = false;
    vf->add_flag("--list", vf_list, "list suite names and exit");
    vf->add_option("--grid", vf_grid, "grid for the fixed-size suites");
    vf->add_option("--d", vf_d, "vector dimension");
    vf->add_option("--trials", vf_trials, "base trial count");
    vf->add_option("--seed", vf_seed, "random seed");
    double vf_tol = std::numeric_limits<double>::quiet_NaN();
    vf->add_option("--tol", vf_tol, "override every suite's assertion tolerance");
    vf->add_option("--format", vf_format, "table|json");
    vf->add_option("--out", vf_out, "output path (default stdout)");

    // ---- report ----
    auto* rp = app.add_subcommand("report", "norm-ratio report for one operator");
    std::string rp_in, rp_op = "mws", rp_p = "2", rp_format = "csv", rp_out;
    double rp_qfrom = 0.0, rp_qto = 0.0;
    int rp_qsteps = 0;
    rp->add_option("--in", rp_in, "input field document")->required();
    rp->add_option("--op", rp_op, "m|ms|mw|mws|mk|mks");
    rp->add_option("--p", rp_p, "exponent in (1, inf]");
    rp->add_option("--q-from", rp_qfrom, "sweep start (enables sweep)");
    rp->add_option("--q-to", rp_qto, "sweep end");
    rp->add_option("--q-steps", rp_qsteps, "sweep point count (default 9)");
    rp->add_option("--format", rp_format, "csv|json");
    rp->add_option("--out", rp_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (gen->parsed()) {
        const Grid grid = parse_grid(gen_grid);
        gen_params.d = gen_d;
        FieldDoc doc;
        doc.grid = grid;
        doc.d = gen_d;
        doc.weight = gen_weight(weight_kind_from_name(gen_kind), gen_params, grid, gen_seed);
        Rng rng(gen_seed ^ 0x5eedf00dULL);
        doc.f = random_vector_field(grid, gen_d, rng);
        if (gen_bodies)
            doc.bodies = random_set_field(grid, gen_d, rng);
        emit(field_doc_json(doc).dump(2) + "\n", gen_out);
        return 0;
    }

    if (apc->parsed()) {
        const FieldDoc doc = read_field_doc(apc_in);
        if (!doc.weight)
            throw IoError("apconst: document has no weight");
        if (apc_slices) {
            const SliceApReport rep = slice_ap_report(*doc.weight, parse_p(apc_p));
            emit(apc_format == "json" ? slice_report_json(rep).dump(2) + "\n" : slice_report_csv(rep),
                 apc_out);
            return 0;
        }
        const ApReport rep = ap_constant(*doc.weight, parse_p(apc_p), family_from_name(apc_family), apc_table);
        emit(apc_format == "json" ? ap_report_json(rep).dump(2) + "\n" : ap_report_csv(rep), apc_out);
        return 0;
    }

    if (mx->parsed()) {
        const FieldDoc doc = read_field_doc(mx_in);
        if (!doc.f)
            throw IoError("maximal: document has no f");
        MaxParams params;
        params.family = family_from_name(mx_family);
        WeightField w = mx_weight == "identity" ? identity_weight(doc.grid, doc.d)
                                                : (doc.weight ? *doc.weight
                                                              : throw IoError("maximal: document has no weight"));
        const ScalarField out = cg_max(w, *doc.f, params);
        emit(scalar_field_json(out).dump(2) + "\n", mx_out);
        return 0;
    }

    if (sm->parsed()) {
        const FieldDoc doc = read_field_doc(sm_in);
        if (!doc.bodies)
            throw IoError("setmax: document has no F");
        MaxParams params;
        params.family = family_from_name(sm_family);
        params.budget.max_vertices = sm_max_vertices;
        SetField out = *doc.bodies;
        if (sm_axis != 0) {
            out = set_max_axis(out, sm_axis, params.budget);
            for (int k = 1; k < sm_iterate; ++k)
                out = set_max_axis(out, sm_axis, params.budget);
        } else {
            out = iterate_set_max(out, sm_iterate, params);
        }
        emit(set_field_json(out).dump(2) + "\n", sm_out);
        return 0;
    }

    if (vf->parsed()) {
        if (vf_list) {
            for (const std::string& name : all_check_names())
                std::cout << name << "\n";
            return 0;
        }
        if (!vf_all && vf_checks.empty())
            throw std::invalid_argument("verify: pass --all or at least one --check");
        const Grid grid = parse_grid(vf_grid);
        VerifyConfig cfg;
        cfg.seed = vf_seed;
        cfg.trials = vf_trials;
        cfg.levels1 = grid.levels1;
        cfg.levels2 = grid.levels2;
        cfg.d = vf_d;
        if (!std::isnan(vf_tol))
            cfg.tol = vf_tol;
        const std::vector<CheckResult> results = run_checks(vf_all ? std::vector<std::string>{} : vf_checks, cfg);
        bool failed = false;
        for (const CheckResult& r : results)
            failed = failed || !r.passed();
        if (vf_format == "json") {
            emit(check_results_json(results).dump(2) + "\n", vf_out);
        } else {
            std::string text = check_table(results);
            for (const CheckResult& r : results)
                if (!r.passed() && !r.witness.empty())
                    text += "witness[" + r.name + "]: " + r.witness + "\n";
            emit(text, vf_out);
        }
        return failed ? kExitVerifyFailed : 0;
    }

    if (rp->parsed()) {
        const FieldDoc doc = read_field_doc(rp_in);
        NormRatioOptions opt;
        opt.op = rp_op;
        opt.p = parse_p(rp_p);
        if (rp_qfrom > 0.0 || rp_qto > 0.0 || rp_qsteps > 0)
            opt.qs = default_q_sweep(opt.p, rp_qfrom, rp_qto, rp_qsteps > 0 ? rp_qsteps : 9);
        const WeightField w = doc.weight ? *doc.weight : identity_weight(doc.grid, doc.d);
        const NormRatioReport rep =
            norm_ratio_report(w, doc.f ? &*doc.f : nullptr, doc.bodies ? &*doc.bodies : nullptr, opt);
        emit(rp_format == "json" ? norm_ratio_json(rep).dump(2) + "\n" : norm_ratio_csv(rep), rp_out);
        return 0;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const NearSingularError& e) {
        std::fprintf(stderr, "degenerate input: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
}
