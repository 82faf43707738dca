#include "pwsharp_cli/cli.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "pwsharp/applications.hpp"
#include "pwsharp/bounds.hpp"
#include "pwsharp/errors.hpp"
#include "pwsharp/extremal.hpp"
#include "pwsharp/oracles.hpp"
#include "pwsharp/sharpsolve.hpp"
#include "pwsharp/zero_cache.hpp"
#include "pwsharp_cli/output.hpp"
#include "pwsharp_cli/selftest.hpp"

namespace pwsharp::cli {

namespace {

struct Reference {
    int index;
    double value;
    bool exact;  // exact values are matched to 1e-9, printed ones by [v, v + 0.01)
};

const std::vector<Reference> beta_half_reference = {
    {0, 1.0, true},   {1, std::numbers::pi / 2, true}, {2, 2.36, false}, {3, std::numbers::pi, true},
    {4, 3.90, false}, {5, 4.67, false},                {6, 5.43, false}, {7, 6.18, false},
};

const std::vector<Reference> ep2_reference = {
    {2, 4.26, false},  {4, 4.76, false},  {6, 5.23, false},  {8, 5.66, false},
    {10, 6.07, false}, {12, 6.45, false}, {14, 6.81, false}, {16, 7.15, false},
};

const Reference* find_reference(const std::vector<Reference>& table, int index) {
    for (const auto& r : table) {
        if (r.index == index) {
            return &r;
        }
    }
    return nullptr;
}

bool agrees(const Reference& ref, double v) {
    if (ref.exact) {
        return std::abs(v - ref.value) <= 1e-9;
    }
    return v >= ref.value && v < ref.value + 0.01;
}

std::string form_name(RootForm f) {
    switch (f) {
        case RootForm::Secular: return "secular";
        case RootForm::Determinant: return "determinant";
        default: return "auto";
    }
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions o;
    o.scan_step = cfg.scan_step;
    o.tol = cfg.tol;
    return o;
}

bool want_csv(const RunConfig& cfg, bool csv_by_default) {
    if (cfg.output_format == OutputFormat::Auto) {
        return csv_by_default;
    }
    return cfg.output_format == OutputFormat::Csv;
}

void emit_records(std::ostream& out, const RunConfig& cfg, const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows,
                  const std::vector<JsonObject>& json_rows, bool csv_by_default, bool single) {
    if (want_csv(cfg, csv_by_default)) {
        out << csv_line(header) << '\n';
        for (const auto& r : rows) {
            out << csv_line(r) << '\n';
        }
        return;
    }
    if (single && json_rows.size() == 1) {
        out << json_rows.front().str() << '\n';
        return;
    }
    std::vector<std::string> items;
    for (const auto& j : json_rows) {
        items.push_back(j.str());
    }
    out << json_array(items) << '\n';
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int cmd_constant(const RunConfig& cfg, std::ostream& out) {
    SharpConstantResult res = solve_homogeneous(SpaceOrder(cfg.beta), cfg.k, solve_options(cfg));
    double ep1 = std::pow(res.lambda0 / cfg.delta, 2 * cfg.k);
    JsonObject residuals;
    residuals.add("g", res.g_residual).add("imag", res.imag_residual).add("min_rel_g", res.min_rel_g);
    JsonObject j;
    j.add("beta", cfg.beta)
        .add("k", cfg.k)
        .add("delta", cfg.delta)
        .add("lambda0", res.lambda0)
        .add("constant", res.constant)
        .add("ep1", ep1)
        .add("bracket", std::vector<double>{res.bracket.first, res.bracket.second})
        .add("residuals", residuals)
        .add("scan_step", res.scan_step)
        .add("evaluations", res.evaluations)
        .add("form", form_name(res.form));
    std::vector<std::string> header = {"beta",      "k",         "delta",      "lambda0", "constant",
                                       "ep1",       "bracket_lo", "bracket_hi", "g_residual",
                                       "imag_residual", "min_rel_g", "scan_step", "form"};
    std::vector<std::string> row = {
        format_number(cfg.beta),         std::to_string(cfg.k),
        format_number(cfg.delta),        format_number(res.lambda0),
        format_number(res.constant),     format_number(ep1),
        format_number(res.bracket.first), format_number(res.bracket.second),
        format_number(res.g_residual),   format_number(res.imag_residual),
        format_number(res.min_rel_g),    format_number(res.scan_step),
        form_name(res.form)};
    emit_records(out, cfg, header, {row}, {j}, false, true);
    return exit_ok;
}

struct Cell {
    bool ok = false;
    double value = 0.0;
    double root = 0.0;
    std::string status;
};

int cmd_table(const RunConfig& cfg, std::ostream& out) {
    const bool ep2 = cfg.table_kind == "ep2";
    if (!ep2 && cfg.table_kind != "beta_half") {
        throw UsageError("table kind must be beta_half or ep2");
    }
    const int from = cfg.range_from.value_or(ep2 ? 2 : 0);
    const int to = cfg.range_to.value_or(ep2 ? 16 : 7);
    std::vector<int> indices;
    for (int i = from; i <= to; ++i) {
        if (!ep2 || i % 2 == 0) {
            indices.push_back(i);
        }
    }
    if (indices.empty()) {
        throw UsageError("empty range");
    }
    if (ep2 ? (from < 2 || to > 32) : (from < 0 || to > 16)) {
        throw UsageError(ep2 ? "ep2 table supports even d in [2, 32]"
                             : "beta_half table supports k in [0, 16]");
    }

    const SolveOptions opts = solve_options(cfg);
    std::vector<std::future<Cell>> jobs;
    for (int idx : indices) {
        jobs.push_back(std::async(std::launch::async, [idx, ep2, opts]() {
            Cell c;
            try {
                if (ep2) {
                    c.value = ep2_constant(idx, 1.0, opts);
                    c.root = std::pow(c.value, 1.0 / idx);
                } else if (idx == 0) {
                    c.value = 1.0;
                    c.root = 1.0;
                } else {
                    c.value = solve_homogeneous(SpaceOrder(-0.5), idx, opts).lambda0;
                    c.root = c.value;
                }
                c.ok = true;
                c.status = idx == 0 && !ep2 ? "trivial" : "ok";
            } catch (const Error& e) {
                c.status = std::string("error:") + e.kind_name();
            }
            return c;
        }));
    }

    std::vector<std::string> header = ep2 ? std::vector<std::string>{"d", "ep2", "ep2_root", "reference",
                                                                     "agrees", "status"}
                                          : std::vector<std::string>{"k", "lambda0", "reference",
                                                                     "agrees", "status"};
    std::vector<std::vector<std::string>> rows;
    std::vector<JsonObject> json_rows;
    int succeeded = 0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        Cell c = jobs[i].get();
        const Reference* ref = find_reference(ep2 ? ep2_reference : beta_half_reference, indices[i]);
        std::string agree = ref && c.ok ? (agrees(*ref, c.root) ? "yes" : "no") : "";
        std::vector<std::string> row = {std::to_string(indices[i])};
        JsonObject j;
        j.add(ep2 ? "d" : "k", indices[i]);
        if (ep2) {
            row.push_back(c.ok ? format_number(c.value) : "");
            j.add("ep2", c.ok ? c.value : std::nan(""));
        }
        row.push_back(c.ok ? format_number(c.root) : "");
        j.add(ep2 ? "ep2_root" : "lambda0", c.ok ? c.root : std::nan(""));
        row.push_back(ref ? format_number(ref->value) : "");
        if (ref) {
            j.add("reference", ref->value);
        } else {
            j.add_null("reference");
        }
        row.push_back(agree);
        if (agree.empty()) {
            j.add_null("agrees");
        } else {
            j.add("agrees", agree == "yes");
        }
        row.push_back(c.status);
        j.add("status", c.status);
        rows.push_back(std::move(row));
        json_rows.push_back(std::move(j));
        succeeded += c.ok;
    }
    emit_records(out, cfg, header, rows, json_rows, true, false);
    return succeeded > 0 ? exit_ok : exit_error;
}

int cmd_extremizer(const RunConfig& cfg, std::ostream& out) {
    SharpProblem prob(homogeneous_space(SpaceOrder(cfg.beta)), cfg.k);
    SharpConstantResult res = solve_lambda0(prob, solve_options(cfg));
    ExtremizerCoefficients coeffs = extremizer_coeffs(prob, res, cfg.N);
    if (want_csv(cfg, true)) {
        out << csv_line({"x", "re_f", "im_f"}) << '\n';
        for (int i = 0; i < cfg.samples; ++i) {
            double x = cfg.samples == 1
                           ? cfg.x_min
                           : cfg.x_min + (cfg.x_max - cfg.x_min) * i / (cfg.samples - 1);
            ExtremizerValue v = eval_extremizer(coeffs, x);
            out << csv_line({format_number(x), format_number(v.value.real()),
                             format_number(v.value.imag())})
                << '\n';
        }
        return exit_ok;
    }
    JsonObject j;
    j.add("beta", cfg.beta)
        .add("k", cfg.k)
        .add("N", cfg.N)
        .add("lambda0", res.lambda0)
        .add("head", std::vector<double>(coeffs.head.data(), coeffs.head.data() + coeffs.head.size()))
        .add("a", coeffs.a)
        .add("kernel_residual", coeffs.kernel_residual)
        .add("rayleigh_quotient", rayleigh_quotient(coeffs, TailMode::Analytic))
        .add("constraint_residuals", constraint_residuals(coeffs, TailMode::Analytic));
    if (coeffs.multiplicity_warning) {
        j.add("multiplicity_warning", *coeffs.multiplicity_warning);
    } else {
        j.add_null("multiplicity_warning");
    }
    out << j.str() << '\n';
    return exit_ok;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    const SolveOptions opts = solve_options(cfg);
    if (cfg.oracle_kind == "fd") {
        FDConfig fc;
        fc.grid_points = cfg.fd_grid;
        fc.order_m = cfg.fd_m;
        fc.radius = cfg.radius;
        FDResult fd = fd_poincare_value(fc);
        double lambda0 = solve_homogeneous(SpaceOrder(-0.5), cfg.fd_m, opts).lambda0;
        double reference = std::pow(lambda0 / cfg.radius, 2 * cfg.fd_m);
        JsonObject j;
        j.add("kind", "fd")
            .add("m", cfg.fd_m)
            .add("r", cfg.radius)
            .add("grid_points", cfg.fd_grid)
            .add("value", fd.value)
            .add("coarse", fd.coarse)
            .add("fine", fd.fine)
            .add("solver", reference)
            .add("rel_gap", (fd.value - reference) / reference);
        std::vector<std::string> header = {"kind", "m", "r", "grid_points", "value", "coarse",
                                           "fine", "solver", "rel_gap"};
        std::vector<std::string> row = {"fd",
                                        std::to_string(cfg.fd_m),
                                        format_number(cfg.radius),
                                        std::to_string(cfg.fd_grid),
                                        format_number(fd.value),
                                        format_number(fd.coarse),
                                        format_number(fd.fine),
                                        format_number(reference),
                                        format_number((fd.value - reference) / reference)};
        emit_records(out, cfg, header, {row}, {j}, false, true);
        return exit_ok;
    }
    if (cfg.oracle_kind != "galerkin") {
        throw UsageError("oracle kind must be galerkin or fd");
    }
    SharpProblem prob(homogeneous_space(SpaceOrder(cfg.beta)), cfg.k);
    SharpConstantResult res = solve_lambda0(prob, opts);
    GalerkinConfig gc;
    gc.N = cfg.N;
    GalerkinResult gal = galerkin_value(prob, gc);
    double gap = (gal.value - res.constant) / res.constant;
    JsonObject j;
    j.add("kind", "galerkin")
        .add("beta", cfg.beta)
        .add("k", cfg.k)
        .add("N", cfg.N)
        .add("solver", res.constant)
        .add("galerkin", gal.value)
        .add("rel_gap", gap);
    std::vector<std::string> header = {"kind", "beta", "k", "N", "solver", "galerkin", "rel_gap"};
    std::vector<std::string> row = {"galerkin",          format_number(cfg.beta),
                                    std::to_string(cfg.k), std::to_string(cfg.N),
                                    format_number(res.constant), format_number(gal.value),
                                    format_number(gap)};
    emit_records(out, cfg, header, {row}, {j}, false, true);
    return exit_ok;
}

int cmd_asymptotics(const RunConfig& cfg, std::ostream& out) {
    Lambda0Memo memo(solve_options(cfg));
    std::vector<AsymptoticsReport> rep = asymptotics_report(cfg.betas, cfg.k_max, memo);
    std::vector<std::string> header = {"alpha",    "beta",           "log_ep1", "main_term",
                                       "envelope", "upper_bound_log", "ratio"};
    std::vector<std::vector<std::string>> rows;
    std::vector<JsonObject> json_rows;
    for (const auto& r : rep) {
        rows.push_back({format_number(r.alpha), format_number(r.beta), format_number(r.log_ep1),
                        format_number(r.main_term), format_number(r.envelope),
                        format_number(r.upper_bound_log), format_number(r.ratio)});
        JsonObject j;
        j.add("alpha", r.alpha)
            .add("beta", r.beta)
            .add("log_ep1", r.log_ep1)
            .add("main_term", r.main_term)
            .add("envelope", r.envelope)
            .add("upper_bound_log", r.upper_bound_log)
            .add("ratio", r.ratio);
        json_rows.push_back(std::move(j));
    }
    emit_records(out, cfg, header, rows, json_rows, false, false);
    return exit_ok;
}

int cmd_poincare(const RunConfig& cfg, std::ostream& out) {
    PoincareQuery q;
    q.m = cfg.m;
    q.n = cfg.n;
    q.r = cfg.radius;
    if (cfg.d) {
        q.laplacian = LaplacianFlags{*cfg.d, cfg.m1, cfg.n1};
    }
    const SolveOptions opts = solve_options(cfg);
    double c = q.laplacian ? laplacian_poincare_constant(q, opts) : poincare_constant(q, opts);
    JsonObject j;
    j.add("m", cfg.m).add("n", cfg.n).add("r", cfg.radius);
    std::vector<std::string> header = {"m", "n", "r"};
    std::vector<std::string> row = {std::to_string(cfg.m), std::to_string(cfg.n),
                                    format_number(cfg.radius)};
    if (cfg.d) {
        j.add("d", *cfg.d).add("m1", cfg.m1).add("n1", cfg.n1);
        header.insert(header.end(), {"d", "m1", "n1"});
        row.insert(row.end(),
                   {std::to_string(*cfg.d), std::to_string(cfg.m1), std::to_string(cfg.n1)});
    }
    j.add("constant", c);
    header.push_back("constant");
    row.push_back(format_number(c));
    emit_records(out, cfg, header, {row}, {j}, false, true);
    return exit_ok;
}

int cmd_ep2(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.d) {
        throw UsageError("ep2 needs --d");
    }
    double v = ep2_constant(*cfg.d, cfg.delta, solve_options(cfg));
    double root = std::pow(v, 1.0 / *cfg.d);
    JsonObject j;
    j.add("d", *cfg.d).add("delta", cfg.delta).add("ep2", v).add("root", root);
    emit_records(out, cfg, {"d", "delta", "ep2", "root"},
                 {{std::to_string(*cfg.d), format_number(cfg.delta), format_number(v),
                   format_number(root)}},
                 {j}, false, true);
    return exit_ok;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
    std::vector<PropertyResult> results = run_selftest(solve_options(cfg));
    int failed = 0;
    for (const auto& r : results) {
        out << (r.ok ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) {
            out << "  " << r.detail;
        }
        out << '\n';
        failed += !r.ok;
    }
    out << (results.size() - failed) << "/" << results.size() << " properties passed\n";
    return failed == 0 ? exit_ok : exit_failed;
}

std::size_t registry_size() {
    std::size_t n = 0;
    for (const auto& t : ZeroRegistry::instance().tables()) {
        n += t->snapshot().size();
    }
    return n;
}

}  // namespace

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::DomainError, msg); };
    if (!(beta > -1.0) || !std::isfinite(beta)) {
        fail("beta must be a finite number > -1");
    }
    if (k < 1) {
        fail("k must be >= 1");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        fail("delta must be positive");
    }
    if (N < 2) {
        fail("N must be >= 2");
    }
    if (scan_step && !(*scan_step > 0.0)) {
        fail("scan_step must be positive");
    }
    if (!(tol > 0.0)) {
        fail("tol must be positive");
    }
    if (samples < 1) {
        fail("samples must be >= 1");
    }
    if (!(x_max >= x_min)) {
        fail("x-max must be >= x-min");
    }
    if (!(radius > 0.0)) {
        fail("radius must be positive");
    }
    if (k_max < 1) {
        fail("kmax must be >= 1");
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Sharp constants and extremizers for weighted Paley-Wiener embeddings", "pwsharp"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "auto";
    std::string cache;
    bool no_cache = false;
    double scan_step = 0.0;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"auto", "json", "csv"}));
    app.add_option("--cache", cache, "Zero cache path (default: $PWSHARP_ZERO_CACHE or XDG cache)");
    app.add_flag("--no-cache", no_cache, "Neither read nor write the zero cache");
    auto* step_opt = app.add_option("--scan-step", scan_step, "Root scan step (default auto)");
    app.add_option("--tol", cfg.tol, "Bisection tolerance")->capture_default_str();

    auto* constant = app.add_subcommand("constant", "lambda0 and (EP1) for a homogeneous space");
    constant->add_option("--beta", cfg.beta, "Space order beta > -1")->capture_default_str();
    constant->add_option("--k", cfg.k, "Power k >= 1")->capture_default_str();
    constant->add_option("--delta", cfg.delta, "Type delta > 0")->capture_default_str();

    auto* table = app.add_subcommand("table", "Reference tables with agreement column");
    table->add_option("--kind", cfg.table_kind, "beta_half or ep2")->capture_default_str();
    table->add_option("--from", cfg.range_from, "First k (beta_half) or d (ep2)");
    table->add_option("--to", cfg.range_to, "Last k (beta_half) or d (ep2)");

    auto* extremizer = app.add_subcommand("extremizer", "Sample or list the extremizer");
    extremizer->add_option("--beta", cfg.beta)->capture_default_str();
    extremizer->add_option("--k", cfg.k)->capture_default_str();
    extremizer->add_option("--N", cfg.N, "Truncation")->capture_default_str();
    extremizer->add_option("--x-min", cfg.x_min)->capture_default_str();
    extremizer->add_option("--x-max", cfg.x_max)->capture_default_str();
    extremizer->add_option("--samples", cfg.samples)->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "Galerkin or finite-difference cross-check");
    oracle->add_option("--kind", cfg.oracle_kind, "galerkin or fd")->capture_default_str();
    oracle->add_option("--beta", cfg.beta)->capture_default_str();
    oracle->add_option("--k", cfg.k)->capture_default_str();
    oracle->add_option("--N", cfg.N)->capture_default_str();
    oracle->add_option("--m", cfg.fd_m, "FD derivative order (1 or 2)")->capture_default_str();
    oracle->add_option("--grid", cfg.fd_grid, "FD interior points")->capture_default_str();
    oracle->add_option("--r", cfg.radius)->capture_default_str();

    auto* asym = app.add_subcommand("asymptotics", "Main term, envelope and bound per lattice cell");
    asym->add_option("--betas", cfg.betas, "Comma-separated beta grid")->delimiter(',');
    asym->add_option("--kmax", cfg.k_max)->capture_default_str();

    auto* poincare = app.add_subcommand("poincare", "Sharp Poincare constant on (-r, r) or a ball");
    poincare->add_option("--m", cfg.m)->capture_default_str();
    poincare->add_option("--n", cfg.n)->capture_default_str();
    poincare->add_option("--r", cfg.radius)->capture_default_str();
    poincare->add_option("--d", cfg.d, "Dimension for the Laplacian form");
    poincare->add_option("--m1", cfg.m1)->capture_default_str();
    poincare->add_option("--n1", cfg.n1)->capture_default_str();

    auto* ep2 = app.add_subcommand("ep2", "Delta-majorant constant in even dimension");
    ep2->add_option("--d", cfg.d, "Even dimension")->required();
    ep2->add_option("--delta", cfg.delta)->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "Invariant suite at reduced scale");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
        return exit_usage;
    }

    cfg.output_format = format == "json" ? OutputFormat::Json
                        : format == "csv" ? OutputFormat::Csv
                                          : OutputFormat::Auto;
    cfg.use_cache = !no_cache;
    cfg.cache_path = cache.empty() ? default_zero_cache_path() : std::filesystem::path(cache);
    if (step_opt->count() > 0) {
        cfg.scan_step = scan_step;
    }
    if (constant->parsed()) cfg.command = Command::Constant;
    else if (table->parsed()) cfg.command = Command::Table;
    else if (extremizer->parsed()) cfg.command = Command::Extremizer;
    else if (oracle->parsed()) cfg.command = Command::Oracle;
    else if (asym->parsed()) cfg.command = Command::Asymptotics;
    else if (poincare->parsed()) cfg.command = Command::Poincare;
    else if (ep2->parsed()) cfg.command = Command::Ep2;
    else if (selftest->parsed()) cfg.command = Command::Selftest;

    if (cfg.use_cache) {
        ZeroCacheStatus st = load_zero_cache(cfg.cache_path);
        if (st.corrupt) {
            err << "zero cache at " << cfg.cache_path.string() << " is unreadable; rebuilding\n";
        }
    }
    const std::size_t zeros_before = registry_size();

    int code = exit_ok;
    try {
        cfg.validate();
        switch (cfg.command) {
            case Command::Constant: code = cmd_constant(cfg, out); break;
            case Command::Table: code = cmd_table(cfg, out); break;
            case Command::Extremizer: code = cmd_extremizer(cfg, out); break;
            case Command::Oracle: code = cmd_oracle(cfg, out); break;
            case Command::Asymptotics: code = cmd_asymptotics(cfg, out); break;
            case Command::Poincare: code = cmd_poincare(cfg, out); break;
            case Command::Ep2: code = cmd_ep2(cfg, out); break;
            case Command::Selftest: code = cmd_selftest(cfg, out); break;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        JsonObject body;
        body.add("kind", e.kind_name()).add("message", std::string(e.what()));
        JsonObject j;
        j.add("error", body);
        out << j.str() << '\n';
        code = exit_error;
    }

    if (cfg.use_cache && registry_size() != zeros_before) {
        try {
            save_zero_cache(cfg.cache_path);
        } catch (const std::exception& e) {
            err << "warning: zero cache not written: " << e.what() << '\n';
        }
    }
    return code;
}

}  // namespace pwsharp::cli
