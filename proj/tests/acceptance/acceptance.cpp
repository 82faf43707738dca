// Acceptance run: one PASS/FAIL line per criterion with its runtime.
// Exits 0 once every criterion has been evaluated; --strict also fails on any FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pwsharp/applications.hpp"
#include "pwsharp/bounds.hpp"
#include "pwsharp/errors.hpp"
#include "pwsharp/extremal.hpp"
#include "pwsharp/oracles.hpp"
#include "pwsharp/sharpsolve.hpp"
#include "pwsharp/specialfn.hpp"

using namespace pwsharp;

namespace {

constexpr double pi = std::numbers::pi;
const std::vector<double> lattice = {-0.9, -0.5, 0.0, 1.0, 2.5, 5.0};

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& what) {
        if (!pass) {
            detail << "; ";
        }
        pass = false;
        detail << what;
    }
};

std::string num(double v, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

double lambda0(double beta, int k) { return solve_homogeneous(SpaceOrder(beta), k).lambda0; }

bool in_printed(double v, double printed) { return v >= printed && v < printed + 0.01; }

void beta_half_table(Verdict& v) {
    const double l1 = lambda0(-0.5, 1);
    const double l3 = lambda0(-0.5, 3);
    if (std::abs(l1 - pi / 2) > 1e-9) v.fail("k=1 gives " + num(l1, 15));
    if (std::abs(l3 - pi) > 1e-9) v.fail("k=3 gives " + num(l3, 15));
    for (auto [k, p] : std::vector<std::pair<int, double>>{{2, 2.36}, {4, 3.90}, {5, 4.67}, {6, 5.43}, {7, 6.18}}) {
        const double l = lambda0(-0.5, k);
        if (!in_printed(l, p)) v.fail("k=" + std::to_string(k) + " gives " + num(l, 8));
    }
    if (v.pass) v.detail << "|k=1 - pi/2| = " << num(std::abs(l1 - pi / 2), 3) << ", |k=3 - pi| = " << num(std::abs(l3 - pi), 3);
}

void ep2_table(Verdict& v) {
    const std::vector<std::pair<int, double>> table = {{2, 4.26},  {4, 4.76},  {6, 5.23},  {8, 5.66},
                                                       {10, 6.07}, {12, 6.45}, {14, 6.81}, {16, 7.15}};
    for (auto [d, p] : table) {
        const double root = std::pow(ep2_constant(d, 1.0), 1.0 / d);
        if (!in_printed(root, p)) v.fail("d=" + std::to_string(d) + " gives " + num(root, 8));
    }
    if (v.pass) v.detail << "8 dimensions inside [v, v+0.01)";
}

void k_one_identity(Verdict& v) {
    double worst = 0.0;
    for (double beta : lattice) {
        const double diff = std::abs(lambda0(beta, 1) - bessel_zero(SpaceOrder(beta), 1));
        worst = std::max(worst, diff);
        if (diff > 1e-10) v.fail("beta=" + num(beta) + " differs by " + num(diff, 3));
    }
    if (v.pass) v.detail << "max difference " << num(worst, 3);
}

void x6_inequality(Verdict& v) {
    const double c = ep1_constant(SpaceOrder(-0.5), 3, pi);
    if (std::abs(c - 1.0) > 1e-8) v.fail("EP1 = " + num(c, 15));
    else v.detail << "|EP1 - 1| = " << num(std::abs(c - 1.0), 3);
}

void oracle_equivalence(Verdict& v) {
    double worst = 0.0;
    for (double beta : {-0.5, 0.0, 1.0}) {
        for (int k : {2, 3, 4, 5}) {
            SharpProblem p(homogeneous_space(SpaceOrder(beta)), k);
            const double c = solve_lambda0(p).constant;
            const double g100 = galerkin_value(p, {100}).value;
            const double g200 = galerkin_value(p, {200}).value;
            const double g400 = galerkin_value(p, {400}).value;
            const double gap = (g400 - c) / c;
            worst = std::max(worst, gap);
            const std::string cell = "(" + num(beta) + "," + std::to_string(k) + ")";
            if (!(g400 >= c)) v.fail(cell + " below solver");
            if (gap > 1e-3) v.fail(cell + " gap " + num(gap, 3));
            if (!(g100 > g200 && g200 > g400)) v.fail(cell + " gap not decreasing");
        }
    }
    v.detail << (v.pass ? "" : "; ") << "largest gap " << num(worst, 3);
}

void fd_cross_check(Verdict& v) {
    const double m1 = fd_poincare_value({200, 1, 0, 1.0}).value;
    const double m2 = std::pow(fd_poincare_value({200, 2, 0, 1.0}).value, 0.25);
    if (std::abs(m1 - pi * pi / 4) > 1e-3) v.fail("m=1 gives " + num(m1, 10));
    if (!(m2 >= 2.36 && m2 < 2.37)) v.fail("m=2 fourth root " + num(m2, 10));
    if (v.pass) v.detail << "m=1 error " << num(std::abs(m1 - pi * pi / 4), 3) << ", m=2 root " << num(m2, 8);
}

void extremizer_suite(Verdict& v) {
    for (auto [beta, k] : std::vector<std::pair<double, int>>{{-0.5, 2}, {-0.5, 3}, {0.0, 4}}) {
        SharpProblem p(homogeneous_space(SpaceOrder(beta)), k);
        SharpConstantResult r = solve_lambda0(p);
        ExtremizerCoefficients e = extremizer_coeffs(p, r, 400);
        const double rel = std::abs(rayleigh_quotient(e, TailMode::Analytic) / r.constant - 1);
        const double rel_trunc = std::abs(rayleigh_quotient(e, TailMode::Truncated) / r.constant - 1);
        const std::string cell = "(" + num(beta) + "," + std::to_string(k) + ")";
        if (rel > 1e-6) v.fail(cell + " Rayleigh error " + num(rel, 3));
        double worst_c = 0.0;
        for (double c : constraint_residuals(e, TailMode::Analytic)) worst_c = std::max(worst_c, c);
        if (worst_c > 1e-6) v.fail(cell + " constraint residual " + num(worst_c, 3));
        v.detail << cell << " RQ err " << num(rel, 2) << " (truncated " << num(rel_trunc, 2) << "), constraints "
                 << num(worst_c, 2) << "; ";
    }
    SharpProblem p(homogeneous_space(SpaceOrder(-0.5)), 3);
    ExtremizerCoefficients e = extremizer_coeffs(p, solve_lambda0(p), 400);
    double dot_xi = 0, dot_a = 0, nx = 0, na = 0, nw = 0;
    for (int n = 1; n <= 400; ++n) {
        const double h = n - 0.5;
        const double w = h * h / (std::pow(h, 6) - 1);
        const double a = e.a[n - 1];
        const double axi = a * p.space().zero(n);
        dot_xi += axi * w;
        dot_a += a * w;
        nx += axi * axi;
        na += a * a;
        nw += w * w;
    }
    const double cos_xi = std::abs(dot_xi) / std::sqrt(nx * nw);
    const double cos_a = std::abs(dot_a) / std::sqrt(na * nw);
    if (cos_xi < 1 - 1e-8) v.fail("cosine " + num(cos_xi, 12));
    v.detail << "cosine(a_n xi_n, display) = 1 - " << num(std::max(0.0, 1 - cos_xi), 2) << " (a_n alone: 1 - " << num(std::max(0.0, 1 - cos_a), 2)
             << ")";
}

void bound_dominance(Verdict& v) {
    double min_margin = INFINITY;
    for (double beta : lattice) {
        for (int k = 1; k <= 8; ++k) {
            const double lhs = 2 * k * std::log(lambda0(beta, k));
            const double margin = upper_bound_log_ep1(beta + k, beta) - lhs;
            min_margin = std::min(min_margin, margin);
            if (!(margin >= 0)) v.fail("(" + num(beta) + "," + std::to_string(k) + ") margin " + num(margin, 3));
        }
    }
    v.detail << (v.pass ? "" : "; ") << "smallest margin " << num(min_margin, 4);
}

void asymptotics(Verdict& v, const std::string& fixture) {
    std::ifstream in(fixture);
    if (!in) {
        v.fail("fixture " + fixture + " not readable");
        return;
    }
    const nlohmann::json doc = nlohmann::json::parse(in);
    const double stored = doc.at("max_ratio").get<double>();
    Lambda0Memo memo;
    double max_ratio = 0.0;
    for (const auto& row : asymptotics_report(doc.at("beta_grid").get<std::vector<double>>(), doc.at("k_max").get<int>(), memo)) {
        if (!std::isfinite(row.ratio)) v.fail("non-finite ratio");
        max_ratio = std::max(max_ratio, row.ratio);
    }
    if (max_ratio > 1.1 * stored) v.fail("max ratio " + num(max_ratio) + " above 1.1 x " + num(stored));
    // log lambda0(-1/2, k) - log(k + 3/2) up to k = 16: bounded, with shrinking increments.
    double first_step = 0, last_step = 0, prev = 0, lo = INFINITY, hi = -INFINITY;
    for (int k = 1; k <= 16; ++k) {
        const double d = std::log(memo.get(-0.5, k).lambda0) - std::log(k + 1.5);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        if (k == 2) first_step = std::abs(d - prev);
        if (k == 16) last_step = std::abs(d - prev);
        prev = d;
    }
    if (!(hi - lo < 1.0 && last_step < first_step)) v.fail("log lambda0 - log(k+3/2) drifts over [" + num(lo) + ", " + num(hi) + "]");
    v.detail << (v.pass ? "" : "; ") << "max ratio " << num(max_ratio) << " (fixture " << num(stored)
             << "), log lambda0 - log(k+3/2) in [" << num(lo, 4) << ", " << num(hi, 4) << "]";
}

void specialfn_suite(Verdict& v) {
    const std::vector<double> nus = {-0.9, -0.5, 0.0, 1.0, 2.5};
    double ode = 0, red = 0, path = 0;
    for (double nu : nus) {
        SpaceOrder o(nu);
        for (double x = 0.1; x <= 20.0; x += 0.1) {
            const double h = 1e-5;
            const double dA = (eval_A(o, x + h).real() - eval_A(o, x - h).real()) / (2 * h);
            const double dB = (eval_B(o, x + h).real() - eval_B(o, x - h).real()) / (2 * h);
            const CompanionPair ab = eval_AB(o, x);
            ode = std::max(ode, std::abs(dA + ab.B.real()));
            ode = std::max(ode, std::abs(dB - (ab.A.real() - (2 * nu + 1) / x * ab.B.real())));
            const double k = kernel_diag(o, x);
            if (!(k > 0)) v.fail("kernel not positive at nu=" + num(nu) + " x=" + num(x));
        }
        for (double x = 0.0; x <= 2 * std::sqrt(nu + 1); x += 0.01) {
            const double a = eval_A(o, x).real();
            if (a > 1 + 1e-15 || a < 1 - x * x / (4 * (nu + 1)) - 1e-15) v.fail("A bound at nu=" + num(nu) + " x=" + num(x));
        }
        for (double x = 0.0; x <= 2 * std::sqrt(nu + 2); x += 0.01) {
            if (eval_B(o, x).real() > x / (2 * (nu + 1)) + 1e-15) v.fail("B bound at nu=" + num(nu) + " x=" + num(x));
        }
        for (double x : {24.0, -24.0}) {
            const CompanionPair s = eval_AB_series(o, x);
            const CompanionPair a = eval_AB_asymptotic(o, x);
            path = std::max(path, std::abs(s.A - a.A) / std::abs(s.A));
            path = std::max(path, std::abs(s.B - a.B) / std::abs(s.B));
        }
        for (Complex z : {Complex(3.7, 1.2), Complex(-11.0, 4.0), Complex(0.5, -2.0)}) {
            if (std::abs(eval_A(o, std::conj(z)) - std::conj(eval_A(o, z))) > 1e-13 * std::abs(eval_A(o, z)) ||
                std::abs(eval_B(o, std::conj(z)) - std::conj(eval_B(o, z))) > 1e-13 * std::abs(eval_B(o, z))) {
                v.fail("conjugate symmetry at nu=" + num(nu));
            }
        }
        for (int n = 1; n <= 30; ++n) {
            if (!(std::abs(eval_B(o, bessel_zero(o, n))) > 0)) v.fail("zero not simple at nu=" + num(nu));
        }
    }
    SpaceOrder half(-0.5);
    for (double re = -20; re <= 20; re += 0.5) {
        for (double im : {0.0, -5.0, -2.5, 1.0, 5.0}) {
            const Complex z(re, im);
            if (std::abs(z) > 20) continue;
            red = std::max(red, std::abs(eval_A(half, z) - std::cos(z)));
            red = std::max(red, std::abs(eval_B(half, z) - std::sin(z)));
        }
    }
    if (ode > 1e-6) v.fail("ODE residual " + num(ode, 3));
    if (red > 1e-12) v.fail("cos/sin reduction " + num(red, 3));
    if (path > 1e-9) v.fail("path mismatch " + num(path, 3));
    v.detail << (v.pass ? "" : "; ") << "ODE " << num(ode, 2) << ", cos/sin " << num(red, 2) << ", paths " << num(path, 2);
}

void monotonicity(Verdict& v) {
    Lambda0Memo memo;
    try {
        MonotonicityReport rep = monotonicity_suite(lattice, 8, memo);
        double min_margin = INFINITY;
        for (const auto& c : rep.checks) min_margin = std::min(min_margin, c.margin);
        v.detail << rep.checks.size() << " relations, smallest margin " << num(min_margin, 4);
    } catch (const Error& e) {
        v.fail(e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = false;
    std::string fixture = PWSHARP_CALIBRATION_FIXTURE;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--strict") strict = true;
        else if (arg == "--fixture" && i + 1 < argc) fixture = argv[++i];
    }

    struct Criterion {
        int id;
        std::string name;
        double budget_s;  // 0 when no runtime bound applies
        std::function<void(Verdict&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "beta = -1/2 table", 10, beta_half_table},
        {2, "EP2 table", 60, ep2_table},
        {3, "k = 1 equals first Bessel zero", 0, k_one_identity},
        {4, "x^6 sharp inequality", 0, x6_inequality},
        {5, "Galerkin oracle equivalence", 0, oracle_equivalence},
        {6, "finite-difference cross-check", 0, fd_cross_check},
        {7, "extremizer suite", 0, extremizer_suite},
        {8, "upper-bound dominance", 0, bound_dominance},
        {9, "asymptotics calibration", 0, [&](Verdict& v) { asymptotics(v, fixture); }},
        {10, "special-function suite", 20, specialfn_suite},
        {11, "monotonicity suite", 0, monotonicity},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) v.fail("runtime " + num(secs, 3) + " s over " + num(c.budget_s) + " s");
        failed += v.pass ? 0 : 1;
        std::printf("%s criterion %2d  %-32s %7.2f s  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    v.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return strict && failed > 0 ? 1 : 0;
}
