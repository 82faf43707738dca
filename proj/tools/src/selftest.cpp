#include "pwsharp_cli/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "pwsharp/applications.hpp"
#include "pwsharp/bounds.hpp"
#include "pwsharp/errors.hpp"
#include "pwsharp/extremal.hpp"
#include "pwsharp/oracles.hpp"
#include "pwsharp/specialfn.hpp"

namespace pwsharp::cli {

namespace {

constexpr double pi = std::numbers::pi;

// Each check returns an empty string on success, otherwise a description of the failure.
using Check = std::function<std::string()>;

std::string fmt(const char* what, double got, double want) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want;
    return s.str();
}

std::string minus_half_reduction() {
    const SpaceOrder nu(-0.5);
    for (double re = -20.0; re <= 20.0; re += 0.5) {
        for (double im : {0.0, 2.5, -5.0}) {
            Complex z(re, im);
            CompanionPair ab = eval_AB(nu, z);
            double scale = std::max(1.0, std::abs(std::cos(z)));
            if (std::abs(ab.A - std::cos(z)) > 1e-12 * scale ||
                std::abs(ab.B - std::sin(z)) > 1e-12 * scale) {
                return fmt("A_{-1/2} - cos at Re z", re, 0.0);
            }
        }
    }
    return {};
}

std::string ode_residual() {
    const double h = 1e-5;
    for (double nu : {-0.9, -0.5, 0.0, 1.0, 2.5}) {
        for (double x = 0.1; x <= 20.0; x += 0.7) {
            double ap = (eval_A(SpaceOrder(nu), x + h).real() - eval_A(SpaceOrder(nu), x - h).real()) / (2 * h);
            double bp = (eval_B(SpaceOrder(nu), x + h).real() - eval_B(SpaceOrder(nu), x - h).real()) / (2 * h);
            CompanionPair ab = eval_AB(SpaceOrder(nu), x);
            if (std::abs(ap + ab.B.real()) > 1e-6) {
                return fmt("A' + B residual", ap + ab.B.real(), 0.0);
            }
            double rhs = ab.A.real() - (2 * nu + 1) / x * ab.B.real();
            if (std::abs(bp - rhs) > 1e-6) {
                return fmt("B' residual", bp - rhs, 0.0);
            }
        }
    }
    return {};
}

std::string bessel_bounds() {
    for (double nu : {-0.9, -0.5, 0.0, 1.0, 2.5}) {
        for (int i = 0; i <= 50; ++i) {
            double x = 2.0 * std::sqrt(nu + 1.0) * i / 50.0;
            double a = eval_A(SpaceOrder(nu), x).real();
            if (a > 1.0 + 1e-15 || a < 1.0 - x * x / (4 * (nu + 1)) - 1e-15) {
                return fmt("A bound violated at x", x, 0.0);
            }
            double y = 2.0 * std::sqrt(nu + 2.0) * i / 50.0;
            if (eval_B(SpaceOrder(nu), y).real() > y / (2 * (nu + 1)) + 1e-15) {
                return fmt("B bound violated at x", y, 0.0);
            }
        }
    }
    return {};
}

std::string kernel_positivity() {
    for (double nu : {-0.9, -0.5, 0.0, 1.0, 2.5}) {
        for (double x = 0.0; x <= 30.0; x += 0.25) {
            if (!(kernel_diag(SpaceOrder(nu), x) > 0.0)) {
                return fmt("K(x,x) not positive at x", x, 0.0);
            }
        }
    }
    return {};
}

std::string path_consistency() {
    EvalConfig cfg;
    for (double nu : {-0.9, -0.5, 0.0, 1.0, 2.5}) {
        for (double x : {cfg.series_cutoff_radius, -cfg.series_cutoff_radius}) {
            CompanionPair s = eval_AB_series(SpaceOrder(nu), x, cfg);
            CompanionPair a = eval_AB_asymptotic(SpaceOrder(nu), x, cfg);
            double scale = std::max(std::abs(s.A), std::abs(s.B));
            if (std::abs(s.A - a.A) > 1e-9 * scale || std::abs(s.B - a.B) > 1e-9 * scale) {
                return fmt("series/asymptotic mismatch for nu", nu, 0.0);
            }
        }
    }
    return {};
}

std::string zeros_check() {
    if (std::abs(bessel_zero(SpaceOrder(-0.5), 3) - 2.5 * pi) > 1e-12) {
        return fmt("j_{-1/2,3}", bessel_zero(SpaceOrder(-0.5), 3), 2.5 * pi);
    }
    if (std::abs(bessel_zero(SpaceOrder(0.5), 1) - pi) > 1e-12) {
        return fmt("j_{1/2,1}", bessel_zero(SpaceOrder(0.5), 1), pi);
    }
    for (double nu : {-0.9, 0.0, 2.5}) {
        double prev = 0.0;
        for (int n = 1; n <= 30; ++n) {
            double z = bessel_zero(SpaceOrder(nu), n);
            if (!(z > prev) || std::abs(eval_B(SpaceOrder(nu), z)) == 0.0) {
                return fmt("zero sequence broken at n", n, 0.0);
            }
            prev = z;
        }
    }
    return {};
}

std::string linalg_check() {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    auto random = [&](int n) {
        MatrixC m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m(i, j) = Complex(gauss(rng), gauss(rng));
            }
        }
        return m;
    };
    for (int t = 0; t < 5; ++t) {
        MatrixC a = random(5), b = random(5);
        Complex lhs = det_complex(a * b);
        Complex rhs = det_complex(a) * det_complex(b);
        if (std::abs(lhs - rhs) > 1e-10 * std::abs(rhs)) {
            return fmt("det(AB) relative error", std::abs(lhs - rhs) / std::abs(rhs), 0.0);
        }
        Eigen::VectorXcd u = Eigen::VectorXcd::Ones(5);
        Complex want = det_complex(a) * (u.transpose() * a.inverse() * u)(0, 0);
        if (std::abs(bordered_det(a) - want) > 1e-9 * std::abs(want)) {
            return "bordered determinant disagrees with det(M) u^T M^{-1} u";
        }
    }
    MatrixR s = MatrixR::Random(20, 20);
    s = 0.5 * (s + s.transpose()).eval();
    SymEig e = sym_eig(s);
    double res = (s - e.vectors * e.values.asDiagonal() * e.vectors.transpose()).norm();
    if (res > 1e-10 * s.norm()) {
        return fmt("eigen reconstruction residual", res, 0.0);
    }
    return {};
}

std::string interpolation_identity() {
    SpaceSpec sp = homogeneous_space(SpaceOrder(0.0));
    for (Complex z : {Complex(0.3), Complex(1.1), Complex(0.5, 0.5)}) {
        Complex want = sp.C(z) / (2.0 * z);
        double prev_err = 0.0;
        for (int N : {100, 200, 400}) {
            Complex sum = 0.0;
            for (int n = 1; n <= N; ++n) {
                double xi = sp.zero(n);
                sum += 1.0 / (sp.weight(n) * (xi * xi - z * z));
            }
            double err = std::abs(sum - want);
            if (prev_err > 0.0 && !(err < 0.6 * prev_err)) {
                return fmt("partial-sum error did not halve, ratio", err / prev_err, 0.5);
            }
            prev_err = err;
        }
    }
    return {};
}

std::string solver_reference(const SolveOptions& opts) {
    for (double beta : {-0.9, -0.5, 0.0, 1.0, 2.5, 5.0}) {
        double l = solve_homogeneous(SpaceOrder(beta), 1, opts).lambda0;
        if (std::abs(l - bessel_zero(SpaceOrder(beta), 1)) > 1e-10) {
            return fmt("lambda0(beta,1) - j_{beta,1} for beta", beta, 0.0);
        }
    }
    double l3 = solve_homogeneous(SpaceOrder(-0.5), 3, opts).lambda0;
    if (std::abs(l3 - pi) > 1e-9) {
        return fmt("lambda0(-1/2,3)", l3, pi);
    }
    double l2 = solve_homogeneous(SpaceOrder(-0.5), 2, opts).lambda0;
    if (!(l2 >= 2.36 && l2 < 2.37)) {
        return fmt("lambda0(-1/2,2)", l2, 2.36);
    }
    return {};
}

std::string determinant_lemma() {
    SharpProblem prob(homogeneous_space(SpaceOrder(0.0)), 4);
    for (double lambda : {1.0, 3.0, 4.0, 6.0}) {
        GValue g = eval_g(prob, lambda);
        Complex direct = prob.space().A(lambda) * det_complex(build_V(prob, lambda));
        if (std::abs(g.value - direct) > 1e-8 * (1.0 + std::abs(g.value))) {
            return fmt("g - A det V at lambda", lambda, 0.0);
        }
    }
    return {};
}

std::string pole_continuity() {
    SharpProblem prob(homogeneous_space(SpaceOrder(-0.5)), 4);
    for (int i = 1; i <= prob.ell(); ++i) {
        double xi = prob.space().zero(i);
        double lo = eval_g(prob, xi - 1e-6).value;
        double hi = eval_g(prob, xi + 1e-6).value;
        double mid = eval_g(prob, xi).value;
        if (std::abs(lo - hi) > 1e-4 * (1.0 + std::abs(mid))) {
            return fmt("jump of g across xi", xi, 0.0);
        }
    }
    return {};
}

std::string secular_agreement(const SolveOptions& opts) {
    SolveOptions det = opts, sec = opts;
    det.form = RootForm::Determinant;
    sec.form = RootForm::Secular;
    for (double beta : {-0.5, 1.0}) {
        SharpProblem prob(homogeneous_space(SpaceOrder(beta)), 6);
        double a = solve_lambda0(prob, det).lambda0;
        double b = solve_lambda0(prob, sec).lambda0;
        if (std::abs(a - b) > 1e-9 * a) {
            return fmt("determinant vs secular root for beta", beta, 0.0);
        }
    }
    return {};
}

std::string extremizer_check(const SolveOptions& opts) {
    SharpProblem prob(homogeneous_space(SpaceOrder(-0.5)), 3);
    SharpConstantResult res = solve_lambda0(prob, opts);
    ExtremizerCoefficients c = extremizer_coeffs(prob, res, 200);
    double rq = rayleigh_quotient(c, TailMode::Analytic);
    if (std::abs(rq - res.constant) > 1e-6 * res.constant) {
        return fmt("Rayleigh quotient", rq, res.constant);
    }
    for (double r : constraint_residuals(c, TailMode::Analytic)) {
        if (r > 1e-6) {
            return fmt("constraint residual", r, 0.0);
        }
    }
    if (c.kernel_residual > 1e-7) {
        return fmt("kernel residual", c.kernel_residual, 0.0);
    }
    // W is 1x1 for k = 3, so look at singularity on a 2x2 case.
    SharpProblem prob4(homogeneous_space(SpaceOrder(-0.5)), 4);
    MatrixR W = build_W(prob4, solve_lambda0(prob4, opts).lambda0);
    if (null_vector(W).value > 1e-7 * W.norm()) {
        return "W(lambda0) is not singular for k = 4";
    }
    // l = 4 goes through the secular system.
    SharpProblem prob8(homogeneous_space(SpaceOrder(0.0)), 8);
    SharpConstantResult res8 = solve_lambda0(prob8, opts);
    ExtremizerCoefficients c8 = extremizer_coeffs(prob8, res8, 200);
    double rq8 = rayleigh_quotient(c8, TailMode::Analytic);
    if (std::abs(rq8 - res8.constant) > 1e-6 * res8.constant) {
        return fmt("Rayleigh quotient for k = 8", rq8, res8.constant);
    }
    return {};
}

std::string galerkin_check(const SolveOptions& opts) {
    SharpProblem prob(homogeneous_space(SpaceOrder(-0.5)), 3);
    double c = solve_lambda0(prob, opts).constant;
    double g100 = galerkin_value(prob, {100}).value;
    double g200 = galerkin_value(prob, {200}).value;
    if (!(g100 >= g200 && g200 >= c * (1 - 1e-12))) {
        return fmt("Galerkin values not monotone, N=200 gives", g200, c);
    }
    if ((g200 - c) / c > 1e-4) {
        return fmt("Galerkin relative gap at N=200", (g200 - c) / c, 0.0);
    }
    return {};
}

std::string fd_check() {
    double v = fd_poincare_value({100, 1, 0, 1.0}).value;
    if (std::abs(v - pi * pi / 4) > 1e-3) {
        return fmt("FD m=1", v, pi * pi / 4);
    }
    return {};
}

std::string bounds_check(const SolveOptions& opts) {
    Lambda0Memo memo(opts);
    for (double beta : {-0.5, 0.0, 1.0}) {
        for (int k = 1; k <= 4; ++k) {
            double lhs = 2 * k * std::log(memo.get(beta, k).lambda0);
            if (!(upper_bound_log_ep1(beta + k, beta) > lhs)) {
                return fmt("upper bound fails for beta", beta, k);
            }
        }
    }
    monotonicity_suite({-0.5, 0.0}, 4, memo);
    return {};
}

std::string applications_check(const SolveOptions& opts) {
    double root = std::pow(ep2_constant(2, 1.0, opts), 0.5);
    if (!(root >= 4.26 && root < 4.27)) {
        return fmt("EP2(2)^{1/2}", root, 4.26);
    }
    PoincareQuery q1{2, 0, 1.0, std::nullopt};
    PoincareQuery q2{2, 0, 3.0, std::nullopt};
    double ratio = poincare_constant(q2, opts) / poincare_constant(q1, opts);
    if (std::abs(ratio - 81.0) > 1e-12 * 81.0) {
        return fmt("r-scaling of the Poincare constant", ratio, 81.0);
    }
    return {};
}

}  // namespace

std::vector<PropertyResult> run_selftest(const SolveOptions& opts) {
    const std::vector<std::pair<std::string, Check>> checks = {
        {"specialfn.minus_half_reduction", minus_half_reduction},
        {"specialfn.ode_residual", ode_residual},
        {"specialfn.bessel_bounds", bessel_bounds},
        {"specialfn.kernel_positivity", kernel_positivity},
        {"specialfn.path_consistency", path_consistency},
        {"specialfn.zeros", zeros_check},
        {"smalllinalg.identities", linalg_check},
        {"spaces.interpolation_identity", interpolation_identity},
        {"sharpsolve.reference_roots", [&] { return solver_reference(opts); }},
        {"sharpsolve.determinant_lemma", determinant_lemma},
        {"sharpsolve.pole_continuity", pole_continuity},
        {"sharpsolve.secular_agreement", [&] { return secular_agreement(opts); }},
        {"extremal.extremizer", [&] { return extremizer_check(opts); }},
        {"oracles.galerkin", [&] { return galerkin_check(opts); }},
        {"oracles.finite_difference", fd_check},
        {"bounds.dominance_and_monotonicity", [&] { return bounds_check(opts); }},
        {"applications.ep2_and_scaling", [&] { return applications_check(opts); }},
    };
    std::vector<PropertyResult> out;
    for (const auto& [name, check] : checks) {
        PropertyResult r;
        r.name = name;
        try {
            r.detail = check();
            r.ok = r.detail.empty();
        } catch (const Error& e) {
            r.detail = std::string(e.kind_name()) + ": " + e.what();
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace pwsharp::cli
