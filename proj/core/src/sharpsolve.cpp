#include "pwsharp/sharpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>

#include "pwsharp/errors.hpp"

namespace pwsharp {

SharpProblem::SharpProblem(SpaceSpec space, int k)
    : _space(std::move(space)),
      _k(k),
      _ell(k / 2),
      _taylor(std::make_shared<Taylor>()),
      _secular(std::make_shared<Secular>()) {
    if (k < 1) {
        throw Error(ErrorKind::DomainError, "k must be >= 1");
    }
    if (_space.zero_count() && *_space.zero_count() < _ell + 1) {
        throw Error(ErrorKind::DomainError, "space provides fewer than ell+1 zeros");
    }
    _roots.resize(2 * k);
    for (int j = 0; j < 2 * k; ++j) {
        _roots[j] = std::polar(1.0, std::numbers::pi * j / k);
    }
}

Complex SharpProblem::omega_pow(long e) const {
    const long period = 2L * _k;
    long idx = ((e % period) + period) % period;
    return _roots[idx];
}

double SharpProblem::taylor_switch() const { return 0.75 * _space.zero(1); }

double SharpProblem::taylor_radius() const {
    taylor_C();
    return _taylor->radius;
}

const std::vector<double>& SharpProblem::taylor_C() const {
    std::call_once(_taylor->once, [this] {
        // Trapezoid rule for the Cauchy integral on |z| = rho; the nearest poles of C
        // are +-xi_1, so the aliasing error decays like (rho/xi_1)^M.
        const int M = 1024;
        const int P = 200 + 2 * _k;
        const double rho = 0.9 * _space.zero(1);
        std::vector<Complex> values(M);
        for (int j = 0; j < M; ++j) {
            values[j] = _space.C(std::polar(rho, 2.0 * std::numbers::pi * j / M));
        }
        std::vector<double> gamma(P);
        for (int p = 0; p < P; ++p) {
            double acc = 0.0;
            for (int j = 0; j < M; ++j) {
                long e = (static_cast<long>(2 * p + 1) * j) % M;
                acc += (values[j] * std::polar(1.0, -2.0 * std::numbers::pi * e / M)).real();
            }
            gamma[p] = acc / M;
        }
        _taylor->radius = rho;
        _taylor->gamma = std::move(gamma);
    });
    return _taylor->gamma;
}

const SharpProblem::SecularBasis& SharpProblem::secular_basis() const {
    std::call_once(_secular->once, [this] {
        if (_ell == 0 || (!_space.zero_count() && !_space.has_zero_model())) {
            return;
        }
        const int explicit_count = _space.zero_count() ? *_space.zero_count() : 2000;
        std::vector<double> xi, base;
        for (int n = 1; n <= explicit_count; ++n) {
            xi.push_back(_space.zero(n));
            base.push_back(1.0 / _space.weight(n));
        }
        if (!_space.zero_count()) {
            // Same midpoint-rule tail as series_tail, folded into the measure as extra nodes.
            const Quadrature quad = gauss_legendre_unit(64);
            const double T = explicit_count + 0.5;
            for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
                double u = quad.nodes[i];
                xi.push_back(_space.zero_model()(T / u));
                base.push_back(quad.weights[i] * T / (u * u));
            }
        }
        const Eigen::Index N = static_cast<Eigen::Index>(xi.size());
        const double xi1 = xi[0];
        SecularBasis& out = _secular->basis;
        out.x.resize(N);
        out.s2.resize(N);
        for (Eigen::Index n = 0; n < N; ++n) {
            out.x(n) = (xi1 / xi[n]) * (xi1 / xi[n]);
            out.s2(n) = std::pow(xi[n] / xi1, 2 * (2 * _ell - 1 - _k)) * base[n];
        }
        out.xi = std::move(xi);
    });
    return _secular->basis;
}

MatrixR build_Q_taylor(const SharpProblem& prob, double lambda) {
    const int k = prob.k();
    const int ell = prob.ell();
    MatrixR Q = MatrixR::Zero(ell, ell);
    if (ell == 0) {
        return Q;
    }
    const std::vector<double>& gamma = prob.taylor_C();
    const double rho = prob.taylor_radius();
    if (!(lambda >= 0.0 && lambda < rho)) {
        throw Error(ErrorKind::DomainError, "Taylor form of Q needs 0 <= lambda < 0.9 xi_1");
    }
    // Only powers 2p+1 = e + 2kt survive the sum over the k rotations.
    const double x = std::pow(lambda / rho, 2 * k);
    const int P = static_cast<int>(gamma.size());
    for (int m = 1; m <= ell; ++m) {
        for (int j = 1; j <= ell; ++j) {
            const int e = 2 * k - 4 * ell + 2 * m + 2 * j - 3;
            double sum = 0.0, xt = 1.0;
            for (int p = (e - 1) / 2; p < P; p += k) {
                double t = gamma[p] * xt;
                sum += t;
                if (std::abs(t) <= 1e-18 * std::abs(sum)) {
                    break;
                }
                xt *= x;
            }
            Q(m - 1, j - 1) = 0.5 * sum / std::pow(rho, e);
        }
    }
    return Q;
}

MatrixC build_R(const SharpProblem& prob, double lambda) {
    const int k = prob.k();
    const int ell = prob.ell();
    MatrixC R = MatrixC::Zero(ell, ell);
    if (ell == 0) {
        return R;
    }
    for (int r = 1; r < k; ++r) {
        Complex c = prob.space().C(prob.omega_pow(r) * lambda);
        for (int m = 1; m <= ell; ++m) {
            for (int j = 1; j <= ell; ++j) {
                long s = 4L * ell - 2L * m - 2L * j + 3L;
                R(m - 1, j - 1) += prob.omega_pow(r * s) * c;
            }
        }
    }
    return R;
}

MatrixC build_V(const SharpProblem& prob, double lambda) {
    MatrixC V = build_R(prob, lambda);
    if (V.size() == 0) {
        return V;
    }
    V.array() += prob.space().C(lambda);
    return V;
}

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Adds terms dir_i * exp(log_i) with |dir_i| = 1 without leaving the log domain.
struct LogSum {
    Complex scaled;
    double shift;
};

LogSum log_sum(Complex d1, double l1, Complex d2, double l2) {
    double shift = std::max(l1, l2);
    if (shift == neg_inf) {
        return {0.0, 0.0};
    }
    Complex s = 0.0;
    if (l1 != neg_inf) {
        s += d1 * std::exp(l1 - shift);
    }
    if (l2 != neg_inf) {
        s += d2 * std::exp(l2 - shift);
    }
    return {s, shift};
}

double log_abs_or_neg_inf(double x) { return x == 0.0 ? neg_inf : std::log(std::abs(x)); }

}  // namespace

GValue eval_g(const SharpProblem& prob, double lambda) {
    const int ell = prob.ell();
    CompanionPair ab = prob.space().eval(lambda);
    const double a = ab.A.real();
    GValue out;
    if (ell == 0) {
        out.value = a;
        out.sign = (a > 0.0) - (a < 0.0);
        out.log_abs = log_abs_or_neg_inf(a);
        return out;
    }
    if (lambda <= prob.taylor_switch()) {
        // det V = (2k)^l lambda^{l(2k-2l-1)} det Q.
        MatrixR Q = build_Q_taylor(prob, lambda);
        LogDet dq = log_det_complex(Q.cast<Complex>());
        double log_scale = ell * std::log(2.0 * prob.k()) +
                           ell * (2.0 * prob.k() - 2.0 * ell - 1.0) * std::log(lambda);
        double s = a * dq.phase.real();
        out.sign = (s > 0.0) - (s < 0.0);
        out.log_abs = out.sign == 0 ? neg_inf : log_abs_or_neg_inf(a) + dq.log_abs + log_scale;
        out.value = out.sign == 0 ? 0.0 : out.sign * std::exp(out.log_abs);
        return out;
    }

    MatrixC R = build_R(prob, lambda);
    LogDet dr = log_det_complex(R);
    LogDet br = log_bordered_det(R);
    LogSum g = log_sum(std::polar(1.0, std::arg(ab.A)) * dr.phase,
                       dr.log_abs + log_abs_or_neg_inf(std::abs(ab.A)),
                       std::polar(1.0, std::arg(ab.B)) * br.phase,
                       br.log_abs + log_abs_or_neg_inf(std::abs(ab.B)));
    double re = g.scaled.real();
    out.sign = (re > 0.0) - (re < 0.0);
    out.log_abs = out.sign == 0 ? neg_inf : g.shift + std::log(std::abs(re));
    out.value = re * std::exp(g.shift);
    out.imag_residual = std::abs(g.scaled.imag()) * std::exp(g.shift);
    // |Im g| <= 1e-7 (1 + |Re g|), tested in the scaled domain.
    if (std::abs(g.scaled.imag()) > 1e-7 * (std::exp(-g.shift) + std::abs(re))) {
        std::ostringstream msg;
        msg << "imaginary part of g at lambda = " << lambda << " exceeds the realness tolerance";
        throw Error(ErrorKind::ImagResidualTooLarge, msg.str());
    }
    return out;
}

SecularSystem secular_system(const SharpProblem& prob, double lambda) {
    const int ell = prob.ell();
    const int k = prob.k();
    const auto& basis = prob.secular_basis();
    if (basis.xi.empty()) {
        throw Error(ErrorKind::DomainError,
                    "secular form needs a finite spectrum or zero asymptotics");
    }
    if (!(lambda >= 0.0 && lambda < prob.space().zero(ell + 1))) {
        throw Error(ErrorKind::DomainError, "secular form is valid on [0, xi_{l+1})");
    }
    SecularSystem sys;
    while (sys.p < ell && basis.xi[sys.p] <= lambda) {
        ++sys.p;
    }
    const int p = sys.p;

    // Orthonormal polynomials of the positive measure on the remaining nodes, by Lanczos
    // on diag(x) with two Gram-Schmidt passes.
    const Eigen::Index N = basis.x.size() - p;
    const VectorR x = basis.x.tail(N);
    VectorR w(N);
    for (Eigen::Index n = 0; n < N; ++n) {
        double lr = lambda == 0.0 ? neg_inf : 2.0 * k * std::log(lambda / basis.xi[n + p]);
        w(n) = std::sqrt(basis.s2(n + p) / -std::expm1(lr));
    }
    sys.mass = w.norm();
    sys.alpha.assign(ell, 0.0);
    sys.beta.assign(ell, 0.0);
    MatrixR q(N, ell);
    q.col(0) = w / sys.mass;
    for (int j = 0; j < ell; ++j) {
        VectorR v = x.cwiseProduct(q.col(j));
        sys.alpha[j] = q.col(j).dot(v);
        if (j + 1 == ell) {
            break;
        }
        for (int pass = 0; pass < 2; ++pass) {
            VectorR c = q.leftCols(j + 1).transpose() * v;
            v.noalias() -= q.leftCols(j + 1) * c;
        }
        sys.beta[j] = v.norm();
        if (!(sys.beta[j] > 0.0)) {
            throw Error(ErrorKind::ConstraintRankDeficient, "constraint directions lost rank");
        }
        q.col(j + 1) = v / sys.beta[j];
    }

    // Forward recurrence at the split-off nodes, which lie right of the support.
    sys.P.resize(p, ell);
    for (int i = 0; i < p; ++i) {
        sys.P.row(i) = secular_polynomials(sys, basis.x(i)).transpose() * std::sqrt(basis.s2(i));
    }
    sys.H = sys.P * sys.P.transpose();
    sys.scale.resize(p);
    for (int i = 0; i < p; ++i) {
        double r = -std::expm1(2.0 * k * std::log(lambda / basis.xi[i]));
        sys.scale(i) = 1.0 / std::sqrt(sys.H(i, i) - r);
        sys.H(i, i) += r;
    }
    sys.H = sys.scale.asDiagonal() * sys.H * sys.scale.asDiagonal();
    return sys;
}

VectorR secular_polynomials(const SecularSystem& sys, double x) {
    const int ell = static_cast<int>(sys.alpha.size());
    VectorR out(ell);
    if (ell == 0) {
        return out;
    }
    out(0) = 1.0 / sys.mass;
    for (int m = 1; m < ell; ++m) {
        double prev2 = m >= 2 ? sys.beta[m - 2] * out(m - 2) : 0.0;
        out(m) = ((x - sys.alpha[m - 1]) * out(m - 1) - prev2) / sys.beta[m - 1];
    }
    return out;
}

bool prefers_secular(const SharpProblem& prob) {
    return prob.ell() >= 4 && !prob.secular_basis().xi.empty();
}

GValue eval_secular(const SharpProblem& prob, double lambda) {
    if (prob.ell() == 0) {
        return eval_g(prob, lambda);
    }
    SecularSystem sys = secular_system(prob, lambda);
    GValue out;
    out.sign = prob.space().A(0.0).real() < 0.0 ? -1 : 1;
    out.log_abs = 0.0;
    out.value = out.sign;
    if (sys.p == 0) {
        return out;  // every weight is positive, so Q is a positive definite moment matrix
    }
    LogDet dh = log_det_complex(sys.H.cast<Complex>());
    double re = out.sign * dh.phase.real();
    out.sign = (re > 0.0) - (re < 0.0);
    out.log_abs = out.sign == 0 ? neg_inf : dh.log_abs;
    out.value = out.sign == 0 ? 0.0 : out.sign * std::exp(out.log_abs);
    return out;
}

SharpConstantResult solve_lambda0(const SharpProblem& prob, const SolveOptions& opts) {
    const int ell = prob.ell();
    const double top = prob.space().zero(ell + 1);
    const double step = opts.scan_step.value_or(std::min(0.01, top / 400.0));
    if (!(step > 0.0) || step > top / 50.0) {
        throw Error(ErrorKind::DomainError, "scan_step must lie in (0, xi_{l+1}/50]");
    }
    if (!(opts.tol >= 1e-13)) {
        throw Error(ErrorKind::DomainError, "tol must be >= 1e-13");
    }

    SharpConstantResult res;
    res.scan_step = step;
    res.min_rel_g = std::numeric_limits<double>::infinity();
    RootForm form = opts.form;
    if (form == RootForm::Auto) {
        form = prefers_secular(prob) ? RootForm::Secular : RootForm::Determinant;
    }
    res.form = form;
    auto g = [&](double x) {
        GValue v = form == RootForm::Secular ? eval_secular(prob, x) : eval_g(prob, x);
        ++res.evaluations;
        res.imag_residual = std::max(res.imag_residual, v.imag_residual);
        return v;
    };

    double lo = 0.0, hi = 0.0;
    int sign_lo = 0;
    bool found = false;
    if (ell == 0) {
        // g = A, whose first root is xi_1 itself.
        lo = top - step;
        hi = top + step;
        GValue g_lo = g(lo);
        GValue g_hi = g(hi);
        sign_lo = g_lo.sign;
        found = g_lo.sign * g_hi.sign < 0;
        res.min_rel_g = 1.0;
    } else {
        std::vector<GValue> grid;
        std::vector<double> xs;
        for (long i = 1;; ++i) {
            double x = step * static_cast<double>(i);
            if (x > top - 0.5 * step) {
                break;
            }
            xs.push_back(x);
            grid.push_back(g(x));
            std::size_t n = grid.size();
            if (!found && n >= 2 &&
                (grid[n - 1].sign == 0 || grid[n - 2].sign * grid[n - 1].sign < 0)) {
                lo = xs[n - 2];
                hi = xs[n - 1];
                sign_lo = grid[n - 2].sign;
                found = true;
            }
        }
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            double rel = std::exp(grid[i].log_abs -
                                  std::max(grid[i - 1].log_abs, grid[i + 1].log_abs));
            res.min_rel_g = std::min(res.min_rel_g, rel);
        }
        // A root of the A-factor sitting exactly on a zero of A, between grid points.
        for (int i = 1; form == RootForm::Determinant && i <= ell; ++i) {
            double xi = prob.space().zero(i);
            if (found && xi >= lo) {
                break;
            }
            GValue at = g(xi);
            double local = std::max(g(xi - step).log_abs, g(xi + step).log_abs);
            if (at.sign == 0 || at.log_abs <= std::log(opts.tol) + local) {
                lo = hi = xi;
                found = true;
                break;
            }
        }
    }
    if (!found) {
        std::ostringstream msg;
        msg << "no sign change of g on (0, xi_{l+1}) with scan_step " << step
            << "; smallest relative |g| on the grid = " << res.min_rel_g;
        throw Error(ErrorKind::NoRootFound, msg.str());
    }

    while (hi - lo > opts.tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        GValue gm = g(mid);
        if (gm.sign == 0) {
            lo = hi = mid;
            break;
        }
        if (gm.sign == sign_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    res.bracket = {lo, hi};
    res.lambda0 = 0.5 * (lo + hi);
    res.g_residual = std::abs(g(res.lambda0).value);
    res.constant = std::pow(res.lambda0, 2 * prob.k());
    return res;
}

SharpConstantResult solve_homogeneous(SpaceOrder beta, int k, const SolveOptions& opts) {
    return solve_lambda0(SharpProblem(homogeneous_space(beta), k), opts);
}

double ep1_constant(SpaceOrder beta, int k, double delta, const SolveOptions& opts) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorKind::DomainError, "delta must be positive");
    }
    SharpConstantResult res = solve_homogeneous(beta, k, opts);
    return std::pow(res.lambda0 / delta, 2 * k);
}

}  // namespace pwsharp
