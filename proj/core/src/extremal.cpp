#include "pwsharp/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "pwsharp/errors.hpp"

namespace pwsharp {

namespace {

struct QParts {
    MatrixR Q;
    MatrixR magnitude;  // entrywise sum of |terms| entering Q
};

QParts build_Q_parts(const SharpProblem& prob, double lambda) {
    const int k = prob.k();
    const int ell = prob.ell();
    QParts out{MatrixR::Zero(ell, ell), MatrixR::Zero(ell, ell)};
    if (ell == 0) {
        return out;
    }
    if (!(lambda > 0.0)) {
        throw Error(ErrorKind::DomainError, "Q needs lambda > 0");
    }
    std::vector<Complex> c(k);
    for (int r = 0; r < k; ++r) {
        c[r] = prob.space().C(prob.omega_pow(r) * lambda);
    }
    double max_re = 0.0, max_im = 0.0;
    for (int m = 1; m <= ell; ++m) {
        for (int j = 1; j <= ell; ++j) {
            long s = 4L * ell - 2L * m - 2L * j + 3L;
            Complex v = 0.0;
            double mag = 0.0;
            for (int r = 0; r < k; ++r) {
                Complex t = prob.omega_pow(r * s) * c[r];
                v += t;
                mag += std::abs(t);
            }
            double denom = 2.0 * k * std::pow(lambda, 2 * k - 4 * ell + 2 * m + 2 * j - 3);
            out.Q(m - 1, j - 1) = v.real() / denom;
            out.magnitude(m - 1, j - 1) = mag / denom;
            max_re = std::max(max_re, mag / denom);
            max_im = std::max(max_im, std::abs(v.imag()) / denom);
        }
    }
    if (max_im > 1e-8 * max_re) {
        std::ostringstream msg;
        msg << "Q has relative imaginary residual " << max_im / max_re;
        throw Error(ErrorKind::ImagResidualTooLarge, msg.str());
    }
    return out;
}

struct WParts {
    MatrixR W;
    double scale;
};

WParts build_W_parts(const SharpProblem& prob, double lambda) {
    const int k = prob.k();
    const int ell = prob.ell();
    VandermondeSystem vs = build_T(prob);
    QParts q = build_Q_parts(prob, lambda);
    MatrixR W = vs.T_inv.transpose() * q.Q;
    MatrixR Wabs = vs.T_inv.cwiseAbs().transpose() * q.magnitude;
    const double lam2k = std::pow(lambda, 2 * k);
    for (int i = 1; i <= ell; ++i) {
        double xi = prob.space().zero(i);
        double f = prob.space().weight(i) * (std::pow(xi, 2 * k) - lam2k);
        W.row(i - 1) *= f;
        Wabs.row(i - 1) *= std::abs(f);
    }
    return {W, Wabs.norm()};
}

// +1 or -1 so that the first entry above roundoff comes out positive.
double head_sign(const VectorR& head) {
    const double lead_tol = 1e-12 * head.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < head.size(); ++i) {
        if (std::abs(head(i)) > lead_tol) {
            return head(i) < 0.0 ? -1.0 : 1.0;
        }
    }
    return 1.0;
}

// Null vector w of B - diag(rho_i - 1) at the split-off zeros gives the multiplier
// functional v = P^T w. Passed zeros take a_i = -w_i / (sqrt(c_i) (xi_i/xi_1)^k); the rest
// follow the Lagrange function through tail_scaled.
ExtremizerCoefficients secular_coeffs(ExtremizerCoefficients out) {
    const SharpProblem& prob = out.problem;
    const SpaceSpec& sp = prob.space();
    const int k = prob.k();
    const int ell = prob.ell();
    const double xi1 = sp.zero(1);
    SecularSystem sys = secular_system(prob, out.lambda0);
    const int p = sys.p;
    if (p == 0) {
        throw Error(ErrorKind::KernelNotFound, "lambda0 lies below xi_1; no secular kernel");
    }
    SymEig eig = sym_eig(sys.H);
    std::vector<Eigen::Index> order(p);
    for (int i = 0; i < p; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(eig.values(a)) < std::abs(eig.values(b));
    });
    out.kernel_residual = std::abs(eig.values(order[0]));
    if (out.kernel_residual > 1e-5) {
        std::ostringstream msg;
        msg << "secular matrix at lambda0 is not numerically singular: min |eigenvalue| = "
            << out.kernel_residual;
        throw Error(ErrorKind::KernelNotFound, msg.str());
    }
    out.secular = std::move(sys);
    out.secular_scale = 1.0;

    auto head_of = [&](const VectorR& null) {
        const SecularSystem& s = *out.secular;
        VectorR w = s.scale.cwiseProduct(null);
        out.secular_v = s.P.transpose() * w;
        VectorR head(ell);
        for (int n = 1; n <= ell; ++n) {
            double xi = sp.zero(n);
            double c = sp.weight(n);
            head(n - 1) = n <= p ? -w(n - 1) / (std::sqrt(c) * std::pow(xi / xi1, k))
                                 : out.tail_scaled(xi, c, 0);
        }
        return head;
    };
    // The kernel rows decay geometrically, so a small second eigenvalue alone is not a second
    // kernel direction; it must also be below the drift of the first one under a 0.1% shift.
    double drift = 0.0;
    for (double f : {1.0 - 1e-3, 1.0 + 1e-3}) {
        double lam = out.lambda0 * f;
        if (lam >= sp.zero(ell + 1)) {
            continue;
        }
        SecularSystem shifted = secular_system(prob, lam);
        if (shifted.p > 0) {
            drift = std::max(drift, sym_eig(shifted.H).values.cwiseAbs().minCoeff());
        }
    }
    for (int i = 1; i < p; ++i) {
        double mu = std::abs(eig.values(order[i]));
        if (mu <= 1e-5 && mu <= 10.0 * drift) {
            VectorR extra = head_of(eig.vectors.col(order[i]));
            out.extra_null_vectors.push_back(extra / extra.norm());
        }
    }
    if (!out.extra_null_vectors.empty()) {
        out.multiplicity_warning = "secular kernel at lambda0 is numerically " +
                                   std::to_string(out.extra_null_vectors.size() + 1) +
                                   "-dimensional; head uses the smallest eigen-direction";
    }

    VectorR head = head_of(eig.vectors.col(order[0]));
    out.secular_scale = head_sign(head) / head.norm();
    out.head = head * out.secular_scale;
    for (int n = 1; n <= out.N; ++n) {
        out.a[n - 1] = n <= ell ? out.head(n - 1) : out.tail_scaled(sp.zero(n), sp.weight(n), 0);
    }
    return out;
}

}  // namespace

VandermondeSystem build_T(const SharpProblem& prob) {
    const int ell = prob.ell();
    if (ell < 1) {
        throw Error(ErrorKind::DomainError, "T needs ell >= 1");
    }
    VandermondeSystem out;
    out.T.resize(ell, ell);
    for (int m = 1; m <= ell; ++m) {
        double xi = prob.space().zero(m);
        for (int j = 1; j <= ell; ++j) {
            out.T(m - 1, j - 1) = std::pow(xi, 2 * ell - 2 * j + 1);
        }
    }
    // Equilibrate columns, invert the scaled matrix, then undo the scaling.
    VectorR scale = out.T.colwise().norm().transpose();
    MatrixR S = out.T * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<MatrixR> svd(S);
    const VectorR& sv = svd.singularValues();
    out.condition = sv(0) / sv(sv.size() - 1);
    if (!(out.condition <= 1e12)) {
        std::ostringstream msg;
        msg << "Vandermonde matrix condition estimate " << out.condition << " exceeds 1e12";
        throw Error(ErrorKind::IllConditioned, msg.str());
    }
    Eigen::FullPivLU<MatrixR> lu(S);
    out.T_inv = scale.cwiseInverse().asDiagonal() * lu.inverse();
    return out;
}

MatrixR build_Q(const SharpProblem& prob, double lambda) { return build_Q_parts(prob, lambda).Q; }

MatrixR build_W(const SharpProblem& prob, double lambda) { return build_W_parts(prob, lambda).W; }

double ExtremizerCoefficients::coefficient(int n) const {
    if (n < 1) {
        throw Error(ErrorKind::DomainError, "coefficient index must be >= 1");
    }
    if (n <= N) {
        return a[n - 1];
    }
    if (problem.ell() == 0) {
        return 0.0;
    }
    const SpaceSpec& sp = problem.space();
    return tail_scaled(sp.zero(n), sp.weight(n), 0);
}

double ExtremizerCoefficients::tail_scaled(double xi, double c, int power) const {
    const int k = problem.k();
    const int ell = problem.ell();
    if (ell == 0) {
        return 0.0;
    }
    if (secular) {
        const double xi1 = problem.space().zero(1);
        const double x = (xi1 / xi) * (xi1 / xi);
        const double L = secular_v.dot(secular_polynomials(*secular, x));
        const double mag = std::exp((2.0 * ell - 1.0 - 2.0 * k) * std::log(xi / xi1) +
                                    power * std::log(xi));
        return secular_scale * L * mag / (c * -std::expm1(2.0 * k * std::log(lambda0 / xi)));
    }
    double p = 0.0;
    for (int r = 1; r <= ell; ++r) {
        p += inner[r - 1] * std::pow(xi, 2 * ell - 2 * r + 1 - 2 * k + power);
    }
    return p / (c * (1.0 - std::pow(lambda0 / xi, 2 * k)));
}

ExtremizerCoefficients extremizer_coeffs(const SharpProblem& prob, const SharpConstantResult& res,
                                         int N) {
    const int k = prob.k();
    const int ell = prob.ell();
    if (N < ell + 10) {
        throw Error(ErrorKind::DomainError, "truncation N must be >= ell + 10");
    }
    const SpaceSpec& sp = prob.space();
    if (sp.zero_count()) {
        N = std::min(N, *sp.zero_count());
    }
    ExtremizerCoefficients out{prob, res.lambda0, VectorR(), {}, {}, N, 0.0, std::nullopt, {},
                               std::nullopt, VectorR(), 0.0};
    out.a.assign(N, 0.0);
    if (ell == 0) {
        out.a[0] = 1.0;
        return out;
    }

    if (prefers_secular(prob)) {
        return secular_coeffs(std::move(out));
    }

    WParts w = build_W_parts(prob, res.lambda0);
    MatrixR gram = w.W * w.W.transpose();
    SymEig eig = sym_eig(gram);
    VectorR head = eig.vectors.col(0);
    double sigma_min = (head.transpose() * w.W).norm();
    out.kernel_residual = sigma_min / w.scale;
    if (out.kernel_residual > 1e-5) {
        std::ostringstream msg;
        msg << "W(lambda0) is not numerically singular: sigma_min/scale = " << out.kernel_residual;
        throw Error(ErrorKind::KernelNotFound, msg.str());
    }
    for (int i = 1; i < ell; ++i) {
        double sigma = std::sqrt(std::max(0.0, eig.values(i)));
        if (sigma / w.scale <= 1e-5) {
            out.extra_null_vectors.push_back(eig.vectors.col(i));
        }
    }
    if (!out.extra_null_vectors.empty()) {
        out.multiplicity_warning = "ker W(lambda0) is numerically " +
                                   std::to_string(out.extra_null_vectors.size() + 1) +
                                   "-dimensional; head uses the smallest singular direction";
    }

    head *= head_sign(head) / head.norm();
    out.head = head;

    VandermondeSystem vs = build_T(prob);
    const double lam2k = std::pow(res.lambda0, 2 * k);
    VectorR scaled(ell);
    for (int i = 1; i <= ell; ++i) {
        double xi = sp.zero(i);
        scaled(i - 1) = sp.weight(i) * head(i - 1) * (std::pow(xi, 2 * k) - lam2k);
    }
    VectorR inner = vs.T_inv * scaled;
    out.inner.assign(inner.data(), inner.data() + ell);

    for (int n = 1; n <= N; ++n) {
        out.a[n - 1] = n <= ell ? head(n - 1) : out.tail_scaled(sp.zero(n), sp.weight(n), 0);
    }
    return out;
}

double rayleigh_quotient(const ExtremizerCoefficients& coeffs, TailMode mode) {
    const SharpProblem& prob = coeffs.problem;
    const SpaceSpec& sp = prob.space();
    const int k = prob.k();
    const double xi1 = sp.zero(1);
    // Numerator carried as c a^2 (xi/xi_1)^{2k} to keep magnitudes near one.
    double num = 0.0, den = 0.0;
    for (int n = 1; n <= coeffs.N; ++n) {
        double c = sp.weight(n);
        double an = coeffs.a[n - 1];
        num += c * an * an * std::pow(sp.zero(n) / xi1, 2 * k);
        den += c * an * an;
    }
    if (mode == TailMode::Analytic && prob.ell() > 0) {
        num += sp.series_tail(coeffs.N, [&](double xi, double c) {
            double s = coeffs.tail_scaled(xi, c, k);
            return c * s * s / std::pow(xi1, 2 * k);
        });
        den += sp.series_tail(coeffs.N, [&](double xi, double c) {
            double s = coeffs.tail_scaled(xi, c, 0);
            return c * s * s;
        });
    }
    return num / den * std::pow(xi1, 2 * k);
}

std::vector<double> constraint_residuals(const ExtremizerCoefficients& coeffs, TailMode mode) {
    const SharpProblem& prob = coeffs.problem;
    const SpaceSpec& sp = prob.space();
    const int ell = prob.ell();
    std::vector<double> out;
    for (int j = 1; j <= ell; ++j) {
        const int p = 2 * ell - 2 * j + 1;
        double sum = 0.0, mag = 0.0;
        for (int n = 1; n <= coeffs.N; ++n) {
            double t = coeffs.a[n - 1] * std::pow(sp.zero(n), p);
            sum += t;
            mag += std::abs(t);
        }
        if (mode == TailMode::Analytic) {
            sum += sp.series_tail(coeffs.N, [&](double xi, double c) {
                return coeffs.tail_scaled(xi, c, p);
            });
            mag += sp.series_tail(coeffs.N, [&](double xi, double c) {
                return std::abs(coeffs.tail_scaled(xi, c, p));
            });
        }
        out.push_back(std::abs(sum) / mag);
    }
    return out;
}

ExtremizerValue eval_extremizer(const ExtremizerCoefficients& coeffs, Complex z) {
    const SpaceSpec& sp = coeffs.problem.space();
    const Complex Az = sp.A(z);
    Complex sum = 0.0;
    for (int n = 1; n <= coeffs.N; ++n) {
        double an = coeffs.a[n - 1];
        if (an == 0.0) {
            continue;
        }
        double xi = sp.zero(n);
        if (std::abs(z - xi) <= 1e-9 * xi || std::abs(z + xi) <= 1e-9 * xi) {
            // Removable singularity: A(z)/(z^2 - xi^2) -> A'(xi)/(2 xi), A'(xi_n) = -c_n B(xi_n).
            double dA = -sp.weight(n) * sp.B(xi).real();
            sum += an * dA / 2.0;
            continue;
        }
        sum += an * xi * Az / (z * z - xi * xi);
    }

    ExtremizerValue out{sum, 0.0};
    if (coeffs.problem.ell() == 0) {
        return out;
    }
    const double zr = std::abs(z);
    const auto count = sp.zero_count();
    if (count && coeffs.N >= *count) {
        return out;
    }
    if (!count && !sp.has_zero_model()) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    if (sp.zero(coeffs.N + 1) <= 2.0 * zr) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    out.tail_bound = std::abs(Az) * sp.series_tail(coeffs.N, [&](double xi, double c) {
        return std::abs(coeffs.tail_scaled(xi, c, 1)) / (xi * xi - zr * zr);
    });
    return out;
}

}  // namespace pwsharp
