#include "pwsharp/applications.hpp"

#include <cmath>
#include <numbers>

#include "pwsharp/errors.hpp"

namespace pwsharp {

namespace {

double scaled_constant(double beta, int k, double r, const SolveOptions& opts) {
    if (k == 0) {
        return 1.0;
    }
    SharpConstantResult res = solve_homogeneous(SpaceOrder(beta), k, opts);
    return std::pow(r / res.lambda0, 2 * k);
}

}  // namespace

double poincare_constant(const PoincareQuery& q, const SolveOptions& opts) {
    if (q.laplacian) {
        return laplacian_poincare_constant(q, opts);
    }
    if (q.n < 0 || q.m < q.n) {
        throw Error(ErrorKind::DomainError, "Poincare query needs m >= n >= 0");
    }
    if (!(q.r > 0.0) || !std::isfinite(q.r)) {
        throw Error(ErrorKind::DomainError, "radius must be positive");
    }
    return scaled_constant(q.n - 0.5, q.m - q.n, q.r, opts);
}

double laplacian_poincare_constant(const PoincareQuery& q, const SolveOptions& opts) {
    if (!q.laplacian) {
        throw Error(ErrorKind::DomainError, "Laplacian form needs dimension flags");
    }
    const LaplacianFlags& f = *q.laplacian;
    if (f.d < 2 || f.m1 < 0 || f.m1 > 1 || f.n1 < 0 || f.n1 > 1 || q.m < 0 || q.n < 0) {
        throw Error(ErrorKind::DomainError, "Laplacian form needs d >= 2 and m1, n1 in {0, 1}");
    }
    if (!(q.r > 0.0) || !std::isfinite(q.r)) {
        throw Error(ErrorKind::DomainError, "radius must be positive");
    }
    const int gap = (2 * q.m + f.m1) - (2 * q.n + f.n1);
    if (gap < 0) {
        throw Error(ErrorKind::NonIntegerGap, "derivative gap must be a nonnegative integer");
    }
    const double beta = 2.0 * q.n + f.n1 - 1.0 + 0.5 * f.d;
    return scaled_constant(beta, gap, q.r, opts);
}

double ep2_constant(int d, double delta, const SolveOptions& opts) {
    if (d < 1) {
        throw Error(ErrorKind::DomainError, "dimension must be positive");
    }
    if (d % 2 != 0) {
        throw Error(ErrorKind::OddDimension, "EP2 is only computable in even dimension");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorKind::DomainError, "delta must be positive");
    }
    SharpConstantResult res = solve_homogeneous(SpaceOrder(0.0), d / 2, opts);
    const double log_sphere = std::log(2.0) + 0.5 * d * std::log(std::numbers::pi) -
                              log_gamma(0.5 * d) - std::log(static_cast<double>(d));
    return std::exp(log_sphere + d * (std::log(res.lambda0) - std::log(delta)));
}

}  // namespace pwsharp
