#ifndef PWSHARP_APPLICATIONS_HPP
#define PWSHARP_APPLICATIONS_HPP

#include <optional>

#include "pwsharp/sharpsolve.hpp"

namespace pwsharp {

/// Dimension data for the Laplacian form: d >= 2, m1, n1 in {0, 1}.
struct LaplacianFlags {
    int d = 2;
    int m1 = 0;
    int n1 = 0;
};

struct PoincareQuery {
    int m = 1;
    int n = 0;
    double r = 1.0;
    std::optional<LaplacianFlags> laplacian;
};

/// Sharp factor in int |g^{(n)}|^2 <= C int |g^{(m)}|^2 on W^{m,2}_0(-r, r):
/// r^{2(m-n)} / lambda0(n - 1/2, m - n)^{2(m-n)}.
double poincare_constant(const PoincareQuery& q, const SolveOptions& opts = {});

/// Same for grad^{n1} Laplace^n against grad^{m1} Laplace^m on a ball in R^d:
/// beta = 2n + n1 - 1 + d/2 and k = (2m + m1) - (2n + n1).
double laplacian_poincare_constant(const PoincareQuery& q, const SolveOptions& opts = {});

/// Minimal integral of a radial non-increasing majorant of the delta in even dimension d:
/// (2 pi^{d/2} / Gamma(d/2)) / d * (lambda0(0, d/2) / delta)^d.
double ep2_constant(int d, double delta, const SolveOptions& opts = {});

}  // namespace pwsharp

#endif
