#ifndef PWSHARP_ORACLES_HPP
#define PWSHARP_ORACLES_HPP

#include <vector>

#include "pwsharp/sharpsolve.hpp"

namespace pwsharp {

struct GalerkinConfig {
    int N = 400;
};

struct GalerkinResult {
    double value = 0.0;    // upper bound for lambda0^{2k}
    std::vector<double> a; // minimizing coefficients a_1..a_N, unit norm, first nonzero entry positive
};

/// Minimizes sum c_n a_n^2 xi_n^{2k} / sum c_n a_n^2 over n <= N subject to
/// sum a_n xi_n^{2l-2j+1} = 0, j = 1..l.
GalerkinResult galerkin_value(const SharpProblem& prob, const GalerkinConfig& cfg = {});

struct FDConfig {
    int grid_points = 200;
    int order_m = 1;
    int order_n = 0;
    double radius = 1.0;
};

struct FDResult {
    double value = 0.0;   // two-grid extrapolation
    double coarse = 0.0;  // grid_points interior nodes
    double fine = 0.0;    // halved spacing
};

/// Smallest eigenvalue of (D^m)^T D^m for W^{m,2}_0(-r, r), i.e. the minimum of
/// int |g^{(m)}|^2 / int |g|^2.
FDResult fd_poincare_value(const FDConfig& cfg = {});

}  // namespace pwsharp

#endif
