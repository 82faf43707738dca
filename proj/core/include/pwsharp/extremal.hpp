#ifndef PWSHARP_EXTREMAL_HPP
#define PWSHARP_EXTREMAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "pwsharp/linalg.hpp"
#include "pwsharp/sharpsolve.hpp"

namespace pwsharp {

/// T_{mj} = xi_m^{2l-2j+1} with its inverse.
struct VandermondeSystem {
    MatrixR T;
    MatrixR T_inv;
    double condition = 0.0;  // 2-norm condition number after column equilibration
};

VandermondeSystem build_T(const SharpProblem& prob);

/// Q_{mj} = V_{mj} / (2k lambda^{2k-4l+2m+2j-3}); a real Hankel matrix.
MatrixR build_Q(const SharpProblem& prob, double lambda);

/// W_{ij} = c_i (xi_i^{2k} - lambda^{2k}) ((T^{-1})^t Q)_{ij}; singular at lambda0.
MatrixR build_W(const SharpProblem& prob, double lambda);

struct ExtremizerCoefficients {
    SharpProblem problem;
    double lambda0 = 0.0;
    VectorR head;                  // a_1..a_l, unit norm, first nonzero entry positive
    std::vector<double> inner;     // w_r = sum_i (T^{-1})_{ri} c_i a_i (xi_i^{2k} - lambda0^{2k})
    std::vector<double> a;         // a_1..a_N
    int N = 0;
    double kernel_residual = 0.0;  // smallest singular value of W(lambda0) over its entry scale,
                                   // or the smallest |eigenvalue| of the normalized secular H
    std::optional<std::string> multiplicity_warning;
    std::vector<VectorR> extra_null_vectors;
    // For l >= 4 the coefficients come from the secular system at lambda0 instead of inner:
    // a(xi) = secular_scale (xi/xi_1)^{2l-1-2k} L((xi_1/xi)^2) / (c (1 - (lambda0/xi)^{2k}))
    // with L(x) = sum_m secular_v_m p_m(x).
    std::optional<SecularSystem> secular;
    VectorR secular_v;
    double secular_scale = 0.0;

    /// a_n for any n >= 1, past N through the closed tail formula.
    double coefficient(int n) const;
    /// a(xi) * xi^power for a zero xi beyond the head, free of overflow.
    double tail_scaled(double xi, double c, int power) const;
};

ExtremizerCoefficients extremizer_coeffs(const SharpProblem& prob, const SharpConstantResult& res,
                                         int N = 400);

/// Truncated sums stop at N; Analytic adds the remainder sum over n > N.
enum class TailMode { Truncated, Analytic };

/// sum c_n a_n^2 xi_n^{2k} / sum c_n a_n^2.
double rayleigh_quotient(const ExtremizerCoefficients& coeffs, TailMode mode);

/// |sum a_n xi_n^{2l-2j+1}| / sum |a_n xi_n^{2l-2j+1}| for j = 1..l.
std::vector<double> constraint_residuals(const ExtremizerCoefficients& coeffs, TailMode mode);

struct ExtremizerValue {
    Complex value;
    double tail_bound = 0.0;  // bound on the omitted terms n > N; infinite when not available
};

/// f(z) = sum_{n<=N} a_n xi_n A(z) / (z^2 - xi_n^2).
ExtremizerValue eval_extremizer(const ExtremizerCoefficients& coeffs, Complex z);

}  // namespace pwsharp

#endif
