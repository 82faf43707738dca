#ifndef PWSHARP_SHARPSOLVE_HPP
#define PWSHARP_SHARPSOLVE_HPP

#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "pwsharp/linalg.hpp"
#include "pwsharp/spaces.hpp"

namespace pwsharp {

/// A space together with the power k of the multiplier z^k.
class SharpProblem {
public:
    SharpProblem(SpaceSpec space, int k);

    const SpaceSpec& space() const { return _space; }
    int k() const { return _k; }
    int ell() const { return _ell; }
    Complex omega() const { return _roots[1]; }
    /// omega^e for any integer e, read from the table of 2k-th roots of unity.
    Complex omega_pow(long e) const;

    /// Below this lambda, V is assembled from the Taylor coefficients of C.
    double taylor_switch() const;
    /// gamma_p = c_p rho^{2p+1} for C(z) = sum c_p z^{2p+1}, with rho = taylor_radius().
    const std::vector<double>& taylor_C() const;
    double taylor_radius() const;

    /// Discretized spectral measure: zeros of A followed by tail quadrature nodes. Constraint m
    /// at node n is s_n x_n^{m-1} with x_n = (xi_1/xi_n)^2 and s2_n = s_n^2. Empty when the
    /// space exposes neither a finite spectrum nor zero asymptotics.
    struct SecularBasis {
        std::vector<double> xi;
        VectorR x;
        VectorR s2;
    };
    const SecularBasis& secular_basis() const;

private:
    struct Taylor {
        std::once_flag once;
        double radius = 0.0;
        std::vector<double> gamma;
    };
    struct Secular {
        std::once_flag once;
        SecularBasis basis;
    };

    SpaceSpec _space;
    int _k;
    int _ell;
    std::vector<Complex> _roots;
    std::shared_ptr<Taylor> _taylor;
    std::shared_ptr<Secular> _secular;
};

enum class RootForm { Auto, Determinant, Secular };

struct SharpConstantResult {
    double lambda0 = 0.0;
    double constant = 0.0;  // lambda0^{2k}
    std::pair<double, double> bracket{0.0, 0.0};
    double g_residual = 0.0;  // |scanned function| at lambda0 (normalized h in secular form)
    double imag_residual = 0.0;  // max |Im g| over the scan
    // Smallest |g(x_i)| / max(|g(x_{i-1})|, |g(x_{i+1})|) on the scan grid; values far
    // below one flag a near-touch that sign scanning cannot see.
    double min_rel_g = 0.0;
    double scan_step = 0.0;
    int evaluations = 0;
    RootForm form = RootForm::Determinant;  // the function actually scanned
};

/// R(lambda)_{mj} = sum_{r=1}^{k-1} omega^{r(4l-2m-2j+3)} C(omega^r lambda).
MatrixC build_R(const SharpProblem& prob, double lambda);

/// V(lambda) = C(lambda) * ones + R(lambda); singular at the zeros of A.
MatrixC build_V(const SharpProblem& prob, double lambda);

/// Q(lambda) = V_{mj} / (2k lambda^{2k-4l+2m+2j-3}) from the Taylor coefficients of C;
/// valid for 0 <= lambda < xi_1 and free of the cancellation in the rotated sum.
MatrixR build_Q_taylor(const SharpProblem& prob, double lambda);

/// g carried as sign and log-magnitude; value may underflow where sign does not.
struct GValue {
    double value = 0.0;
    double imag_residual = 0.0;
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();
};

/// g(lambda) = A det R + B u^T adj(R) u, equal to A det V but finite at the zeros of A.
GValue eval_g(const SharpProblem& prob, double lambda);

/// Secular form of the root condition on [0, xi_{l+1}). With rho_n = (lambda/xi_n)^{2k} and
/// the p zeros xi_i <= lambda split off, h = det(B - diag(rho_i - 1)) where B is the
/// Christoffel-Darboux kernel of the positive measure s_n^2 / (1 - rho_n), n > p, at those
/// zeros; h is normalized by the diagonal and sign(h) = sign(A(0) g) away from the zeros.
GValue eval_secular(const SharpProblem& prob, double lambda);

/// The pieces behind eval_secular at one lambda.
struct SecularSystem {
    int p = 0;                  // zeros xi_i <= lambda split off the measure
    std::vector<double> alpha;  // Jacobi recurrence of the orthonormal polynomials in x = (xi_1/xi)^2
    std::vector<double> beta;
    double mass = 0.0;          // square root of the total mass of the positive measure
    MatrixR P;                  // P(i, m) = s_i p_m(x_i) at the split-off zeros
    VectorR scale;              // diagonal normalization applied to H
    MatrixR H;                  // scale (P P^T - diag(rho_i - 1)) scale
};
SecularSystem secular_system(const SharpProblem& prob, double lambda);

/// p_0(x), ..., p_{l-1}(x) by the three-term recurrence.
VectorR secular_polynomials(const SecularSystem& sys, double x);

/// True when l >= 4 and the spectrum is available, where det V no longer resolves its sign.
bool prefers_secular(const SharpProblem& prob);

struct SolveOptions {
    std::optional<double> scan_step;  // defaults to min(0.01, xi_{l+1}/400)
    double tol = 1e-11;
    // Auto scans g for l <= 3 and the secular form beyond, where det V loses its sign.
    RootForm form = RootForm::Auto;
};

SharpConstantResult solve_lambda0(const SharpProblem& prob, const SolveOptions& opts = {});

/// (lambda0(beta, k) / delta)^{2k}.
double ep1_constant(SpaceOrder beta, int k, double delta, const SolveOptions& opts = {});

/// lambda0 of the homogeneous space of order beta.
SharpConstantResult solve_homogeneous(SpaceOrder beta, int k, const SolveOptions& opts = {});

}  // namespace pwsharp

#endif
