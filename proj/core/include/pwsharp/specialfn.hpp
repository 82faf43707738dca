#ifndef PWSHARP_SPECIALFN_HPP
#define PWSHARP_SPECIALFN_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

namespace pwsharp {

using Complex = std::complex<double>;

/// Order nu > -1 of a homogeneous space.
class SpaceOrder {
public:
    explicit SpaceOrder(double nu);
    double value() const { return _nu; }

private:
    double _nu;
};

struct EvalConfig {
    // Power series below this modulus, Hankel asymptotics above.
    double series_cutoff_radius = 24.0;
    int series_max_terms = 400;
    double target_rel_error = 1e-13;

    void validate() const;
};

/// A_nu(z) and B_nu(z) evaluated together.
struct CompanionPair {
    Complex A;
    Complex B;
};

inline constexpr double pole_guard = 1e-12;

CompanionPair eval_AB(SpaceOrder nu, Complex z, const EvalConfig& cfg = {});
Complex eval_A(SpaceOrder nu, Complex z, const EvalConfig& cfg = {});
Complex eval_B(SpaceOrder nu, Complex z, const EvalConfig& cfg = {});
Complex eval_C(SpaceOrder nu, Complex z, const EvalConfig& cfg = {});

// Path-specific evaluators, exposed for the switch-point consistency check.
CompanionPair eval_AB_series(SpaceOrder nu, Complex z, const EvalConfig& cfg = {});
CompanionPair eval_AB_asymptotic(SpaceOrder nu, Complex z, const EvalConfig& cfg = {});

/// McMahon expansion of the t-th zero, continuous in t.
double mcmahon_zero(double nu, double t);

/// n-th positive zero j_{nu,n} of A_nu (memoized per nu).
double bessel_zero(SpaceOrder nu, int n);

/// K_nu(x,x) with derivatives eliminated through A' = -B, B' = A - (2nu+1)B/x.
double kernel_diag(SpaceOrder nu, double x);

double log_gamma(double x);

/// Lock-protected, sequentially filled table of the zeros of A_nu.
class ZeroTable {
public:
    explicit ZeroTable(double nu) : _nu(nu) {}

    double nu() const { return _nu; }
    double zero(int n);
    std::vector<double> snapshot() const;
    // Installs a previously computed prefix; ignored if shorter than what is held.
    void seed(const std::vector<double>& zeros);

private:
    double _nu;
    mutable std::mutex _mutex;
    std::vector<double> _zeros;
};

/// Process-wide registry of zero tables, keyed by the exact bit pattern of nu.
class ZeroRegistry {
public:
    static ZeroRegistry& instance();

    std::shared_ptr<ZeroTable> table(double nu);
    std::vector<std::shared_ptr<ZeroTable>> tables() const;
    void clear();

private:
    mutable std::mutex _mutex;
    std::vector<std::shared_ptr<ZeroTable>> _tables;
};

}  // namespace pwsharp

#endif
