#ifndef PWSHARP_BOUNDS_HPP
#define PWSHARP_BOUNDS_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "pwsharp/sharpsolve.hpp"

namespace pwsharp {

/// Log of the closed-form test-function bound for the sharp constant with gap alpha - beta.
double upper_bound_log_ep1(double alpha, double beta);

/// 2(alpha-beta) log(alpha+2) + log((beta+1)/(alpha+1)).
double asymptotic_main_term(double alpha, double beta);

/// ((alpha-beta)(alpha+2)/(alpha+1)) log(2(alpha+1)(alpha-beta+1)/((alpha-beta)(alpha+2))).
double asymptotic_envelope(double alpha, double beta);

/// Thread-safe memo of homogeneous solves keyed by (beta, k).
class Lambda0Memo {
public:
    explicit Lambda0Memo(SolveOptions opts = {}) : _opts(opts) {}

    SharpConstantResult get(double beta, int k);

private:
    SolveOptions _opts;
    std::mutex _mutex;
    std::map<std::pair<std::uint64_t, int>, SharpConstantResult> _cache;
};

struct AsymptoticsReport {
    double alpha = 0.0;
    double beta = 0.0;
    double log_ep1 = 0.0;
    double main_term = 0.0;
    double envelope = 0.0;
    double upper_bound_log = 0.0;
    double ratio = 0.0;  // |log_ep1 - main_term| / envelope
};

AsymptoticsReport asymptotics_row(double beta, int k, Lambda0Memo& memo);

std::vector<AsymptoticsReport> asymptotics_report(const std::vector<double>& beta_grid, int k_max,
                                                  Lambda0Memo& memo);

struct MonotonicityCheck {
    std::string relation;  // "k-monotone" or "shift"
    double beta = 0.0;
    int k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs, nonnegative (positive for strict relations) when satisfied
    bool ok = true;
};

struct MonotonicityReport {
    std::vector<MonotonicityCheck> checks;
};

/// lambda0(beta, k) <= lambda0(beta, k+1) and 2k log lambda0(beta, k) < 2k log lambda0(beta+1, k)
/// over the lattice; throws PropertyViolation naming every offending cell.
MonotonicityReport monotonicity_suite(const std::vector<double>& beta_grid, int k_max,
                                      Lambda0Memo& memo);

}  // namespace pwsharp

#endif
