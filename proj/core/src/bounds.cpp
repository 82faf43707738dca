#include "pwsharp/bounds.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pwsharp/errors.hpp"

namespace pwsharp {

namespace {

void require_order(double alpha, double beta, bool strict) {
    bool ok = std::isfinite(alpha) && std::isfinite(beta) && beta > -1.0 &&
              (strict ? alpha > beta : alpha >= beta);
    if (!ok) {
        throw Error(ErrorKind::DomainError,
                    strict ? "requires alpha > beta > -1" : "requires alpha >= beta > -1");
    }
}

}  // namespace

double upper_bound_log_ep1(double alpha, double beta) {
    require_order(alpha, beta, false);
    const double gap = alpha - beta;
    return 2.0 * gap * std::numbers::ln2 + std::log((beta + 1.0) / (alpha + 1.0)) +
           2.0 * log_gamma(gap + 1.0) + log_gamma(2.0 * alpha - beta + 2.0) -
           log_gamma(2.0 * gap + 1.0) - log_gamma(beta + 2.0);
}

double asymptotic_main_term(double alpha, double beta) {
    require_order(alpha, beta, false);
    return 2.0 * (alpha - beta) * std::log(alpha + 2.0) + std::log((beta + 1.0) / (alpha + 1.0));
}

double asymptotic_envelope(double alpha, double beta) {
    require_order(alpha, beta, true);
    const double gap = alpha - beta;
    return gap * (alpha + 2.0) / (alpha + 1.0) *
           std::log(2.0 * (alpha + 1.0) * (gap + 1.0) / (gap * (alpha + 2.0)));
}

SharpConstantResult Lambda0Memo::get(double beta, int k) {
    const auto key = std::make_pair(std::bit_cast<std::uint64_t>(beta), k);
    {
        std::lock_guard<std::mutex> lock(_mutex);
        auto it = _cache.find(key);
        if (it != _cache.end()) {
            return it->second;
        }
    }
    SharpConstantResult res = solve_homogeneous(SpaceOrder(beta), k, _opts);
    std::lock_guard<std::mutex> lock(_mutex);
    _cache.emplace(key, res);
    return res;
}

AsymptoticsReport asymptotics_row(double beta, int k, Lambda0Memo& memo) {
    if (k < 1) {
        throw Error(ErrorKind::DomainError, "asymptotics rows need k >= 1");
    }
    AsymptoticsReport row;
    row.beta = beta;
    row.alpha = beta + k;
    row.log_ep1 = 2.0 * k * std::log(memo.get(beta, k).lambda0);
    row.main_term = asymptotic_main_term(row.alpha, beta);
    row.envelope = asymptotic_envelope(row.alpha, beta);
    row.upper_bound_log = upper_bound_log_ep1(row.alpha, beta);
    row.ratio = std::abs(row.log_ep1 - row.main_term) / row.envelope;
    return row;
}

std::vector<AsymptoticsReport> asymptotics_report(const std::vector<double>& beta_grid, int k_max,
                                                  Lambda0Memo& memo) {
    std::vector<AsymptoticsReport> rows;
    for (double beta : beta_grid) {
        for (int k = 1; k <= k_max; ++k) {
            rows.push_back(asymptotics_row(beta, k, memo));
        }
    }
    return rows;
}

MonotonicityReport monotonicity_suite(const std::vector<double>& beta_grid, int k_max,
                                      Lambda0Memo& memo) {
    MonotonicityReport report;
    for (double beta : beta_grid) {
        for (int k = 1; k <= k_max; ++k) {
            double lam = memo.get(beta, k).lambda0;
            if (k < k_max) {
                MonotonicityCheck c;
                c.relation = "k-monotone";
                c.beta = beta;
                c.k = k;
                c.lhs = lam;
                c.rhs = memo.get(beta, k + 1).lambda0;
                c.margin = c.rhs - c.lhs;
                c.ok = c.margin >= 0.0;
                report.checks.push_back(c);
            }
            MonotonicityCheck s;
            s.relation = "shift";
            s.beta = beta;
            s.k = k;
            s.lhs = 2.0 * k * std::log(lam);
            s.rhs = 2.0 * k * std::log(memo.get(beta + 1.0, k).lambda0);
            s.margin = s.rhs - s.lhs;
            s.ok = s.margin > 0.0;
            report.checks.push_back(s);
        }
    }
    std::ostringstream msg;
    bool violated = false;
    for (const auto& c : report.checks) {
        if (!c.ok) {
            violated = true;
            msg << " [" << c.relation << " beta=" << c.beta << " k=" << c.k << " margin=" << c.margin
                << "]";
        }
    }
    if (violated) {
        throw Error(ErrorKind::PropertyViolation, "monotonicity violated at" + msg.str());
    }
    return report;
}

}  // namespace pwsharp
