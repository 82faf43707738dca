#include "pwsharp/specialfn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "double_double.hpp"
#include "pwsharp/errors.hpp"

namespace pwsharp {

namespace {

using detail::CDD;
using detail::DD;

void require_finite(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::DomainError, "evaluation point must be finite");
    }
}

// Hankel expansion of J_mu(z) for Re z >= 0, truncated at the smallest term.
Complex hankel_bessel_j(double mu, Complex z, Complex prefactor) {
    const double four_mu2 = 4.0 * mu * mu;
    Complex p = 1.0;
    Complex q = 0.0;
    Complex term = 1.0;
    double last = 1.0;
    for (int k = 1; k <= 80; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= (four_mu2 - odd * odd) / (8.0 * k * z);
        double mag = std::abs(term);
        if (mag > last && odd * odd > four_mu2) {
            break;
        }
        switch (k % 4) {
        case 0: p += term; break;
        case 1: q += term; break;
        case 2: p -= term; break;
        default: q -= term; break;
        }
        if (mag <= 1e-17 * std::abs(p)) {
            break;
        }
        last = mag;
    }
    Complex chi = z - (0.5 * mu + 0.25) * std::numbers::pi;
    return prefactor * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

SpaceOrder::SpaceOrder(double nu) : _nu(nu) {
    if (!std::isfinite(nu) || !(nu > -1.0)) {
        std::ostringstream msg;
        msg << "space order must satisfy nu > -1, got " << nu;
        throw Error(ErrorKind::DomainError, msg.str());
    }
}

void EvalConfig::validate() const {
    if (!(series_cutoff_radius > 0.0) || series_max_terms < 20 ||
        !(target_rel_error > 0.0 && target_rel_error < 1e-6)) {
        throw Error(ErrorKind::DomainError, "invalid EvalConfig");
    }
}

CompanionPair eval_AB_series(SpaceOrder order, Complex z, const EvalConfig& cfg) {
    require_finite(z);
    const double nu = order.value();
    // z/2 is exact; its square is formed exactly in double-double.
    const double hx = 0.5 * z.real();
    const double hy = 0.5 * z.imag();
    const CDD w{-(detail::two_prod(hx, hx) - detail::two_prod(hy, hy)),
                -(detail::two_prod(hx, hy) * 2.0)};
    const double wabs = std::abs(z) * std::abs(z) / 4.0;

    CDD term{DD(1.0), DD(0.0)};
    CDD sum_a = term;
    CDD sum_b = term / detail::two_sum(nu, 1.0);
    double max_term = 1.0;
    const double stop_rel = cfg.target_rel_error * 1e-3;

    for (int n = 1;; ++n) {
        if (n > cfg.series_max_terms) {
            throw Error(ErrorKind::NonConvergence, "power series exhausted series_max_terms");
        }
        DD shift = detail::two_sum(nu, static_cast<double>(n));
        term = (term * w) / (shift * static_cast<double>(n));
        sum_a = sum_a + term;
        sum_b = sum_b + term / detail::two_sum(nu, static_cast<double>(n + 1));

        double mag = std::hypot(term.re.hi, term.im.hi);
        max_term = std::max(max_term, mag);
        bool past_peak = wabs < static_cast<double>(n) * (nu + n);
        if (!past_peak) {
            continue;
        }
        double sum_mag = std::hypot(sum_a.re.hi, sum_a.im.hi);
        if (mag <= stop_rel * sum_mag || mag <= 1e-33 * max_term) {
            break;
        }
    }

    CompanionPair out;
    out.A = Complex(sum_a.re.value(), sum_a.im.value());
    Complex sb(sum_b.re.value(), sum_b.im.value());
    out.B = Complex(hx, hy) * sb;
    if (z.imag() == 0.0) {
        out.A.imag(0.0);
        out.B.imag(0.0);
    }
    return out;
}

CompanionPair eval_AB_asymptotic(SpaceOrder order, Complex z, const EvalConfig& /*cfg*/) {
    require_finite(z);
    const double nu = order.value();
    if (z == Complex(0.0)) {
        throw Error(ErrorKind::DomainError, "asymptotic path undefined at the origin");
    }
    // A is even and B is odd, so work in the right half-plane.
    double sign = 1.0;
    Complex zz = z;
    if (zz.real() < 0.0) {
        zz = -zz;
        sign = -1.0;
    }
    Complex prefactor = std::exp(log_gamma(nu + 1.0) - nu * std::log(0.5 * zz)) *
                        std::sqrt(2.0 / (std::numbers::pi * zz));
    CompanionPair out;
    out.A = hankel_bessel_j(nu, zz, prefactor);
    out.B = sign * hankel_bessel_j(nu + 1.0, zz, prefactor);
    if (z.imag() == 0.0) {
        out.A.imag(0.0);
        out.B.imag(0.0);
    }
    return out;
}

CompanionPair eval_AB(SpaceOrder nu, Complex z, const EvalConfig& cfg) {
    require_finite(z);
    if (std::abs(z) <= cfg.series_cutoff_radius) {
        return eval_AB_series(nu, z, cfg);
    }
    return eval_AB_asymptotic(nu, z, cfg);
}

Complex eval_A(SpaceOrder nu, Complex z, const EvalConfig& cfg) { return eval_AB(nu, z, cfg).A; }

Complex eval_B(SpaceOrder nu, Complex z, const EvalConfig& cfg) { return eval_AB(nu, z, cfg).B; }

Complex eval_C(SpaceOrder nu, Complex z, const EvalConfig& cfg) {
    CompanionPair ab = eval_AB(nu, z, cfg);
    if (std::abs(ab.A) < pole_guard * std::abs(ab.B)) {
        throw Error(ErrorKind::PoleProximity, "C = B/A evaluated too close to a zero of A");
    }
    return ab.B / ab.A;
}

double mcmahon_zero(double nu, double t) {
    const double b = (t + 0.5 * nu - 0.25) * std::numbers::pi;
    const double mu = 4.0 * nu * nu;
    const double e = 8.0 * b;
    return b - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e) -
           32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(e, 5));
}

namespace {

double next_zero(double nu, int n, double previous) {
    const SpaceOrder order(nu);
    auto eval = [&](double x) { return eval_AB(order, Complex(x)); };

    // A >= 1 - x^2/(4(nu+1)) keeps the first zero above 2 sqrt(nu+1); consecutive
    // zeros are more than 2.9 apart, so a 0.5 scan cannot step over two of them.
    double lo = n == 1 ? 1.8 * std::sqrt(nu + 1.0) : previous + 1.0;
    double a_lo = eval(lo).A.real();
    double hi = lo;
    double a_hi = a_lo;
    for (int step = 0;; ++step) {
        if (step > 4000) {
            throw Error(ErrorKind::ConvergenceFailure, "no sign change found for Bessel zero");
        }
        hi = lo + 0.5;
        a_hi = eval(hi).A.real();
        if (a_hi == 0.0) {
            return hi;
        }
        if ((a_lo < 0.0) != (a_hi < 0.0)) {
            break;
        }
        lo = hi;
        a_lo = a_hi;
    }

    double x = mcmahon_zero(nu, n);
    if (!(x > lo && x < hi)) {
        x = 0.5 * (lo + hi);
    }
    for (int iter = 0; iter < 200; ++iter) {
        CompanionPair ab = eval(x);
        double a = ab.A.real();
        if (a == 0.0) {
            return x;
        }
        if ((a < 0.0) == (a_lo < 0.0)) {
            lo = x;
        } else {
            hi = x;
        }
        double candidate = x + a / ab.B.real();
        if (!(candidate > lo && candidate < hi)) {
            candidate = 0.5 * (lo + hi);
        }
        double dx = std::abs(candidate - x);
        x = candidate;
        if (dx <= 4e-16 * x || hi - lo <= 4e-16 * x) {
            return x;
        }
    }
    throw Error(ErrorKind::ConvergenceFailure, "Newton iteration for Bessel zero did not converge");
}

}  // namespace

double ZeroTable::zero(int n) {
    if (n < 1) {
        throw Error(ErrorKind::DomainError, "zero index must be >= 1");
    }
    std::lock_guard<std::mutex> lock(_mutex);
    while (static_cast<int>(_zeros.size()) < n) {
        int next = static_cast<int>(_zeros.size()) + 1;
        double previous = _zeros.empty() ? 0.0 : _zeros.back();
        _zeros.push_back(next_zero(_nu, next, previous));
    }
    return _zeros[n - 1];
}

std::vector<double> ZeroTable::snapshot() const {
    std::lock_guard<std::mutex> lock(_mutex);
    return _zeros;
}

void ZeroTable::seed(const std::vector<double>& zeros) {
    std::lock_guard<std::mutex> lock(_mutex);
    if (zeros.size() > _zeros.size()) {
        _zeros = zeros;
    }
}

ZeroRegistry& ZeroRegistry::instance() {
    static ZeroRegistry registry;
    return registry;
}

std::shared_ptr<ZeroTable> ZeroRegistry::table(double nu) {
    std::lock_guard<std::mutex> lock(_mutex);
    for (const auto& t : _tables) {
        if (std::bit_cast<std::uint64_t>(t->nu()) == std::bit_cast<std::uint64_t>(nu)) {
            return t;
        }
    }
    _tables.push_back(std::make_shared<ZeroTable>(nu));
    return _tables.back();
}

std::vector<std::shared_ptr<ZeroTable>> ZeroRegistry::tables() const {
    std::lock_guard<std::mutex> lock(_mutex);
    return _tables;
}

void ZeroRegistry::clear() {
    std::lock_guard<std::mutex> lock(_mutex);
    _tables.clear();
}

double bessel_zero(SpaceOrder nu, int n) {
    return ZeroRegistry::instance().table(nu.value())->zero(n);
}

double kernel_diag(SpaceOrder nu, double x) {
    const double v = nu.value();
    if (x == 0.0) {
        return 1.0 / (std::numbers::pi * (2.0 * v + 2.0));
    }
    CompanionPair ab = eval_AB(nu, Complex(x));
    double a = ab.A.real();
    double b = ab.B.real();
    return (a * a + b * b - (2.0 * v + 1.0) * a * b / x) / std::numbers::pi;
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::DomainError, "log_gamma requires x > 0");
    }
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

}  // namespace pwsharp
