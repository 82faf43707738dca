#ifndef PWSHARP_TESTS_REFERENCE_HPP
#define PWSHARP_TESTS_REFERENCE_HPP

// Reference values computed without the library: the standard library Bessel functions,
// a plain long double power series, and bisection.

#include <cmath>
#include <complex>
#include <algorithm>
#include <functional>
#include <vector>

namespace ref {

using Complex = std::complex<double>;

/// Power series of A_nu in long double; fine for moderate |z|.
inline std::complex<long double> A_series(double nu, Complex z, int terms = 200) {
    using CL = std::complex<long double>;
    CL w = CL(z) * CL(z) / CL(4.0L);
    CL term = 1.0L, sum = 1.0L;
    for (int n = 1; n < terms; ++n) {
        term *= -w / CL(static_cast<long double>(n) * (n + nu));
        sum += term;
    }
    return sum;
}

inline std::complex<long double> B_series(double nu, Complex z, int terms = 200) {
    using CL = std::complex<long double>;
    CL w = CL(z) * CL(z) / CL(4.0L);
    CL term = CL(z) / CL(2.0L * (nu + 1.0L));
    CL sum = term;
    for (int n = 1; n < terms; ++n) {
        term *= -w / CL(static_cast<long double>(n) * (n + nu + 1.0L));
        sum += term;
    }
    return sum;
}

/// A_nu(x) = Gamma(nu+1) (x/2)^{-nu} J_nu(x) for real x > 0. The standard library only
/// covers nu >= 0; negative orders use the long double series (x <= 25 or so).
inline double A(double nu, double x) {
    if (nu < 0.0) {
        return static_cast<double>(A_series(nu, x).real());
    }
    return std::tgamma(nu + 1.0) * std::pow(x / 2.0, -nu) * std::cyl_bessel_j(nu, x);
}

/// B_nu(x) = Gamma(nu+1) (x/2)^{-nu} J_{nu+1}(x) for real x > 0.
inline double B(double nu, double x) {
    if (nu < 0.0) {
        return static_cast<double>(B_series(nu, x).real());
    }
    return std::tgamma(nu + 1.0) * std::pow(x / 2.0, -nu) * std::cyl_bessel_j(nu + 1.0, x);
}

/// Root of f in [lo, hi] by bisection, assuming a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-15) {
    double flo = f(lo);
    while (hi - lo > tol * std::max(1.0, std::abs(hi))) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// n-th positive zero of A_nu by a sign scan from the origin followed by bisection.
inline double bessel_zero(double nu, int n) {
    auto f = [nu](double x) { return A(nu, x); };
    const double h = 0.05;
    double x = 1e-3;
    double fx = f(x);
    int found = 0;
    while (true) {
        double y = x + h;
        double fy = f(y);
        if ((fx < 0.0) != (fy < 0.0)) {
            if (++found == n) {
                return bisect(f, x, y);
            }
        }
        x = y;
        fx = fy;
    }
}

inline double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    return ab / std::sqrt(aa * bb);
}

}  // namespace ref

#endif
