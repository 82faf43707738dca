#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "pwsharp/bounds.hpp"
#include "pwsharp/errors.hpp"
#include "reference.hpp"

using namespace pwsharp;

namespace {

constexpr double pi = std::numbers::pi;
const std::vector<double> lattice = {-0.9, -0.5, 0.0, 1.0, 2.5, 5.0};

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::PropertyViolation;
}

// Gamma-ratio form of the test-function bound, through std::tgamma for small arguments.
double bound_by_tgamma(double a, double b) {
    const double g = a - b;
    return std::log(std::pow(4.0, g) * (b + 1) / (a + 1) * std::tgamma(g + 1) * std::tgamma(g + 1) *
                    std::tgamma(2 * a - b + 2) / (std::tgamma(2 * g + 1) * std::tgamma(b + 2)));
}

}  // namespace

TEST(UpperBound, Examples) {
    EXPECT_NEAR(upper_bound_log_ep1(0.3, 0.3), 0.0, 1e-14);
    EXPECT_NEAR(upper_bound_log_ep1(2.0, 2.0), 0.0, 1e-14);
    // alpha = 1/2, beta = -1/2: 4 * (1/3) * Gamma(7/2) / (Gamma(3) Gamma(3/2)) = 5/2.
    EXPECT_NEAR(upper_bound_log_ep1(0.5, -0.5), std::log(2.5), 1e-14);
    EXPECT_GE(upper_bound_log_ep1(0.5, -0.5), std::log(pi * pi / 4));
    for (double a : {0.5, 1.0, 2.0, 3.7}) {
        for (double b : {-0.9, -0.5, 0.0, 0.4}) {
            EXPECT_NEAR(upper_bound_log_ep1(a, b), bound_by_tgamma(a, b), 1e-12) << a << " " << b;
        }
    }
    // Large arguments stay finite where the gamma ratio would overflow.
    EXPECT_TRUE(std::isfinite(upper_bound_log_ep1(205.0, 5.0)));
}

TEST(UpperBound, DomainErrors) {
    EXPECT_EQ(kind_of([] { upper_bound_log_ep1(0.0, 1.0); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([] { upper_bound_log_ep1(1.0, -1.0); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([] { asymptotic_main_term(0.0, 1.0); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([] { asymptotic_envelope(1.0, 1.0); }), ErrorKind::DomainError);
}

TEST(UpperBound, DominatesSolverOnLattice) {
    Lambda0Memo memo;
    for (double beta : lattice) {
        for (int k = 1; k <= 8; ++k) {
            const double lhs = 2 * k * std::log(memo.get(beta, k).lambda0);
            EXPECT_GT(upper_bound_log_ep1(beta + k, beta), lhs) << beta << " " << k;
        }
    }
}

TEST(AsymptoticMainTerm, Examples) {
    EXPECT_EQ(asymptotic_main_term(1.5, 1.5), 0.0);
    EXPECT_NEAR(asymptotic_main_term(1.5, -0.5), 4 * std::log(3.5) + std::log(0.5 / 2.5), 1e-14);
}

TEST(AsymptoticEnvelope, Examples) {
    EXPECT_NEAR(asymptotic_envelope(0.5, -0.5), 5.0 / 3.0 * std::log(12.0 / 5.0), 1e-14);
    EXPECT_GT(asymptotic_envelope(0.0, -0.1), 0.0);
    for (double beta : lattice) {
        for (int k = 1; k <= 16; ++k) {
            EXPECT_GT(asymptotic_envelope(beta + k, beta), 0.0);
        }
    }
}

TEST(AsymptoticsReport, RowsAreConsistent) {
    Lambda0Memo memo;
    auto rows = asymptotics_report({-0.5, 1.0}, 4, memo);
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        const int k = static_cast<int>(std::lround(r.alpha - r.beta));
        EXPECT_NEAR(r.log_ep1, 2 * k * std::log(memo.get(r.beta, k).lambda0), 1e-14);
        EXPECT_EQ(r.main_term, asymptotic_main_term(r.alpha, r.beta));
        EXPECT_EQ(r.envelope, asymptotic_envelope(r.alpha, r.beta));
        EXPECT_EQ(r.upper_bound_log, upper_bound_log_ep1(r.alpha, r.beta));
        EXPECT_NEAR(r.ratio, std::abs(r.log_ep1 - r.main_term) / r.envelope, 1e-15);
        EXPECT_TRUE(std::isfinite(r.ratio));
    }
    EXPECT_NEAR(rows[0].log_ep1, 2 * std::log(pi / 2), 1e-10);
    EXPECT_EQ(kind_of([&] { asymptotics_row(0.0, 0, memo); }), ErrorKind::DomainError);
}

TEST(Monotonicity, NoViolationsOnLattice) {
    Lambda0Memo memo;
    MonotonicityReport rep = monotonicity_suite(lattice, 8, memo);
    int k_mono = 0, shift = 0;
    for (const auto& c : rep.checks) {
        EXPECT_TRUE(c.ok) << c.relation << " " << c.beta << " " << c.k;
        EXPECT_GT(c.margin, 0.0) << c.relation << " " << c.beta << " " << c.k;
        EXPECT_NEAR(c.margin, c.rhs - c.lhs, 1e-15 * std::abs(c.rhs));
        (c.relation == "k-monotone" ? k_mono : shift)++;
    }
    EXPECT_EQ(k_mono, 6 * 7);
    EXPECT_EQ(shift, 6 * 8);
}

TEST(Monotonicity, KOneReducesToBesselZeros) {
    Lambda0Memo memo;
    for (double beta : lattice) {
        EXPECT_NEAR(memo.get(beta, 1).lambda0, ref::bessel_zero(beta, 1), 1e-10);
        EXPECT_LT(ref::bessel_zero(beta, 1), ref::bessel_zero(beta + 1, 1));
    }
}

TEST(Lambda0Memo, ReturnsTheSameResult) {
    Lambda0Memo memo;
    SharpConstantResult a = memo.get(0.0, 3);
    SharpConstantResult b = memo.get(0.0, 3);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.lambda0), std::bit_cast<std::uint64_t>(b.lambda0));
    EXPECT_EQ(a.evaluations, b.evaluations);
    // -0.0 and 0.0 are distinct keys but must solve to the same value.
    EXPECT_EQ(memo.get(-0.0, 3).lambda0, a.lambda0);
}
