#include "pwsharp/spaces.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pwsharp/errors.hpp"

namespace pwsharp {

SpaceSpec::SpaceSpec(std::string name, PairFn eval, IndexFn zeros, IndexFn weights,
                     std::optional<int> zero_count, ModelFn zero_model, std::optional<double> order)
    : _name(std::move(name)),
      _eval(std::move(eval)),
      _zeros(std::move(zeros)),
      _weights(std::move(weights)),
      _zero_count(zero_count),
      _zero_model(std::move(zero_model)),
      _order(order) {}

Complex SpaceSpec::C(Complex z) const {
    CompanionPair ab = _eval(z);
    if (std::abs(ab.A) < pole_guard * std::abs(ab.B)) {
        throw Error(ErrorKind::PoleProximity, "C = B/A evaluated too close to a zero of A");
    }
    return ab.B / ab.A;
}

double SpaceSpec::zero(int n) const {
    if (n < 1 || (_zero_count && n > *_zero_count)) {
        std::ostringstream msg;
        msg << "zero index " << n << " outside the spectrum of " << _name;
        throw Error(ErrorKind::DomainError, msg.str());
    }
    return _zeros(n);
}

double SpaceSpec::weight(int n) const {
    if (n < 1 || (_zero_count && n > *_zero_count)) {
        std::ostringstream msg;
        msg << "weight index " << n << " outside the spectrum of " << _name;
        throw Error(ErrorKind::DomainError, msg.str());
    }
    return _weights(n);
}

double SpaceSpec::series_tail(int N, const TermFn& term) const {
    double sum = 0.0;
    if (_zero_count) {
        for (int n = N + 1; n <= *_zero_count; ++n) {
            sum += term(zero(n), weight(n));
        }
        return sum;
    }
    if (!_zero_model) {
        throw Error(ErrorKind::DomainError, "space has no zero asymptotics for tail sums");
    }
    const int M = std::max(4 * N, N + 200);
    for (int n = N + 1; n <= M; ++n) {
        sum += term(zero(n), weight(n));
    }
    // Midpoint rule in reverse: sum_{n > M} F(n) ~ int_{M+1/2}^inf F(t) dt + F'(M+1/2)/24,
    // with t = T/u in the integral.
    static const Quadrature quad = gauss_legendre_unit(64);
    const double T = M + 0.5;
    double integral = 0.0;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        double u = quad.nodes[i];
        double t = T / u;
        integral += quad.weights[i] * term(_zero_model(t), 1.0) * T / (u * u);
    }
    auto model_term = [&](double t) { return term(_zero_model(t), 1.0); };
    integral += (model_term(T + 0.5) - model_term(T - 0.5)) / 24.0;
    return sum + integral;
}

SpaceSpec homogeneous_space(SpaceOrder beta, const EvalConfig& cfg) {
    cfg.validate();
    const double nu = beta.value();
    auto table = ZeroRegistry::instance().table(nu);
    std::ostringstream name;
    name << "homogeneous(" << nu << ")";
    return SpaceSpec(
        name.str(), [beta, cfg](Complex z) { return eval_AB(beta, z, cfg); },
        [table](int n) { return table->zero(n); }, [](int) { return 1.0; }, std::nullopt,
        [nu](double t) { return mcmahon_zero(nu, t); }, nu);
}

SpaceSpec tabulated_space(const std::vector<double>& zeros, const std::vector<double>& weights,
                          ComplexFn A, ComplexFn B, const TabulatedOptions& opts) {
    std::vector<std::string> failures;
    auto fail = [&failures](const std::string& s) { failures.push_back(s); };

    if (!A || !B) {
        throw Error(ErrorKind::ValidationError, "tabulated space needs both A and B");
    }
    if (zeros.empty()) {
        fail("zero list is empty");
    }
    if (zeros.size() != weights.size()) {
        std::ostringstream msg;
        msg << "zeros and weights differ in length (" << zeros.size() << " vs " << weights.size()
            << ")";
        fail(msg.str());
    }
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (!std::isfinite(zeros[i]) || !(zeros[i] > 0.0)) {
            fail("zero " + std::to_string(i + 1) + " is not a positive finite number");
        }
        if (i > 0 && !(zeros[i] > zeros[i - 1])) {
            fail("zeros not strictly increasing at index " + std::to_string(i + 1));
        }
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!std::isfinite(weights[i]) || !(weights[i] > 0.0)) {
            fail("weight " + std::to_string(i + 1) + " is not positive");
        }
    }

    const Complex a0 = A(0.0);
    if (!(std::abs(a0) > 0.0)) {
        fail("A(0) vanishes");
    }
    const Complex samples[] = {0.37, 1.3, Complex(0.3, 0.2), Complex(2.1, -0.7)};
    for (Complex z : samples) {
        Complex ap = A(z), am = A(-z), bp = B(z), bm = B(-z);
        if (std::abs(ap - am) > 1e-10 * (1.0 + std::abs(ap))) {
            fail("A is not even at sampled points");
            break;
        }
        if (std::abs(bp + bm) > 1e-10 * (1.0 + std::abs(bp))) {
            fail("B is not odd at sampled points");
            break;
        }
    }

    const std::size_t count = std::min(zeros.size(), weights.size());
    for (std::size_t i = 0; i < count; ++i) {
        double xi = zeros[i];
        if (!(xi > 0.0) || !std::isfinite(xi)) {
            continue;
        }
        double a = A(xi).real();
        double b = B(xi).real();
        std::string idx = std::to_string(i + 1);
        if (std::abs(a) > opts.zero_tol * std::max(std::abs(a0), std::abs(b))) {
            fail("A does not vanish at zero " + idx);
        }
        if (!(std::abs(b) > opts.zero_tol * std::abs(a0))) {
            fail("A and B share the zero " + idx);
            continue;
        }
        double h = 1e-5 * std::max(1.0, xi);
        double da = (A(xi + h).real() - A(xi - h).real()) / (2.0 * h);
        double c = -da / b;
        if (std::abs(c - weights[i]) > opts.weight_tol * std::abs(c)) {
            std::ostringstream msg;
            msg << "weight " << idx << " = " << weights[i] << " disagrees with -A'/B = " << c;
            fail(msg.str());
        }
    }

    if (!failures.empty()) {
        std::ostringstream msg;
        msg << "tabulated space rejected:";
        for (const auto& f : failures) {
            msg << "\n  - " << f;
        }
        throw Error(ErrorKind::ValidationError, msg.str());
    }

    auto zs = std::make_shared<const std::vector<double>>(zeros);
    auto ws = std::make_shared<const std::vector<double>>(weights);
    return SpaceSpec(
        "tabulated", [A, B](Complex z) { return CompanionPair{A(z), B(z)}; },
        [zs](int n) { return (*zs)[n - 1]; }, [ws](int n) { return (*ws)[n - 1]; },
        static_cast<int>(zs->size()));
}

SpaceSpec tabulated_space_from_json(const std::string& json_text, ComplexFn A, ComplexFn B,
                                    const TabulatedOptions& opts) {
    std::vector<double> zeros, weights;
    try {
        nlohmann::json doc = nlohmann::json::parse(json_text);
        zeros = doc.at("zeros").get<std::vector<double>>();
        weights = doc.at("weights").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ValidationError,
                    std::string("spectral data must be {\"zeros\": [...], \"weights\": [...]}: ") +
                        e.what());
    }
    return tabulated_space(zeros, weights, std::move(A), std::move(B), opts);
}

double weighted_norm_ratio(const SpaceSpec& space) {
    if (!space.order()) {
        throw Error(ErrorKind::DomainError, "weighted_norm_ratio needs a homogeneous space");
    }
    double nu = *space.order();
    return std::numbers::pi * std::exp2(-2.0 * nu - 1.0) * std::exp(-2.0 * log_gamma(nu + 1.0));
}

Quadrature gauss_legendre_unit(int n) {
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = 0.5 * (1.0 - x);
        q.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        q.weights[i] = 0.5 * w;
        q.weights[n - 1 - i] = 0.5 * w;
    }
    return q;
}

}  // namespace pwsharp
