#ifndef PWSHARP_SPACES_HPP
#define PWSHARP_SPACES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pwsharp/specialfn.hpp"

namespace pwsharp {

/// What the solver consumes from a de Branges space: A, B, the zeros of A and the weights c_n.
class SpaceSpec {
public:
    using PairFn = std::function<CompanionPair(Complex)>;
    using IndexFn = std::function<double(int)>;
    using ModelFn = std::function<double(double)>;
    using TermFn = std::function<double(double xi, double c)>;

    SpaceSpec(std::string name, PairFn eval, IndexFn zeros, IndexFn weights,
              std::optional<int> zero_count = std::nullopt, ModelFn zero_model = {},
              std::optional<double> order = std::nullopt);

    const std::string& name() const { return _name; }

    CompanionPair eval(Complex z) const { return _eval(z); }
    Complex A(Complex z) const { return _eval(z).A; }
    Complex B(Complex z) const { return _eval(z).B; }
    /// B/A, refusing points where |A| < pole_guard |B|.
    Complex C(Complex z) const;

    double zero(int n) const;
    double weight(int n) const;
    std::optional<int> zero_count() const { return _zero_count; }

    /// Order nu when the space is homogeneous.
    std::optional<double> order() const { return _order; }

    bool has_zero_model() const { return static_cast<bool>(_zero_model); }
    const ModelFn& zero_model() const { return _zero_model; }

    /// sum_{n > N} F(xi_n, c_n): explicit for finite spectra, otherwise explicit up to
    /// 4N followed by an integral over the continuous zero model.
    double series_tail(int N, const TermFn& term) const;

private:
    std::string _name;
    PairFn _eval;
    IndexFn _zeros;
    IndexFn _weights;
    std::optional<int> _zero_count;
    ModelFn _zero_model;
    std::optional<double> _order;
};

SpaceSpec homogeneous_space(SpaceOrder beta, const EvalConfig& cfg = {});

struct TabulatedOptions {
    double zero_tol = 1e-9;     // |A(xi_n)| relative to max(|A(0)|, |B(xi_n)|)
    double weight_tol = 1e-6;   // relative mismatch of c_n against -A'(xi_n)/B(xi_n)
};

using ComplexFn = std::function<Complex(Complex)>;

/// Wraps user spectral data after sampling every consistency condition; all
/// failures are collected into one ValidationError.
SpaceSpec tabulated_space(const std::vector<double>& zeros, const std::vector<double>& weights,
                          ComplexFn A, ComplexFn B, const TabulatedOptions& opts = {});

/// Same as tabulated_space, reading {"zeros": [...], "weights": [...]}.
SpaceSpec tabulated_space_from_json(const std::string& json_text, ComplexFn A, ComplexFn B,
                                    const TabulatedOptions& opts = {});

/// c_nu = pi 2^{-2nu-1} Gamma(nu+1)^{-2}; homogeneous spaces only.
double weighted_norm_ratio(const SpaceSpec& space);

/// Gauss-Legendre nodes and weights on [0, 1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Quadrature gauss_legendre_unit(int n);

}  // namespace pwsharp

#endif
