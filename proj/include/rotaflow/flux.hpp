#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rotaflow/grid.hpp"

namespace rotaflow {

// f_i(nu) = c
struct ConstantFlux {
    double c = 0.0;
};

// f_i(nu) = sum_k coeffs[k] nu^k
struct PolynomialFlux {
    std::vector<double> coeffs;
};

// f_i(nu) = nu / 2, so g_i(nu) = nu^2 / 2
struct BurgersFlux {};

using FluxKind = std::variant<ConstantFlux, PolynomialFlux, BurgersFlux>;

/// Spatial modulation a(theta) = offset + sum_terms [c cos(kappa.theta) + s sin(kappa.theta)],
/// kappa_i = 2 pi mode_i / L_i. Only the cell problem and the scalar solver honor it.
struct Modulation {
    struct Term {
        std::vector<int> mode;
        double cos_coeff = 0.0;
        double sin_coeff = 0.0;
    };
    double offset = 1.0;
    std::vector<Term> terms;

    double operator()(std::span<const double> theta, std::span<const double> lengths) const;
    /// |offset| + sum(|c| + |s|), an upper bound on |a|.
    double sup_bound() const;
    ScalarField sample(const PeriodicGrid& grid) const;
};

/// Closed-form flux registry: f_i, g_i(nu) = nu f_i(nu) and g_i' evaluated exactly.
class FluxSpec {
public:
    explicit FluxSpec(std::vector<FluxKind> components);

    static FluxSpec zero(std::size_t m);
    static FluxSpec constant(std::vector<double> c);
    static FluxSpec burgers(std::size_t m);
    static FluxSpec polynomial(std::size_t m, std::vector<double> coeffs);

    /// Copy with component i's g multiplied by a(theta).
    FluxSpec with_modulation(std::size_t i, Modulation a) const;

    std::size_t components() const { return kinds_.size(); }
    const FluxKind& kind(std::size_t i) const;
    const std::optional<Modulation>& modulation(std::size_t i) const;

    double f(std::size_t i, double nu) const;
    double g(std::size_t i, double nu) const;
    double g_prime(std::size_t i, double nu) const;

    bool is_modulated() const;
    /// Every component is Constant(0) and unmodulated.
    bool is_zero() const;
    /// Every component is Constant and unmodulated (the flux term is a pure translation).
    bool is_uniform_translation() const;
    std::vector<double> constant_speeds() const;

    /// max_i sup |g_i'| over [lo, hi] (modulation amplitude included); used for the advective CFL.
    double max_abs_g_prime(double lo, double hi) const;

private:
    void check_index(std::size_t i) const;

    std::vector<FluxKind> kinds_;
    std::vector<std::optional<Modulation>> modulation_;
};

double eval_f(const FluxSpec& spec, std::size_t i, double nu);
double eval_g(const FluxSpec& spec, std::size_t i, double nu);
double eval_g_prime(const FluxSpec& spec, std::size_t i, double nu);

/// H = max_i sup_{|nu| <= (m+1) M} max(|g_i(nu)|, |g_i'(nu)|).
///
/// Constant and Burgers components use their exact monotone envelopes. Polynomial
/// components take the smaller of the coefficient envelope sum |a_k| R^(k+1) and twice
/// a 4096-point sample maximum; both dominate the true supremum in practice, and a
/// larger H only shortens the contraction horizon.
double flux_bound_H(const FluxSpec& spec, double M, std::size_t m);

}  // namespace rotaflow
