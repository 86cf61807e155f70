#include "rotaflow/flux.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rotaflow {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double horner(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// g(nu) = sum a_k nu^(k+1)
double poly_g(const std::vector<double>& a, double nu) { return nu * horner(a, nu); }

// g'(nu) = sum (k+1) a_k nu^k
double poly_g_prime(const std::vector<double>& a, double nu) {
    double acc = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) acc = acc * nu + static_cast<double>(k + 1) * a[k];
    return acc;
}

double sampled_sup(const std::vector<double>& a, double lo, double hi, bool derivative) {
    constexpr int samples = 4096;
    double best = 0.0;
    for (int s = 0; s <= samples; ++s) {
        const double nu = lo + (hi - lo) * s / samples;
        best = std::max(best, std::abs(derivative ? poly_g_prime(a, nu) : poly_g(a, nu)));
    }
    return best;
}

// sup over |nu| <= R of max(|g|, |g'|) for one unmodulated component.
double component_bound(const FluxKind& kind, double R) {
    return std::visit(overloaded{
                          [&](const ConstantFlux& k) { return std::abs(k.c) * std::max(R, 1.0); },
                          [&](const BurgersFlux&) { return std::max(0.5 * R * R, R); },
                          [&](const PolynomialFlux& k) {
                              double env_g = 0.0;
                              double env_gp = 0.0;
                              for (std::size_t j = 0; j < k.coeffs.size(); ++j) {
                                  env_g += std::abs(k.coeffs[j]) * std::pow(R, static_cast<double>(j + 1));
                                  env_gp += static_cast<double>(j + 1) * std::abs(k.coeffs[j]) *
                                            std::pow(R, static_cast<double>(j));
                              }
                              const double sg = 2.0 * sampled_sup(k.coeffs, -R, R, false);
                              const double sgp = 2.0 * sampled_sup(k.coeffs, -R, R, true);
                              return std::max(std::min(env_g, sg), std::min(env_gp, sgp));
                          },
                      },
                      kind);
}

}  // namespace

double Modulation::operator()(std::span<const double> theta, std::span<const double> lengths) const {
    double a = offset;
    for (const Term& t : terms) {
        double phase = 0.0;
        for (std::size_t i = 0; i < t.mode.size() && i < theta.size(); ++i) {
            phase += 2.0 * std::numbers::pi * t.mode[i] * theta[i] / lengths[i];
        }
        a += t.cos_coeff * std::cos(phase) + t.sin_coeff * std::sin(phase);
    }
    return a;
}

double Modulation::sup_bound() const {
    double b = std::abs(offset);
    for (const Term& t : terms) b += std::abs(t.cos_coeff) + std::abs(t.sin_coeff);
    return b;
}

ScalarField Modulation::sample(const PeriodicGrid& grid) const {
    return ScalarField::sample(grid, [&](std::span<const double> theta) {
        return (*this)(theta, grid.lengths());
    });
}

FluxSpec::FluxSpec(std::vector<FluxKind> components)
    : kinds_(std::move(components)), modulation_(kinds_.size()) {
    if (kinds_.empty()) throw std::invalid_argument("flux: at least one component is required");
}

FluxSpec FluxSpec::zero(std::size_t m) { return FluxSpec(std::vector<FluxKind>(m, ConstantFlux{0.0})); }

FluxSpec FluxSpec::constant(std::vector<double> c) {
    std::vector<FluxKind> kinds;
    for (double ci : c) kinds.emplace_back(ConstantFlux{ci});
    return FluxSpec(std::move(kinds));
}

FluxSpec FluxSpec::burgers(std::size_t m) { return FluxSpec(std::vector<FluxKind>(m, BurgersFlux{})); }

FluxSpec FluxSpec::polynomial(std::size_t m, std::vector<double> coeffs) {
    return FluxSpec(std::vector<FluxKind>(m, PolynomialFlux{std::move(coeffs)}));
}

FluxSpec FluxSpec::with_modulation(std::size_t i, Modulation a) const {
    check_index(i);
    FluxSpec copy = *this;
    copy.modulation_[i] = std::move(a);
    return copy;
}

void FluxSpec::check_index(std::size_t i) const {
    if (i >= kinds_.size()) {
        throw std::out_of_range("flux: component " + std::to_string(i) + " out of range (m = " +
                                std::to_string(kinds_.size()) + ")");
    }
}

const FluxKind& FluxSpec::kind(std::size_t i) const {
    check_index(i);
    return kinds_[i];
}

const std::optional<Modulation>& FluxSpec::modulation(std::size_t i) const {
    check_index(i);
    return modulation_[i];
}

double FluxSpec::f(std::size_t i, double nu) const {
    check_index(i);
    return std::visit(overloaded{
                          [](const ConstantFlux& k) { return k.c; },
                          [&](const BurgersFlux&) { return 0.5 * nu; },
                          [&](const PolynomialFlux& k) { return horner(k.coeffs, nu); },
                      },
                      kinds_[i]);
}

double FluxSpec::g(std::size_t i, double nu) const {
    check_index(i);
    return std::visit(overloaded{
                          [&](const ConstantFlux& k) { return k.c * nu; },
                          [&](const BurgersFlux&) { return 0.5 * nu * nu; },
                          [&](const PolynomialFlux& k) { return poly_g(k.coeffs, nu); },
                      },
                      kinds_[i]);
}

double FluxSpec::g_prime(std::size_t i, double nu) const {
    check_index(i);
    return std::visit(overloaded{
                          [](const ConstantFlux& k) { return k.c; },
                          [&](const BurgersFlux&) { return nu; },
                          [&](const PolynomialFlux& k) { return poly_g_prime(k.coeffs, nu); },
                      },
                      kinds_[i]);
}

bool FluxSpec::is_modulated() const {
    return std::any_of(modulation_.begin(), modulation_.end(), [](const auto& a) { return a.has_value(); });
}

bool FluxSpec::is_zero() const {
    if (is_modulated()) return false;
    return std::all_of(kinds_.begin(), kinds_.end(), [](const FluxKind& k) {
        const auto* c = std::get_if<ConstantFlux>(&k);
        return c != nullptr && c->c == 0.0;
    });
}

bool FluxSpec::is_uniform_translation() const {
    if (is_modulated()) return false;
    return std::all_of(kinds_.begin(), kinds_.end(),
                       [](const FluxKind& k) { return std::holds_alternative<ConstantFlux>(k); });
}

std::vector<double> FluxSpec::constant_speeds() const {
    if (!is_uniform_translation()) throw std::logic_error("flux: not a constant-speed flux");
    std::vector<double> c;
    for (const auto& k : kinds_) c.push_back(std::get<ConstantFlux>(k).c);
    return c;
}

double FluxSpec::max_abs_g_prime(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    double best = 0.0;
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
        double b = std::visit(overloaded{
                                  [](const ConstantFlux& k) { return std::abs(k.c); },
                                  [&](const BurgersFlux&) { return std::max(std::abs(lo), std::abs(hi)); },
                                  [&](const PolynomialFlux& k) { return sampled_sup(k.coeffs, lo, hi, true); },
                              },
                              kinds_[i]);
        if (modulation_[i]) b *= modulation_[i]->sup_bound();
        best = std::max(best, b);
    }
    return best;
}

double eval_f(const FluxSpec& spec, std::size_t i, double nu) { return spec.f(i, nu); }
double eval_g(const FluxSpec& spec, std::size_t i, double nu) { return spec.g(i, nu); }
double eval_g_prime(const FluxSpec& spec, std::size_t i, double nu) { return spec.g_prime(i, nu); }

double flux_bound_H(const FluxSpec& spec, double M, std::size_t m) {
    if (!(M > 0.0)) throw std::invalid_argument("flux_bound_H: M must be positive");
    const double R = static_cast<double>(m + 1) * M;
    double H = 0.0;
    for (std::size_t i = 0; i < spec.components(); ++i) {
        double b = component_bound(spec.kind(i), R);
        if (const auto& a = spec.modulation(i)) b *= a->sup_bound();
        H = std::max(H, b);
    }
    return H;
}

}  // namespace rotaflow
