#pragma once

#include "noshlab/numkit.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace noshlab::dgp {

enum class ErrorDist { StandardNormal, BetaHalfHalf, ChiSqMixture };

std::string_view to_string(ErrorDist dist);
ErrorDist parse_error_dist(std::string_view text);

/// Coefficients on U_k, V_k and U_k*V_k for one confounder pair.
struct ModifierTriple {
  double u = 0.0;
  double v = 0.0;
  double uv = 0.0;

  [[nodiscard]] bool is_zero() const noexcept { return u == 0.0 && v == 0.0 && uv == 0.0; }
  [[nodiscard]] double at(double uk, double vk) const noexcept { return u * uk + v * vk + uv * uk * vk; }
  /// Expectation under independent Bernoulli(0.5) U and V.
  [[nodiscard]] double mean() const noexcept { return 0.5 * u + 0.5 * v + 0.25 * uv; }

  friend bool operator==(const ModifierTriple&, const ModifierTriple&) = default;
};

/// Confounder pairs are indexed k = 3..6.
inline constexpr int kFirstPair = 3;
inline constexpr int kPairs = 4;

/// Parameters of the simulation model
///
///   Z = eZ
///   X = gamma Z + rho Z^p + sum_k dX_k(U_k, V_k) + sum_{k in 4,6} Z thX_k(U_k, V_k) + eX
///   Y = tau X + phi X^2 + sum_k dY_k(U_k, V_k) + sum_{k in 5,6} X thY_k(U_k, V_k) + eY
///
/// with U_k, V_k ~ Bernoulli(0.5) independently and p = rho_power.
struct ScenarioConfig {
  std::size_t n = 1000;
  double gamma = 0.0;
  double rho = 0.0;
  int rho_power = 2;
  double tau = 0.0;
  double phi = 0.0;
  std::array<ModifierTriple, kPairs> delta_x{};
  std::array<ModifierTriple, kPairs> delta_y{};
  ModifierTriple theta_x4{};
  ModifierTriple theta_x6{};
  ModifierTriple theta_y5{};
  ModifierTriple theta_y6{};
  ErrorDist error_dist = ErrorDist::StandardNormal;

  [[nodiscard]] const ModifierTriple& dx(int k) const { return delta_x.at(static_cast<std::size_t>(k - kFirstPair)); }
  [[nodiscard]] const ModifierTriple& dy(int k) const { return delta_y.at(static_cast<std::size_t>(k - kFirstPair)); }

  /// Throws InputError if n < 2, a coefficient is non-finite or rho_power is not 2 or 3.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// One individual's exogenous draws.
struct Individual {
  double z = 0.0;
  std::array<double, kPairs> u{};
  std::array<double, kPairs> v{};
  double error_x = 0.0;
  double error_y = 0.0;
};

/// Structural equation for X at a given instrument value.
double treatment_value(const ScenarioConfig& cfg, const Individual& ind, double z);
/// Structural equation for Y at a given treatment value.
double outcome_value(const ScenarioConfig& cfg, const Individual& ind, double x);
/// dX/dZ at the individual's instrument value.
double first_stage_effect(const ScenarioConfig& cfg, const Individual& ind);
/// dY/dX at treatment value x.
double treatment_effect(const ScenarioConfig& cfg, const Individual& ind, double x);

struct GeneratedData {
  /// Columns Z, X, Y, U3, V3, U4, V4, U5, V5, U6, V6.
  numkit::Dataset data;
  std::vector<double> beta_y;
  std::vector<double> beta_x;
  double ace = 0.0;
};

/// The five built-in scenarios (1..5). Throws InputError otherwise.
ScenarioConfig builtin_scenario(int id);
inline constexpr int kBuiltinScenarios = 5;

/// Deterministic in (config, seed).
GeneratedData generate(const ScenarioConfig& config, std::uint64_t seed);

/// Fills `individuals` (size config.n) with the exogenous draws that generate() uses.
std::vector<Individual> draw_individuals(const ScenarioConfig& config, std::uint64_t seed);

/// n draws; the two non-normal regimes are standardised to sample mean 0 and
/// sample variance 1 (n-1 divisor).
std::vector<double> draw_errors(ErrorDist dist, std::size_t n, std::uint64_t seed);

/// Raw draws of the named regime, before standardisation.
std::vector<double> draw_raw_errors(ErrorDist dist, std::size_t n, std::uint64_t seed);

/// E[beta_Y] = tau + 2 phi E[X] + sum_{k in 5,6} E[thY_k], with E[X] taken from
/// the confounder terms alone: the instrument's polynomial terms are treated
/// as mean-zero. This is the convention behind the reference ACE values; it
/// is exact when phi = 0 or rho = 0 or rho_power is odd. With phi != 0 the
/// regime must be StandardNormal.
double analytic_ace(const ScenarioConfig& config);

struct AssumptionReport {
  bool assumption1 = false;  ///< no common modifier of Z-X and X-Y
  bool assumption2 = false;  ///< X-Y effect additive linear
  bool nosh = false;
  bool nem1 = false;
  bool nem2 = false;
  bool effect_homogeneous = false;
  bool instrument_homogeneous = false;

  friend bool operator==(const AssumptionReport&, const AssumptionReport&) = default;
};

AssumptionReport classify(const ScenarioConfig& config);

struct AdditiveContrast {
  double diff_at_0;
  double diff_at_1;
  /// False when some corner mean base * effect_ratio^z * modifier_ratio^v leaves [0, 1].
  bool valid_probabilities;
};

/// Additive Z effect at modifier levels 0 and 1 under E[X|Z,V] = base * effect_ratio^Z * modifier_ratio^V.
AdditiveContrast multiplicative_additive_mod(double base, double effect_ratio, double modifier_ratio);

}  // namespace noshlab::dgp
