#pragma once

#include "noshlab/errors.hpp"
#include "noshlab/numkit.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace noshlab::ivest {

enum class EstimatorKind { WaldRatio = 0, Tsls1 = 1, Tsls2 = 2, Tsls3 = 3, Tsls4 = 4 };

/// "wald", "1", "2", "3", "4".
std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view text);
bool needs_modifiers(EstimatorKind kind) noexcept;

/// Which estimator to run and on which columns. Modifiers (U6, V6 in the
/// simulation) are required for Tsls2-4 and forbidden otherwise.
struct IvSpec {
  EstimatorKind kind = EstimatorKind::Tsls1;
  std::string instrument = "Z";
  std::string treatment = "X";
  std::string outcome = "Y";
  std::optional<std::pair<std::string, std::string>> modifiers;

  /// Default column names of generated data; modifiers U6/V6 when the kind needs them.
  static IvSpec standard(EstimatorKind kind);

  /// Throws SpecError when the modifier rule is broken or a column is missing.
  void validate(const numkit::Dataset& data) const;
};

/// Normal quantile for a two-sided 95% interval.
inline constexpr double kZ975 = 1.959963985;

struct IvEstimate {
  double point = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  IvSpec spec;

  static IvEstimate from_point_se(double point, double se, IvSpec spec);
};

/// cov(Y,Z)/cov(X,Z) with the just-identified sandwich SE (instruments {1,Z},
/// regressors {1,X}). Throws NumericalError for an irrelevant instrument.
IvEstimate wald_ratio(const numkit::Dataset& data, std::string_view z, std::string_view x,
                      std::string_view y);

struct SummaryWald {
  double point;
  double ci_low;
  double ci_high;
};

/// Rescales a reported intention-to-treat estimate and its CI by the first
/// stage. First-stage uncertainty is ignored.
SummaryWald wald_from_summary(double itt_point, std::pair<double, double> itt_ci, double first_stage);

/// Two-stage least squares for the four specifications, fitted as a single
/// just-identified IV system:
///   Tsls1  regressors {1, X}                         instruments {1, Z}
///   Tsls2  + {U, V}                                  + {U, V}
///   Tsls3  + {U, V, U*X, V*X}                        + {U, V, U*Z, V*Z}
///   Tsls4  + {U, V, UV, U*X, V*X, UV*X}              + {U, V, UV, U*Z, V*Z, UV*Z}
/// U and V are centred at their sample means before any product is formed, so
/// the X coefficient is the effect at the covariate means. WaldRatio is
/// delegated to wald_ratio.
IvEstimate tsls_fit(const numkit::Dataset& data, const IvSpec& spec);

struct DecompositionRow {
  double level;             ///< Z value of the upper level of the adjacent pair
  double pairwise_estimate; ///< (Ybar_z - Ybar_{z-1}) / (Xbar_z - Xbar_{z-1})
  double weight;
};

struct Decomposition {
  std::vector<DecompositionRow> rows;
  double combined;
};

/// Thrown when an adjacent first-stage difference is zero; the covariance
/// ratio is still available.
class DecompositionUndefined : public NumericalError {
 public:
  DecompositionUndefined(const std::string& what, double combined)
      : NumericalError(what), combined_(combined) {}
  [[nodiscard]] double combined() const noexcept { return combined_; }

 private:
  double combined_;
};

/// Writes the discrete-instrument Wald estimand as a weighted sum of adjacent
/// pairwise Wald estimands. Levels are ordered by the sample mean of X given
/// Z (ties by Z value); weights come from Abel summation of cov(Y,Z):
///   w_z ∝ (Xbar_z - Xbar_{z-1}) * P(Z >= z) * (E[Z | Z >= z] - E[Z])
/// where "Z >= z" means levels at or above position z in that ordering.
Decomposition discrete_z_decomposition(const numkit::Dataset& data, std::string_view z,
                                       std::string_view x, std::string_view y);

/// Binary-instrument/binary-treatment estimand from individual effects:
/// (E[bY|bX=1]P(bX=1) - E[bY|bX=-1]P(bX=-1)) / (P(bX=1) - P(bX=-1)).
double binary_decomposition_estimand(std::span<const int> beta_x, std::span<const double> beta_y);

}  // namespace noshlab::ivest
