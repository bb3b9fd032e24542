#include "noshlab/ivest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace noshlab::ivest {

using numkit::Dataset;
using numkit::DesignMatrix;

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::WaldRatio: return "wald";
    case EstimatorKind::Tsls1: return "1";
    case EstimatorKind::Tsls2: return "2";
    case EstimatorKind::Tsls3: return "3";
    case EstimatorKind::Tsls4: return "4";
  }
  return "?";
}

EstimatorKind parse_estimator_kind(std::string_view text) {
  if (text == "wald") return EstimatorKind::WaldRatio;
  if (text == "1") return EstimatorKind::Tsls1;
  if (text == "2") return EstimatorKind::Tsls2;
  if (text == "3") return EstimatorKind::Tsls3;
  if (text == "4") return EstimatorKind::Tsls4;
  throw InputError("unknown estimator '" + std::string(text) + "' (expected wald, 1, 2, 3 or 4)");
}

bool needs_modifiers(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::Tsls2 || kind == EstimatorKind::Tsls3 || kind == EstimatorKind::Tsls4;
}

IvSpec IvSpec::standard(EstimatorKind kind) {
  IvSpec spec;
  spec.kind = kind;
  if (needs_modifiers(kind)) spec.modifiers = std::make_pair(std::string("U6"), std::string("V6"));
  return spec;
}

void IvSpec::validate(const Dataset& data) const {
  if (needs_modifiers(kind) && !modifiers) {
    throw SpecError("TSLS specification " + std::string(to_string(kind)) + " needs two modifier columns");
  }
  if (!needs_modifiers(kind) && modifiers) {
    throw SpecError("estimator " + std::string(to_string(kind)) + " takes no modifier columns");
  }
  std::vector<std::string> cols{instrument, treatment, outcome};
  if (modifiers) {
    cols.push_back(modifiers->first);
    cols.push_back(modifiers->second);
  }
  for (const auto& c : cols) {
    if (!data.has(c)) throw SpecError("dataset has no column '" + c + "'");
  }
}

IvEstimate IvEstimate::from_point_se(double point, double se, IvSpec spec) {
  return IvEstimate{point, se, point - kZ975 * se, point + kZ975 * se, std::move(spec)};
}

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

double stddev(const std::vector<double>& v) { return std::sqrt(numkit::sample_cov(v, v)); }

double require_relevant(const std::vector<double>& zc, const std::vector<double>& xc, std::string_view z,
                        std::string_view x) {
  const double cov_xz = numkit::sample_cov(xc, zc);
  if (std::abs(cov_xz) <= 1e-12 * stddev(xc) * stddev(zc)) {
    throw NumericalError("irrelevant instrument: cov(" + std::string(x) + ", " + std::string(z) + ") is zero");
  }
  return cov_xz;
}

}  // namespace

IvEstimate wald_ratio(const Dataset& data, std::string_view z, std::string_view x, std::string_view y) {
  const auto& zc = data.column(z);
  const auto& xc = data.column(x);
  const auto& yc = data.column(y);

  const double cov_xz = require_relevant(zc, xc, z, x);
  const double point = numkit::sample_cov(yc, zc) / cov_xz;

  DesignMatrix regressors(static_cast<Eigen::Index>(data.rows()));
  regressors.add_intercept().add(std::string(x), std::span<const double>(xc));
  DesignMatrix instruments(static_cast<Eigen::Index>(data.rows()));
  instruments.add_intercept().add(std::string(z), std::span<const double>(zc));

  const Eigen::VectorXd residuals =
      as_vector(yc).array() - (numkit::sample_mean(yc) - point * numkit::sample_mean(xc)) -
      point * as_vector(xc).array();
  const Eigen::MatrixXd cov = numkit::sandwich_cov(regressors, instruments, residuals);

  IvSpec spec{EstimatorKind::WaldRatio, std::string(z), std::string(x), std::string(y), std::nullopt};
  return IvEstimate::from_point_se(point, std::sqrt(cov(1, 1)), std::move(spec));
}

SummaryWald wald_from_summary(double itt_point, std::pair<double, double> itt_ci, double first_stage) {
  if (first_stage == 0.0 || !std::isfinite(first_stage)) {
    throw InputError("first-stage effect must be finite and non-zero");
  }
  if (itt_ci.first > itt_ci.second) {
    throw InputError("ITT confidence interval must be ordered (low <= high)");
  }
  double lo = itt_ci.first / first_stage;
  double hi = itt_ci.second / first_stage;
  if (lo > hi) std::swap(lo, hi);
  return {itt_point / first_stage, lo, hi};
}

IvEstimate tsls_fit(const Dataset& data, const IvSpec& spec) {
  spec.validate(data);
  if (spec.kind == EstimatorKind::WaldRatio) {
    return wald_ratio(data, spec.instrument, spec.treatment, spec.outcome);
  }

  const auto n = static_cast<Eigen::Index>(data.rows());
  const auto z = as_vector(data.column(spec.instrument));
  const auto x = as_vector(data.column(spec.treatment));
  const auto y = as_vector(data.column(spec.outcome));

  if (spec.kind == EstimatorKind::Tsls1) {
    (void)require_relevant(data.column(spec.instrument), data.column(spec.treatment), spec.instrument,
                           spec.treatment);
  }

  DesignMatrix regressors(n);
  DesignMatrix instruments(n);
  regressors.add_intercept().add(spec.treatment, x);
  instruments.add_intercept().add(spec.instrument, z);

  if (spec.kind != EstimatorKind::Tsls1) {
    const auto& [u_name, v_name] = *spec.modifiers;
    const Eigen::VectorXd u = as_vector(data.column(u_name)).array() - numkit::sample_mean(data.column(u_name));
    const Eigen::VectorXd v = as_vector(data.column(v_name)).array() - numkit::sample_mean(data.column(v_name));

    regressors.add(u_name, u).add(v_name, v);
    instruments.add(u_name, u).add(v_name, v);

    if (spec.kind == EstimatorKind::Tsls4) {
      const Eigen::VectorXd uv = u.cwiseProduct(v);
      const std::string uv_name = u_name + "*" + v_name;
      regressors.add(uv_name, uv);
      instruments.add(uv_name, uv);
    }
    if (spec.kind == EstimatorKind::Tsls3 || spec.kind == EstimatorKind::Tsls4) {
      std::vector<std::pair<std::string, Eigen::VectorXd>> modifiers{{u_name, u}, {v_name, v}};
      if (spec.kind == EstimatorKind::Tsls4) modifiers.emplace_back(u_name + "*" + v_name, u.cwiseProduct(v));
      for (const auto& [name, m] : modifiers) {
        regressors.add(name + "*" + spec.treatment, m.cwiseProduct(x));
        instruments.add(name + "*" + spec.instrument, m.cwiseProduct(z));
      }
    }
  }

  const numkit::LinearFit fit = numkit::fit_instrumental(y, regressors, instruments);
  return IvEstimate::from_point_se(fit.coefficients(1), std::sqrt(fit.robust_cov(1, 1)), spec);
}

Decomposition discrete_z_decomposition(const Dataset& data, std::string_view z, std::string_view x,
                                       std::string_view y) {
  const auto& zc = data.column(z);
  const auto& xc = data.column(x);
  const auto& yc = data.column(y);

  struct Level {
    double z;
    double count = 0.0;
    double sum_x = 0.0;
    double sum_y = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
  };
  std::map<double, Level> by_value;
  for (std::size_t i = 0; i < zc.size(); ++i) {
    auto& level = by_value.try_emplace(zc[i], Level{zc[i]}).first->second;
    level.count += 1.0;
    level.sum_x += xc[i];
    level.sum_y += yc[i];
  }
  if (by_value.size() < 2) {
    throw InputError("instrument '" + std::string(z) + "' needs at least two distinct values");
  }

  std::vector<Level> levels;
  for (auto& [value, level] : by_value) {
    if (level.count < 2.0) {
      throw InputError("instrument level " + std::to_string(value) + " has fewer than two observations");
    }
    level.mean_x = level.sum_x / level.count;
    level.mean_y = level.sum_y / level.count;
    levels.push_back(level);
  }
  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& b) { return a.mean_x < b.mean_x; });

  const double total = static_cast<double>(zc.size());
  const double z_mean = numkit::sample_mean(zc);

  // tail[j] = sum over levels at position >= j of P(Z = level) * (level - E[Z])
  std::vector<double> tail(levels.size(), 0.0);
  double acc = 0.0;
  for (std::size_t j = levels.size(); j-- > 0;) {
    acc += levels[j].count / total * (levels[j].z - z_mean);
    tail[j] = acc;
  }

  double x_scale = 0.0;
  for (const auto& l : levels) x_scale = std::max(x_scale, std::abs(l.mean_x));

  double numerator = 0.0;
  double denominator = 0.0;
  bool undefined = false;
  std::vector<double> dx(levels.size(), 0.0);
  std::vector<double> dy(levels.size(), 0.0);
  for (std::size_t j = 1; j < levels.size(); ++j) {
    dx[j] = levels[j].mean_x - levels[j - 1].mean_x;
    dy[j] = levels[j].mean_y - levels[j - 1].mean_y;
    if (std::abs(dx[j]) <= 1e-14 * (1.0 + x_scale)) undefined = true;
    numerator += dy[j] * tail[j];
    denominator += dx[j] * tail[j];
  }
  if (denominator == 0.0) {
    throw NumericalError("irrelevant instrument: cov(" + std::string(x) + ", " + std::string(z) + ") is zero");
  }
  if (undefined) {
    throw DecompositionUndefined("adjacent instrument levels have equal mean treatment; "
                                 "pairwise Wald estimands are undefined",
                                 numerator / denominator);
  }

  Decomposition out{{}, 0.0};
  for (std::size_t j = 1; j < levels.size(); ++j) {
    DecompositionRow row{levels[j].z, dy[j] / dx[j], dx[j] * tail[j] / denominator};
    out.combined += row.weight * row.pairwise_estimate;
    out.rows.push_back(row);
  }
  return out;
}

double binary_decomposition_estimand(std::span<const int> beta_x, std::span<const double> beta_y) {
  if (beta_x.size() != beta_y.size()) throw InputError("individual effect vectors must have equal length");
  if (beta_x.empty()) throw InputError("individual effect vectors are empty");

  double n_plus = 0.0, n_minus = 0.0, sum_plus = 0.0, sum_minus = 0.0;
  for (std::size_t i = 0; i < beta_x.size(); ++i) {
    switch (beta_x[i]) {
      case 1: n_plus += 1.0; sum_plus += beta_y[i]; break;
      case -1: n_minus += 1.0; sum_minus += beta_y[i]; break;
      case 0: break;
      default: throw InputError("binary first-stage effects must be -1, 0 or 1");
    }
  }
  if (n_plus == n_minus) {
    throw NumericalError("P(beta_X = 1) equals P(beta_X = -1): the estimand is undefined");
  }
  // Frequencies share the denominator n, which cancels.
  return (sum_plus - sum_minus) / (n_plus - n_minus);
}

}  // namespace noshlab::ivest
