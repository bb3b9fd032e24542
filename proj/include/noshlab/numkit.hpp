#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace noshlab::numkit {

/// Named numeric columns of equal length. Column order is insertion order.
///
/// Invariants (checked on every insertion): at least one row, every column has
/// the same length, every value is finite, names are unique and non-empty.
class Dataset {
 public:
  Dataset() = default;

  void add_column(std::string name, std::vector<double> values);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return columns_.size(); }
  [[nodiscard]] bool has(std::string_view name) const noexcept;

  /// Throws InputError naming the missing column.
  [[nodiscard]] const std::vector<double>& column(std::string_view name) const;

  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] const std::vector<double>& column_at(std::size_t i) const { return columns_.at(i); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// Regressor or instrument matrix with a name per column (used in diagnostics).
class DesignMatrix {
 public:
  explicit DesignMatrix(Eigen::Index rows) : values_(rows, 0) {}
  DesignMatrix(Eigen::MatrixXd values, std::vector<std::string> names);

  DesignMatrix& add_intercept();
  DesignMatrix& add(std::string name, const Eigen::Ref<const Eigen::VectorXd>& column);
  DesignMatrix& add(std::string name, std::span<const double> column);

  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] Eigen::Index rows() const noexcept { return values_.rows(); }
  [[nodiscard]] Eigen::Index cols() const noexcept { return values_.cols(); }

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
};

struct LinearFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd robust_cov;
};

/// Ordinary least squares via column-pivoted Householder QR, with the HC0
/// heteroskedasticity-robust covariance of the coefficients.
LinearFit fit_least_squares(const Eigen::VectorXd& y, const DesignMatrix& regressors);

/// Just-identified instrumental-variable fit: solves W'R b = W'y where R are
/// the regressors and W the instruments (same column count). Residuals are
/// y - R b, computed with the actual regressors.
LinearFit fit_instrumental(const Eigen::VectorXd& y, const DesignMatrix& regressors,
                           const DesignMatrix& instruments);

/// HC0 sandwich (W'R)^-1 (sum_i w_i w_i' e_i^2) (R'W)^-1. With W = R this is
/// the OLS heteroskedasticity-robust covariance.
Eigen::MatrixXd sandwich_cov(const DesignMatrix& regressors, const DesignMatrix& instruments,
                             const Eigen::VectorXd& residuals);

/// Unbiased (n-1 divisor) sample covariance.
double sample_cov(std::span<const double> a, std::span<const double> b);

double sample_mean(std::span<const double> v);

/// Middle order statistic; mean of the two middle values for even length.
double sample_median(std::span<const double> v);

/// Relative tolerance on QR diagonal magnitudes below which a column is treated as dependent.
inline constexpr double kRankTolerance = 1e-10;

}  // namespace noshlab::numkit
