#include "noshlab/numkit.hpp"

#include "noshlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace noshlab::numkit {

void Dataset::add_column(std::string name, std::vector<double> values) {
  if (name.empty()) {
    throw InputError("dataset column names must be non-empty");
  }
  if (has(name)) {
    throw InputError("duplicate dataset column '" + name + "'");
  }
  if (values.empty()) {
    throw InputError("dataset column '" + name + "' has no rows");
  }
  if (!columns_.empty() && values.size() != rows_) {
    throw InputError("dataset column '" + name + "' has " + std::to_string(values.size()) +
                     " rows, expected " + std::to_string(rows_));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InputError("dataset column '" + name + "' has a non-finite value at row " +
                       std::to_string(i + 1));
    }
  }
  rows_ = values.size();
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

bool Dataset::has(std::string_view name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& Dataset::column(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw InputError("dataset has no column '" + std::string(name) + "'");
  }
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

DesignMatrix::DesignMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
    throw InputError("design matrix needs one name per column");
  }
}

DesignMatrix& DesignMatrix::add_intercept() {
  return add("(intercept)", Eigen::VectorXd::Ones(values_.rows()));
}

DesignMatrix& DesignMatrix::add(std::string name, const Eigen::Ref<const Eigen::VectorXd>& column) {
  if (column.size() != values_.rows()) {
    throw InputError("design column '" + name + "' has " + std::to_string(column.size()) +
                     " rows, expected " + std::to_string(values_.rows()));
  }
  values_.conservativeResize(Eigen::NoChange, values_.cols() + 1);
  values_.col(values_.cols() - 1) = column;
  names_.push_back(std::move(name));
  return *this;
}

DesignMatrix& DesignMatrix::add(std::string name, std::span<const double> column) {
  Eigen::Map<const Eigen::VectorXd> mapped(column.data(), static_cast<Eigen::Index>(column.size()));
  return add(std::move(name), mapped);
}

namespace {

std::string column_list(const DesignMatrix& m, const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr) {
  const auto& perm = qr.colsPermutation().indices();
  std::string out = "{";
  for (Eigen::Index j = qr.rank(); j < m.cols(); ++j) {
    if (out.size() > 1) out += ", ";
    out += m.names()[static_cast<std::size_t>(perm(j))];
  }
  return out + "}";
}

// Orthonormal basis of the instrument space plus the k x k system Q'R.
// W'R = P R_w' (Q'R), so every quantity built from W can be rebuilt from Q.
struct InstrumentBasis {
  Eigen::MatrixXd q;
  Eigen::MatrixXd cross;  // Q'R
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> cross_qr;
};

InstrumentBasis instrument_basis(const DesignMatrix& regressors, const DesignMatrix& instruments) {
  const Eigen::Index n = regressors.rows();
  const Eigen::Index k = regressors.cols();
  if (instruments.rows() != n) {
    throw InputError("regressors have " + std::to_string(n) + " rows but instruments have " +
                     std::to_string(instruments.rows()));
  }
  if (instruments.cols() != k) {
    throw InputError("just-identified fit needs as many instruments as regressors (" +
                     std::to_string(instruments.cols()) + " vs " + std::to_string(k) + ")");
  }
  if (k == 0 || n < k) {
    throw InputError("need at least as many rows as regressors (" + std::to_string(n) + " < " +
                     std::to_string(k) + ")");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> wqr(instruments.values());
  wqr.setThreshold(kRankTolerance);
  if (wqr.rank() < k) {
    throw SingularityError("matrix is rank deficient; dependent columns " + column_list(instruments, wqr));
  }

  InstrumentBasis basis;
  basis.q = wqr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  basis.cross = basis.q.transpose() * regressors.values();
  basis.cross_qr.setThreshold(kRankTolerance);
  basis.cross_qr.compute(basis.cross);
  if (basis.cross_qr.rank() < k) {
    throw SingularityError("instrument/regressor cross-moment is singular (weak or collinear instruments); "
                           "unidentified regressors " + column_list(regressors, basis.cross_qr));
  }
  return basis;
}

Eigen::MatrixXd sandwich_from_basis(const InstrumentBasis& basis, const Eigen::VectorXd& residuals) {
  const Eigen::MatrixXd weighted = basis.q.array().colwise() * residuals.array();
  const Eigen::MatrixXd meat = weighted.transpose() * weighted;
  const Eigen::MatrixXd bread = basis.cross_qr.inverse();
  Eigen::MatrixXd cov = bread * meat * bread.transpose();
  return 0.5 * (cov + cov.transpose());
}

}  // namespace

LinearFit fit_instrumental(const Eigen::VectorXd& y, const DesignMatrix& regressors,
                           const DesignMatrix& instruments) {
  if (y.size() != regressors.rows()) {
    throw InputError("response has " + std::to_string(y.size()) + " rows but regressors have " +
                     std::to_string(regressors.rows()));
  }
  const InstrumentBasis basis = instrument_basis(regressors, instruments);

  LinearFit fit;
  fit.coefficients = basis.cross_qr.solve(basis.q.transpose() * y);
  fit.residuals = y - regressors.values() * fit.coefficients;
  fit.robust_cov = sandwich_from_basis(basis, fit.residuals);
  return fit;
}

LinearFit fit_least_squares(const Eigen::VectorXd& y, const DesignMatrix& regressors) {
  return fit_instrumental(y, regressors, regressors);
}

Eigen::MatrixXd sandwich_cov(const DesignMatrix& regressors, const DesignMatrix& instruments,
                             const Eigen::VectorXd& residuals) {
  if (residuals.size() != regressors.rows()) {
    throw InputError("residuals have " + std::to_string(residuals.size()) + " rows but regressors have " +
                     std::to_string(regressors.rows()));
  }
  return sandwich_from_basis(instrument_basis(regressors, instruments), residuals);
}

double sample_mean(std::span<const double> v) {
  if (v.empty()) throw InputError("mean of an empty vector");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_cov(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("sample_cov needs equal lengths (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) throw InputError("sample_cov needs at least two observations");
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

double sample_median(std::span<const double> v) {
  if (v.empty()) throw InputError("median of an empty vector");
  std::vector<double> w(v.begin(), v.end());
  const std::size_t mid = w.size() / 2;
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid), w.end());
  const double upper = w[mid];
  if (w.size() % 2 == 1) return upper;
  const double lower = *std::max_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace noshlab::numkit
