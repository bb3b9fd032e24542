#include <doctest.h>

#include "noshlab/errors.hpp"
#include "noshlab/ivest.hpp"

#include <cmath>
#include <random>

using namespace noshlab;
using namespace noshlab::ivest;
using numkit::Dataset;

namespace {

Dataset make(std::vector<double> z, std::vector<double> x, std::vector<double> y) {
  Dataset d;
  d.add_column("Z", std::move(z));
  d.add_column("X", std::move(x));
  d.add_column("Y", std::move(y));
  return d;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a;
  return s / static_cast<double>(v.size());
}

Eigen::MatrixXd columns(const std::vector<std::vector<double>>& cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(cols.front().size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
  return m;
}

// Textbook two-stage fit through the normal equations.
double two_stage_slope(const Eigen::MatrixXd& r, const Eigen::MatrixXd& w, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd fitted = w * (w.transpose() * w).ldlt().solve(w.transpose() * r);
  const Eigen::VectorXd b = (fitted.transpose() * fitted).ldlt().solve(fitted.transpose() * y);
  return b(1);
}

struct Simulated {
  Dataset data;
  std::vector<double> z, x, y, u, v;
};

Simulated random_modifier_data(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::bernoulli_distribution coin(0.5);
  Simulated s;
  for (int i = 0; i < n; ++i) {
    const double u = coin(rng), v = coin(rng), z = g(rng);
    const double x = (0.6 + 0.3 * u) * z + 0.5 * v + g(rng);
    const double y = (0.4 + 0.2 * v - 0.1 * u) * x + u + g(rng);
    s.z.push_back(z);
    s.x.push_back(x);
    s.y.push_back(y);
    s.u.push_back(u);
    s.v.push_back(v);
  }
  s.data.add_column("Z", s.z);
  s.data.add_column("X", s.x);
  s.data.add_column("Y", s.y);
  s.data.add_column("U6", s.u);
  s.data.add_column("V6", s.v);
  return s;
}

}  // namespace

TEST_CASE("wald_ratio on a three-row example") {
  // cov(X,Z) = 3/2, cov(Y,Z) = 5/2.
  const auto d = make({0, 1, 2}, {1, 2, 4}, {0, 3, 5});
  CHECK(wald_ratio(d, "Z", "X", "Y").point == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("wald_ratio on a six-row binary-instrument example") {
  // Group sums differ by 3 in X and 7 in Y; each covariance is half that over n - 1.
  const auto d = make({0, 0, 0, 1, 1, 1}, {1, 0, 2, 2, 2, 2}, {1, 0, 2, 3, 4, 3});
  CHECK(numkit::sample_cov(d.column("X"), d.column("Z")) == doctest::Approx(0.3));
  CHECK(numkit::sample_cov(d.column("Y"), d.column("Z")) == doctest::Approx(0.7));
  CHECK(wald_ratio(d, "Z", "X", "Y").point == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("wald_ratio rejects an irrelevant instrument") {
  const auto d = make({0, 1, 0, 1}, {1, 1, 2, 2}, {1, 2, 3, 4});
  CHECK_THROWS_AS(wald_ratio(d, "Z", "X", "Y"), NumericalError);
}

TEST_CASE("wald_ratio SE equals the sandwich computed by hand") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::vector<double> z, x, y;
  for (int i = 0; i < 200; ++i) {
    z.push_back(g(rng));
    x.push_back(0.7 * z.back() + g(rng));
    y.push_back(0.5 * x.back() + (1 + std::abs(z.back())) * g(rng));
  }
  const auto est = wald_ratio(make(z, x, y), "Z", "X", "Y");
  // Closed form for the slope of a just-identified {1,Z} system:
  // var = sum (z_i - zbar)^2 e_i^2 / (sum (z_i - zbar)(x_i - xbar))^2.
  const double zb = mean(z), xb = mean(x), yb = mean(y);
  double sxz = 0.0, meat = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double e = y[i] - yb - est.point * (x[i] - xb);
    sxz += (z[i] - zb) * (x[i] - xb);
    meat += (z[i] - zb) * (z[i] - zb) * e * e;
  }
  CHECK(est.se == doctest::Approx(std::sqrt(meat) / std::abs(sxz)).epsilon(1e-10));
  CHECK(est.ci_low == doctest::Approx(est.point - kZ975 * est.se).epsilon(1e-14));
  CHECK(est.ci_high == doctest::Approx(est.point + kZ975 * est.se).epsilon(1e-14));
}

TEST_CASE("Tsls1 equals the covariance ratio") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = random_modifier_data(seed, 150);
    const auto t = tsls_fit(s.data, IvSpec::standard(EstimatorKind::Tsls1));
    const auto w = wald_ratio(s.data, "Z", "X", "Y");
    CHECK(t.point == doctest::Approx(w.point).epsilon(1e-10));
    CHECK(t.se == doctest::Approx(w.se).epsilon(1e-10));
  }
}

TEST_CASE("Tsls2-4 agree with a textbook two-stage fit") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = random_modifier_data(100 + seed, 300);
    std::vector<double> one(s.z.size(), 1.0), u(s.u), v(s.v);
    const double ub = mean(u), vb = mean(v);
    for (auto& a : u) a -= ub;
    for (auto& a : v) a -= vb;
    std::vector<double> uv(u.size()), ux(u.size()), vx(u.size()), uz(u.size()), vz(u.size()), uvx(u.size()),
        uvz(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      uv[i] = u[i] * v[i];
      ux[i] = u[i] * s.x[i];
      vx[i] = v[i] * s.x[i];
      uz[i] = u[i] * s.z[i];
      vz[i] = v[i] * s.z[i];
      uvx[i] = uv[i] * s.x[i];
      uvz[i] = uv[i] * s.z[i];
    }
    const Eigen::VectorXd y = columns({s.y}).col(0);

    const double b2 = two_stage_slope(columns({one, s.x, u, v}), columns({one, s.z, u, v}), y);
    const double b3 = two_stage_slope(columns({one, s.x, u, v, ux, vx}), columns({one, s.z, u, v, uz, vz}), y);
    const double b4 = two_stage_slope(columns({one, s.x, u, v, uv, ux, vx, uvx}),
                                      columns({one, s.z, u, v, uv, uz, vz, uvz}), y);

    CHECK(tsls_fit(s.data, IvSpec::standard(EstimatorKind::Tsls2)).point == doctest::Approx(b2).epsilon(1e-9));
    CHECK(tsls_fit(s.data, IvSpec::standard(EstimatorKind::Tsls3)).point == doctest::Approx(b3).epsilon(1e-9));
    CHECK(tsls_fit(s.data, IvSpec::standard(EstimatorKind::Tsls4)).point == doctest::Approx(b4).epsilon(1e-9));
  }
}

TEST_CASE("TSLS is invariant to affine transforms of the instrument and equivariant in the outcome") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = random_modifier_data(200 + seed, 200);
    for (auto kind : {EstimatorKind::WaldRatio, EstimatorKind::Tsls1, EstimatorKind::Tsls2, EstimatorKind::Tsls3,
                      EstimatorKind::Tsls4}) {
      const auto base = tsls_fit(s.data, IvSpec::standard(kind));

      Dataset shifted;
      std::vector<double> z2(s.z), y2(s.y);
      for (auto& a : z2) a = 3.0 - 2.5 * a;
      for (std::size_t i = 0; i < y2.size(); ++i) y2[i] = 4.0 * y2[i] + 1.5;
      shifted.add_column("Z", z2);
      shifted.add_column("X", s.x);
      shifted.add_column("Y", y2);
      shifted.add_column("U6", s.u);
      shifted.add_column("V6", s.v);

      const auto moved = tsls_fit(shifted, IvSpec::standard(kind));
      CHECK(moved.point == doctest::Approx(4.0 * base.point).epsilon(1e-8));
      CHECK(moved.se == doctest::Approx(4.0 * base.se).epsilon(1e-8));
    }
  }
}

TEST_CASE("IvSpec validation") {
  const auto s = random_modifier_data(1, 50);
  IvSpec two{EstimatorKind::Tsls2};
  CHECK_THROWS_AS(tsls_fit(s.data, two), SpecError);
  IvSpec wald{EstimatorKind::WaldRatio};
  wald.modifiers = std::make_pair(std::string("U6"), std::string("V6"));
  CHECK_THROWS_AS(tsls_fit(s.data, wald), SpecError);
  IvSpec missing = IvSpec::standard(EstimatorKind::Tsls1);
  missing.outcome = "W";
  CHECK_THROWS_AS(tsls_fit(s.data, missing), SpecError);
  CHECK_THROWS_AS(parse_estimator_kind("5"), InputError);
  for (auto kind : {EstimatorKind::WaldRatio, EstimatorKind::Tsls1, EstimatorKind::Tsls4}) {
    CHECK(parse_estimator_kind(to_string(kind)) == kind);
  }
}

TEST_CASE("Tsls3 rejects a constant modifier as collinear") {
  auto s = random_modifier_data(3, 60);
  Dataset d;
  d.add_column("Z", s.z);
  d.add_column("X", s.x);
  d.add_column("Y", s.y);
  d.add_column("U6", std::vector<double>(s.z.size(), 1.0));
  d.add_column("V6", s.v);
  CHECK_THROWS_AS(tsls_fit(d, IvSpec::standard(EstimatorKind::Tsls3)), SingularityError);
}

TEST_CASE("wald_from_summary") {
  const auto r = wald_from_summary(0.29, {0.05, 0.52}, 0.921);
  CHECK(r.point == doctest::Approx(0.29 / 0.921).epsilon(1e-14));
  CHECK(r.ci_low == doctest::Approx(0.05 / 0.921).epsilon(1e-14));
  CHECK(r.ci_high == doctest::Approx(0.52 / 0.921).epsilon(1e-14));
  CHECK(r.point == doctest::Approx(0.3148751357).epsilon(1e-9));

  const auto neg = wald_from_summary(-1.0, {-2.0, 1.0}, -0.5);
  CHECK(neg.point == 2.0);
  CHECK(neg.ci_low == -2.0);
  CHECK(neg.ci_high == 4.0);

  CHECK_THROWS_AS(wald_from_summary(1.0, {0.0, 2.0}, 0.0), InputError);
  CHECK_THROWS_AS(wald_from_summary(1.0, {2.0, 0.0}, 1.0), InputError);
}

TEST_CASE("discrete_z_decomposition on a hand example") {
  // Levels 0,1,2 with two rows each. Xbar = 0, 1, 3; Ybar = 0, 2, 3.
  const auto d = make({0, 0, 1, 1, 2, 2}, {-1, 1, 0, 2, 3, 3}, {0, 0, 1, 3, 3, 3});
  const auto dec = discrete_z_decomposition(d, "Z", "X", "Y");
  REQUIRE(dec.rows.size() == 2);
  CHECK(dec.rows[0].pairwise_estimate == doctest::Approx(2.0));
  CHECK(dec.rows[1].pairwise_estimate == doctest::Approx(0.5));
  // Tail sums with E[Z] = 1: c1 = (1/3)(0) + (1/3)(1) = 1/3, c2 = 1/3.
  // Denominator 1*(1/3) + 2*(1/3) = 1, so weights 1/3 and 2/3.
  CHECK(dec.rows[0].weight == doctest::Approx(1.0 / 3.0));
  CHECK(dec.rows[1].weight == doctest::Approx(2.0 / 3.0));
  CHECK(dec.combined == doctest::Approx(1.0));
  CHECK(dec.combined == doctest::Approx(wald_ratio(d, "Z", "X", "Y").point).epsilon(1e-12));
}

TEST_CASE("discrete_z_decomposition identities on random data") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 2 + trial % 5;
    std::uniform_int_distribution<int> level(0, k - 1);
    std::vector<double> effect(static_cast<std::size_t>(k));
    for (auto& e : effect) e = g(rng);
    std::vector<double> z, x, y;
    for (int i = 0; i < 400; ++i) {
      const int l = i < 2 * k ? i % k : level(rng);
      z.push_back(1.5 * l - 2.0);
      x.push_back(effect[static_cast<std::size_t>(l)] + 0.5 * g(rng));
      y.push_back(0.3 * x.back() + g(rng));
    }
    const auto d = make(z, x, y);
    const auto dec = discrete_z_decomposition(d, "Z", "X", "Y");
    double wsum = 0.0;
    for (const auto& r : dec.rows) wsum += r.weight;
    CHECK(std::abs(wsum - 1.0) <= 1e-9);
    CHECK(std::abs(dec.combined - wald_ratio(d, "Z", "X", "Y").point) <=
          1e-10 * (1.0 + std::abs(dec.combined)));
  }
}

TEST_CASE("discrete_z_decomposition reports undefined pairwise estimands") {
  const auto d = make({0, 0, 1, 1, 2, 2}, {0, 2, 0, 2, 3, 5}, {0, 1, 2, 3, 4, 5});
  try {
    (void)discrete_z_decomposition(d, "Z", "X", "Y");
    FAIL("expected DecompositionUndefined");
  } catch (const DecompositionUndefined& e) {
    CHECK(e.combined() == doctest::Approx(wald_ratio(d, "Z", "X", "Y").point).epsilon(1e-12));
  }
  CHECK_THROWS_AS(discrete_z_decomposition(make({0, 0, 0}, {1, 2, 3}, {1, 2, 3}), "Z", "X", "Y"), InputError);
  CHECK_THROWS_AS(discrete_z_decomposition(make({0, 0, 1}, {1, 2, 3}, {1, 2, 3}), "Z", "X", "Y"), InputError);
}

TEST_CASE("binary_decomposition_estimand") {
  const std::vector<int> bx{1, 1, -1};
  const std::vector<double> by{2, 4, 10};
  CHECK(binary_decomposition_estimand(bx, by) == doctest::Approx(-4.0));

  const std::vector<int> mono{1, 1, 0, 0};
  const std::vector<double> eff{1, 3, 100, -100};
  CHECK(binary_decomposition_estimand(mono, eff) == doctest::Approx(2.0));

  const std::vector<int> tie{1, -1};
  CHECK_THROWS_AS(binary_decomposition_estimand(tie, std::vector<double>{1, 2}), NumericalError);
  const std::vector<int> bad{2};
  CHECK_THROWS_AS(binary_decomposition_estimand(bad, std::vector<double>{1}), InputError);
}
