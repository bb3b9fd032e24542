#include "noshlab/dgp.hpp"

#include "noshlab/errors.hpp"
#include "noshlab/seeding.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace noshlab::dgp {

std::string_view to_string(ErrorDist dist) {
  switch (dist) {
    case ErrorDist::StandardNormal: return "standard_normal";
    case ErrorDist::BetaHalfHalf: return "beta_half_half";
    case ErrorDist::ChiSqMixture: return "chisq_mixture";
  }
  return "?";
}

ErrorDist parse_error_dist(std::string_view text) {
  if (text == "standard_normal") return ErrorDist::StandardNormal;
  if (text == "beta_half_half") return ErrorDist::BetaHalfHalf;
  if (text == "chisq_mixture") return ErrorDist::ChiSqMixture;
  throw InputError("unknown error distribution '" + std::string(text) +
                   "' (expected standard_normal, beta_half_half or chisq_mixture)");
}

void ScenarioConfig::validate() const {
  if (n < 2) throw InputError("scenario sample size must be at least 2");
  if (rho_power != 2 && rho_power != 3) throw InputError("rho_power must be 2 or 3");
  auto finite = [](const ModifierTriple& t) {
    return std::isfinite(t.u) && std::isfinite(t.v) && std::isfinite(t.uv);
  };
  bool ok = std::isfinite(gamma) && std::isfinite(rho) && std::isfinite(tau) && std::isfinite(phi) &&
            finite(theta_x4) && finite(theta_x6) && finite(theta_y5) && finite(theta_y6);
  for (int k = kFirstPair; k < kFirstPair + kPairs; ++k) ok = ok && finite(dx(k)) && finite(dy(k));
  if (!ok) throw InputError("scenario coefficients must be finite");
}

namespace {

constexpr std::size_t idx(int k) { return static_cast<std::size_t>(k - kFirstPair); }

double confounder_sum(const std::array<ModifierTriple, kPairs>& coef, const Individual& ind) {
  double s = 0.0;
  for (std::size_t j = 0; j < kPairs; ++j) s += coef[j].at(ind.u[j], ind.v[j]);
  return s;
}

double first_stage_modification(const ScenarioConfig& c, const Individual& ind) {
  return c.theta_x4.at(ind.u[idx(4)], ind.v[idx(4)]) + c.theta_x6.at(ind.u[idx(6)], ind.v[idx(6)]);
}

double effect_modification(const ScenarioConfig& c, const Individual& ind) {
  return c.theta_y5.at(ind.u[idx(5)], ind.v[idx(5)]) + c.theta_y6.at(ind.u[idx(6)], ind.v[idx(6)]);
}

}  // namespace

double treatment_value(const ScenarioConfig& c, const Individual& ind, double z) {
  const double poly = c.rho_power == 2 ? z * z : z * z * z;
  return c.gamma * z + c.rho * poly + confounder_sum(c.delta_x, ind) +
         z * first_stage_modification(c, ind) + ind.error_x;
}

double outcome_value(const ScenarioConfig& c, const Individual& ind, double x) {
  return c.tau * x + c.phi * x * x + confounder_sum(c.delta_y, ind) + x * effect_modification(c, ind) +
         ind.error_y;
}

double first_stage_effect(const ScenarioConfig& c, const Individual& ind) {
  const double z = ind.z;
  const double poly = c.rho_power == 2 ? 2.0 * c.rho * z : 3.0 * c.rho * z * z;
  return c.gamma + poly + first_stage_modification(c, ind);
}

double treatment_effect(const ScenarioConfig& c, const Individual& ind, double x) {
  return c.tau + 2.0 * c.phi * x + effect_modification(c, ind);
}

ScenarioConfig builtin_scenario(int id) {
  if (id < 1 || id > kBuiltinScenarios) {
    throw InputError("unknown scenario " + std::to_string(id) + " (expected 1-5)");
  }
  ScenarioConfig c;
  const ModifierTriple half{0.5, 0.5, 0.5};
  c.delta_x.fill(half);
  c.delta_y.fill(half);
  c.gamma = -0.4;
  c.rho = 0.3;
  c.rho_power = 2;
  c.tau = 0.5;
  c.phi = 0.0;

  if (id == 2) {
    c.theta_x6 = half;
    c.theta_y6 = half;
    return c;
  }
  c.theta_x4 = {0.5, -1.0, 0.0};
  c.theta_y5 = {0.5, -1.0, 0.0};
  if (id == 3) {
    c.tau = 0.0;
    c.phi = 0.2;
  } else if (id == 4) {
    c.error_dist = ErrorDist::BetaHalfHalf;
  } else if (id == 5) {
    c.error_dist = ErrorDist::ChiSqMixture;
  }
  return c;
}

std::vector<double> draw_raw_errors(ErrorDist dist, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  switch (dist) {
    case ErrorDist::StandardNormal: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (auto& e : out) e = normal(rng);
      break;
    }
    case ErrorDist::BetaHalfHalf: {
      // Beta(1/2, 1/2) is the arcsine law: sin^2(pi U / 2) for uniform U.
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      for (auto& e : out) {
        const double s = std::sin(0.5 * std::numbers::pi * uniform(rng));
        e = s * s;
      }
      break;
    }
    case ErrorDist::ChiSqMixture: {
      std::chi_squared_distribution<double> chisq(2.0);
      std::bernoulli_distribution coin(0.5);
      for (auto& e : out) {
        const double c = chisq(rng);
        e = c + (coin(rng) ? 7.0 : 0.0);
      }
      break;
    }
  }
  return out;
}

std::vector<double> draw_errors(ErrorDist dist, std::size_t n, std::uint64_t seed) {
  if (dist != ErrorDist::StandardNormal && n < 2) {
    throw InputError("standardised error draws need n >= 2");
  }
  std::vector<double> out = draw_raw_errors(dist, n, seed);
  if (dist == ErrorDist::StandardNormal) return out;

  const double mean = numkit::sample_mean(out);
  for (auto& e : out) e -= mean;
  double ss = 0.0;
  for (double e : out) ss += e * e;
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) throw NumericalError("error draws are constant; cannot standardise");
  for (auto& e : out) e /= sd;
  return out;
}

std::vector<Individual> draw_individuals(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  SeedSequence seeds(seed);
  const std::uint64_t seed_z = seeds.next();
  const std::uint64_t seed_x = seeds.next();
  const std::uint64_t seed_y = seeds.next();
  const std::uint64_t seed_conf = seeds.next();

  const auto ez = draw_errors(config.error_dist, config.n, seed_z);
  const auto ex = draw_errors(config.error_dist, config.n, seed_x);
  const auto ey = draw_errors(config.error_dist, config.n, seed_y);

  // Each bit of a 64-bit engine output is an exact Bernoulli(1/2) draw.
  std::mt19937_64 bits(seed_conf);
  std::vector<Individual> people(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    auto& p = people[i];
    p.z = ez[i];
    p.error_x = ex[i];
    p.error_y = ey[i];
    const std::uint64_t word = bits();
    for (std::size_t j = 0; j < kPairs; ++j) {
      p.u[j] = static_cast<double>((word >> (2 * j)) & 1U);
      p.v[j] = static_cast<double>((word >> (2 * j + 1)) & 1U);
    }
  }
  return people;
}

GeneratedData generate(const ScenarioConfig& config, std::uint64_t seed) {
  const auto people = draw_individuals(config, seed);
  const std::size_t n = config.n;

  std::vector<double> z(n), x(n), y(n);
  std::array<std::vector<double>, kPairs> u, v;
  for (std::size_t j = 0; j < kPairs; ++j) {
    u[j].resize(n);
    v[j].resize(n);
  }
  GeneratedData out;
  out.beta_x.resize(n);
  out.beta_y.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = people[i];
    z[i] = p.z;
    x[i] = treatment_value(config, p, p.z);
    y[i] = outcome_value(config, p, x[i]);
    out.beta_x[i] = first_stage_effect(config, p);
    out.beta_y[i] = treatment_effect(config, p, x[i]);
    for (std::size_t j = 0; j < kPairs; ++j) {
      u[j][i] = p.u[j];
      v[j][i] = p.v[j];
    }
  }

  out.data.add_column("Z", std::move(z));
  out.data.add_column("X", std::move(x));
  out.data.add_column("Y", std::move(y));
  for (std::size_t j = 0; j < kPairs; ++j) {
    const std::string k = std::to_string(kFirstPair + static_cast<int>(j));
    out.data.add_column("U" + k, std::move(u[j]));
    out.data.add_column("V" + k, std::move(v[j]));
  }
  out.ace = analytic_ace(config);
  return out;
}

double analytic_ace(const ScenarioConfig& c) {
  if (c.phi != 0.0 && c.error_dist != ErrorDist::StandardNormal) {
    throw InputError("analytic ACE with phi != 0 is only supported for standard normal errors");
  }
  double mean_x = 0.0;
  for (const auto& d : c.delta_x) mean_x += d.mean();
  return c.tau + 2.0 * c.phi * mean_x + c.theta_y5.mean() + c.theta_y6.mean();
}

AssumptionReport classify(const ScenarioConfig& c) {
  AssumptionReport r;
  // Only pair 6 can carry both a first-stage and an outcome modifier.
  r.assumption1 = c.theta_x6.is_zero() || c.theta_y6.is_zero();
  r.assumption2 = c.phi == 0.0;
  r.nosh = r.assumption1 && r.assumption2;
  r.nem1 = c.theta_y5.is_zero() && c.theta_y6.is_zero() && c.phi == 0.0;
  r.nem2 = c.theta_x4.is_zero() && c.theta_x6.is_zero();
  r.effect_homogeneous = r.nem1;
  r.instrument_homogeneous = r.nem2 && c.rho == 0.0;
  return r;
}

AdditiveContrast multiplicative_additive_mod(double base, double effect_ratio, double modifier_ratio) {
  bool valid = base >= 0.0;
  for (double zf : {1.0, effect_ratio}) {
    for (double vf : {1.0, modifier_ratio}) {
      const double p = base * zf * vf;
      valid = valid && p >= 0.0 && p <= 1.0;
    }
  }
  return {base * (effect_ratio - 1.0), base * modifier_ratio * (effect_ratio - 1.0), valid};
}

}  // namespace noshlab::dgp
