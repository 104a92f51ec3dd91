#include "pebounds/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "pebounds/error.hpp"
#include "pebounds/reference.hpp"
#include "pebounds/rng.hpp"

namespace pebounds {

QuadratureRule QuadratureRule::graded_simpson(std::size_t n_nodes) {
  if (n_nodes < 3 || n_nodes % 2 == 0) {
    throw InvalidArgument("Simpson quadrature needs an odd node count >= 3");
  }
  QuadratureRule rule;
  rule.nodes.resize(n_nodes);
  rule.weights.resize(n_nodes);
  const double h = 1.0 / static_cast<double>(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double u = i == n_nodes - 1 ? 1.0 : static_cast<double>(i) * h;
    const double u2 = u * u;
    rule.nodes[i] = u2 * u2;
    const double simpson = (i == 0 || i == n_nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    rule.weights[i] = simpson * h / 3.0 * 4.0 * u2 * u;
  }
  return rule;
}

double QuadratureRule::integrate(std::span<const double> values) const {
  if (values.size() != nodes.size()) throw InvalidArgument("quadrature: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * values[i];
  return sum;
}

namespace {

double weighted_moment(const PosteriorDensity& p, int power) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    double w = p.weights[i] * p.density[i];
    for (int k = 0; k < power; ++k) w *= p.grid[i];
    sum += w;
  }
  return sum;
}

}  // namespace

double PosteriorDensity::integral() const { return weighted_moment(*this, 0); }
double PosteriorDensity::mean() const { return weighted_moment(*this, 1); }
double PosteriorDensity::second_moment() const { return weighted_moment(*this, 2); }

PosteriorDensity normalized_density(const QuadratureRule& rule, std::vector<double> values) {
  if (values.size() != rule.nodes.size()) throw InvalidArgument("density: size mismatch");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("density values must be finite and >= 0");
  }
  const double z = rule.integrate(values);
  if (!(z > 0.0)) throw NumericalError("density integrates to zero on the quadrature grid");
  for (double& v : values) v /= z;
  PosteriorDensity p{rule.nodes, std::move(values), rule.weights, 0.0};
  p.normalization_residual = std::abs(p.integral() - 1.0);
  return p;
}

PosteriorDensity posterior_from_total(long total_count, int m, const QuadratureRule& rule, Prior) {
  if (total_count < 0) throw InvalidArgument("counts must be nonnegative");
  if (m < 1) throw InvalidArgument("posterior needs at least one count");
  const double s = static_cast<double>(total_count);
  const std::size_t n = rule.nodes.size();
  // -ln theta ~ Gamma(s + 1, m + 1): in u = theta^(1/4) the bulk sits at
  // u* = exp(-s / (4(m+1))) with log-width sqrt(s+1) / (4(m+1)). Fewer than
  // kMinCells grid steps across it means Simpson no longer resolves the peak.
  constexpr double kMinCells = 20.0;
  const double u_star = std::exp(-s / (4.0 * (m + 1)));
  const double cells = u_star * std::sqrt(s + 1.0) / (4.0 * (m + 1)) * static_cast<double>(n - 1);
  if (cells < kMinCells) {
    throw NumericalError("posterior not resolved by the quadrature grid (s = " +
                         std::to_string(total_count) + ", m = " + std::to_string(m) +
                         "); increase quadrature_nodes");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<double> log_like(n, kNegInf);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rule.nodes[i];
    if (t <= 0.0) continue;  // theta^m (-ln theta)^s -> 0
    if (t >= 1.0) {
      if (total_count == 0) log_like[i] = 0.0;  // theta^m -> 1
      continue;
    }
    const double lt = std::log(t);
    log_like[i] = (total_count == 0 ? 0.0 : s * std::log(-lt)) + m * lt;
  }
  const double peak = *std::max_element(log_like.begin(), log_like.end());
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = std::exp(log_like[i] - peak);
  return normalized_density(rule, std::move(values));
}

PosteriorDensity posterior(std::span<const int> counts, Prior prior, std::size_t n_nodes) {
  if (counts.empty()) throw InvalidArgument("posterior needs at least one count");
  long total = 0;
  for (int x : counts) {
    if (x < 0) throw InvalidArgument("counts must be nonnegative");
    total += x;
  }
  return posterior_from_total(total, static_cast<int>(counts.size()),
                              QuadratureRule::graded_simpson(n_nodes), prior);
}

double posterior_variance(const PosteriorDensity& p) {
  const double mean = p.mean();
  return std::max(0.0, p.second_moment() - mean * mean);
}

Fig3Result fig3_protocol(double theta_true, int m, const Fig3Options& options) {
  if (!(theta_true > 0.0 && theta_true < 1.0)) throw InvalidArgument("theta_true must lie in (0, 1)");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (options.n_samples == 0) throw InvalidArgument("n_samples must be >= 1");

  const QuadratureRule rule = QuadratureRule::graded_simpson(options.quadrature_nodes);
  const double mean_count = -m * std::log(theta_true);
  const std::size_t n = options.n_samples;
  std::vector<Fig3Sample> samples(n);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 engine(stream_seed(options.seed, i));
      const long s = sample_poisson(engine, mean_count);
      const PosteriorDensity post = posterior_from_total(s, m, rule);
      samples[i] = {i, s, post.mean(), posterior_variance(post)};
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(n));
  if (threads == 1) {
    run_range(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(run_range, begin, std::min(n, begin + chunk));
    }
  }

  const double crb = poisson_crb(theta_true, m);
  Fig3Result result;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.posterior_variance / crb;
  result.mean_ratio = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (const auto& s : samples) {
      const double d = s.posterior_variance / crb - result.mean_ratio;
      ss += d * d;
    }
    result.standard_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  result.samples = std::move(samples);
  return result;
}

}  // namespace pebounds
