#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pebounds {

inline constexpr std::size_t kDefaultQuadratureNodes = 20001;

/// Composite Simpson rule on [0, 1] for the substitution theta = u^4 with u
/// uniform. Nodes cluster near theta = 0, where Poisson posteriors with
/// large counts concentrate. `weights` already include the Jacobian 4u^3.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// n_nodes must be odd and >= 3.
  static QuadratureRule graded_simpson(std::size_t n_nodes = kDefaultQuadratureNodes);

  double integrate(std::span<const double> values) const;
};

/// Normalized density over theta in [0, 1] on a quadrature grid.
struct PosteriorDensity {
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> weights;
  double normalization_residual = 0.0;  // |integral - 1| after normalization

  double integral() const;
  double mean() const;
  double second_moment() const;
};

enum class Prior { flat };

/// Normalizes arbitrary nonnegative values given on rule.nodes.
PosteriorDensity normalized_density(const QuadratureRule& rule, std::vector<double> values);

/// Posterior of theta given m iid Poisson counts, p(x|theta) = (-ln theta)^x theta / x!.
/// Computed from s = sum of counts in log space, s ln(-ln theta) + m ln theta,
/// with the endpoint limits assigned exactly. Throws NumericalError when the
/// posterior bulk spans fewer than 20 grid steps (large s / m on a coarse rule).
PosteriorDensity posterior(std::span<const int> counts, Prior prior = Prior::flat,
                           std::size_t n_nodes = kDefaultQuadratureNodes);
PosteriorDensity posterior_from_total(long total_count, int m, const QuadratureRule& rule,
                                      Prior prior = Prior::flat);

/// int theta^2 p - (int theta p)^2
double posterior_variance(const PosteriorDensity& p);

struct Fig3Sample {
  std::size_t index = 0;
  long total_count = 0;
  double posterior_mean = 0.0;
  double posterior_variance = 0.0;
};

struct Fig3Result {
  double mean_ratio = 0.0;      // average posterior variance / poisson_crb
  double standard_error = 0.0;  // of mean_ratio
  std::vector<Fig3Sample> samples;
};

struct Fig3Options {
  std::size_t n_samples = 200;
  std::uint64_t seed = 1;
  std::size_t quadrature_nodes = kDefaultQuadratureNodes;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Averages the flat-prior posterior variance over n_samples simulated
/// outcomes (total count ~ Poisson(-m ln theta_true), one RNG stream per
/// sample) and normalizes by the CRB. Output does not depend on `threads`.
Fig3Result fig3_protocol(double theta_true, int m, const Fig3Options& options = {});

}  // namespace pebounds
