#include "pebounds/reference.hpp"

#include <cmath>

#include "pebounds/error.hpp"

namespace pebounds {
namespace {

void require_poisson(double theta, int m) {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  if (m < 1) throw InvalidArgument("m must be >= 1");
}

double power(double theta, double a) { return std::exp(a * std::log(theta)); }

}  // namespace

double poisson_barankin(double theta, int m) {
  require_poisson(theta, m);
  // theta^(-1/m) - 1 = expm1(-ln(theta) / m) keeps precision for large m
  return theta * theta * std::expm1(-std::log(theta) / m);
}

double poisson_mle_variance(double theta, int m) {
  require_poisson(theta, m);
  const double md = m;
  return power(theta, -md * std::expm1(-2.0 / md)) - power(theta, -2.0 * md * std::expm1(-1.0 / md));
}

double poisson_mle_mean(double theta, int m) {
  require_poisson(theta, m);
  const double md = m;
  return power(theta, -md * std::expm1(-1.0 / md));
}

double poisson_crb(double theta, int m) {
  require_poisson(theta, m);
  return -theta * theta * std::log(theta) / m;
}

double qubit_crb(double theta, int m, double r) {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("r must lie in (0, 1]");
  const double c = r * std::cos(theta);
  const double s = r * std::sin(theta);
  return (1.0 - c * c) / (m * s * s);
}

double mle_poisson_estimator(std::span<const int> counts) {
  if (counts.empty()) throw InvalidArgument("mle_poisson_estimator: no counts");
  double total = 0.0;
  for (int x : counts) {
    if (x < 0) throw InvalidArgument("counts must be nonnegative");
    total += x;
  }
  return std::exp(-total / static_cast<double>(counts.size()));
}

}  // namespace pebounds
