#pragma once

#include <span>

namespace pebounds {

// Closed forms for the Poisson zero-count model (theta = p(0|theta), m iid
// draws) and the repeated qubit measurement. Powers theta^a are evaluated as
// exp(a ln theta). Poisson functions throw InvalidArgument unless 0 < theta < 1
// and m >= 1.

/// Barankin bound optimized over test points: theta^2 (theta^(-1/m) - 1).
double poisson_barankin(double theta, int m);

/// Variance of the MLE exp(-mean count):
/// theta^(m(1 - e^(-2/m))) - theta^(2m(1 - e^(-1/m))).
double poisson_mle_variance(double theta, int m);

/// Mean of the MLE: theta^(m(1 - e^(-1/m))).
double poisson_mle_mean(double theta, int m);

/// -theta^2 ln(theta) / m
double poisson_crb(double theta, int m);

/// (1 - r^2 cos^2 theta) / (m r^2 sin^2 theta)
double qubit_crb(double theta, int m, double r = 1.0);

/// argmax over theta in [0, 1] of prod_i p(x_i|theta).
///
/// The log-likelihood is m ln(theta) + s ln(-ln theta) + const with
/// s = sum x_i; setting its derivative m/theta + s/(theta ln theta) to zero
/// gives ln theta = -s/m, i.e. theta = exp(-mean count). For s = 0 the
/// likelihood theta^m is maximal at the endpoint theta = 1, which the same
/// expression returns.
double mle_poisson_estimator(std::span<const int> counts);

}  // namespace pebounds
