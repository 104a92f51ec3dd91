#pragma once

#include <optional>

#include "pebounds/cli/config.hpp"
#include "pebounds/cli/table.hpp"

namespace pebounds::cli {

// Column layouts (fixed; rows sorted by m, then n):
//   fig1, fig2:    m,n,status,bound,crb,rank,kernel_projection_norm
//   fig3:          theta,m,barankin_ratio,mle_ratio,bayes_ratio,bayes_stderr
//   fig3 samples:  theta,m,sample,total_count,posterior_mean,posterior_variance
//   bound:         model,kind,theta,n,status,value,rank,kernel_projection_norm,
//                  bias_norm,smallest_kept_singular_value,condition_number,support_warning
//   quantum-check: theta,qfi_pure,qfi_closed_form,classical_fisher,q_regularized_limit

/// Barankin bound on the qubit binomial with test points theta + k*spacing.
Table run_fig1(const RunConfig& config);
/// Same sweep with the extended-CRB constraints.
Table run_fig2(const RunConfig& config);

struct Fig3Output {
  Table table;
  Table samples;
};
/// Poisson closed forms and the averaged Bayesian variance, each over the CRB.
Fig3Output run_fig3(const RunConfig& config);

/// One BoundResult for an arbitrary model and constraint kind.
Table run_bound(const RunConfig& config);

/// Coherent-state QFI against its closed form, the Poisson Fisher information
/// and the eps -> 0 limit of the regularized Q matrix.
Table run_quantum_check(const RunConfig& config);

struct RunOutput {
  Table table;
  std::optional<Table> samples;
};

RunOutput run(const RunConfig& config);

/// Renders in the configured format.
std::string render(const Table& table, OutputFormat format);

}  // namespace pebounds::cli
