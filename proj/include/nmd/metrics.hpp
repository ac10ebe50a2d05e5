#pragma once

#include <vector>

#include "nmd/types.hpp"

namespace nmd {

/// Decomposition quality numbers. pe and corr have one entry per component
/// (IMFs first, residual last); corr entries are NaN where the correlation is
/// undefined (constant component or original).
struct MetricsReport {
  double io = 0.0;
  double mae = 0.0;
  std::vector<double> pe;    // percent, sums to 100
  std::vector<double> corr;  // in [-1, 1]
};

/// Index of orthogonality: sum over t of all ordered cross products u_i u_j
/// (i != j), normalized by sum of x^2. Both ordered pairs are counted, so a
/// duplicated component contributes twice.
double index_of_orthogonality(const std::vector<Vec>& components,
                              const Vec& original);

/// Mean absolute error between the component sum and the original.
double reconstruction_mae(const std::vector<Vec>& components, const Vec& original);

/// Each component's percentage share of the total component energy.
std::vector<double> percentage_energy(const std::vector<Vec>& components);

/// Pearson correlation coefficient. Throws InputError for constant inputs.
double pearson_corr(const Vec& component, const Vec& original);

/// Bundles the four metrics for a component list (residual included as the
/// last component).
MetricsReport compute_metrics(const std::vector<Vec>& components,
                              const Vec& original);

}  // namespace nmd
