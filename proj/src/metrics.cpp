#include "nmd/metrics.hpp"

#include <cmath>
#include <limits>

#include "nmd/errors.hpp"

namespace nmd {

namespace {

void check_lengths(const std::vector<Vec>& components, const Vec& original) {
  if (components.empty()) {
    throw InputError("metrics: no components");
  }
  for (const auto& c : components) {
    if (c.size() != original.size()) {
      throw InputError("metrics: component length differs from original");
    }
  }
}

}  // namespace

double index_of_orthogonality(const std::vector<Vec>& components,
                              const Vec& original) {
  check_lengths(components, original);
  const double denom = original.squaredNorm();
  if (denom == 0.0) {
    throw InputError("index_of_orthogonality: original has zero energy");
  }
  // Literal pairwise cross products, both ordered pairs counted. Components
  // with disjoint supports give an exact 0 this way, which the algebraic
  // shortcut (sum^2 minus diagonal) would lose to rounding.
  double cross = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      cross += 2.0 * components[i].dot(components[j]);
    }
  }
  return cross / denom;
}

double reconstruction_mae(const std::vector<Vec>& components, const Vec& original) {
  check_lengths(components, original);
  Vec total = Vec::Zero(original.size());
  for (const auto& c : components) total += c;
  return (total - original).cwiseAbs().mean();
}

std::vector<double> percentage_energy(const std::vector<Vec>& components) {
  if (components.empty()) {
    throw InputError("percentage_energy: no components");
  }
  std::vector<double> energy;
  energy.reserve(components.size());
  double total = 0.0;
  for (const auto& c : components) {
    energy.push_back(c.squaredNorm());
    total += energy.back();
  }
  if (total <= 0.0) {
    throw InputError("percentage_energy: all components are zero");
  }
  for (auto& e : energy) e = 100.0 * e / total;
  return energy;
}

double pearson_corr(const Vec& component, const Vec& original) {
  if (component.size() != original.size() || component.size() < 2) {
    throw InputError("pearson_corr: need two equal-length series of size >= 2");
  }
  const Vec a = component.array() - component.mean();
  const Vec b = original.array() - original.mean();
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw InputError("pearson_corr: correlation undefined for a constant series");
  }
  return a.dot(b) / (na * nb);
}

MetricsReport compute_metrics(const std::vector<Vec>& components,
                              const Vec& original) {
  MetricsReport report;
  report.io = index_of_orthogonality(components, original);
  report.mae = reconstruction_mae(components, original);
  report.pe = percentage_energy(components);
  report.corr.reserve(components.size());
  for (const auto& c : components) {
    try {
      report.corr.push_back(pearson_corr(c, original));
    } catch (const InputError&) {
      report.corr.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return report;
}

}  // namespace nmd
