#include "nmd/clustering.hpp"

#include <algorithm>
#include <cmath>

#include "nmd/errors.hpp"
#include "nmd/spectral.hpp"

namespace nmd {

namespace {

bool in_circle(const ModeCluster& c, double frequency, double radius) {
  return std::any_of(c.members.begin(), c.members.end(),
                     [&](const FrequencyPoint& m) {
                       return std::abs(frequency - m.frequency) <= radius;
                     });
}

ModeCluster singleton(const FrequencyPoint& p) {
  return ModeCluster{{p}, p.energy, p.frequency, p.frequency};
}

}  // namespace

std::vector<FrequencyPoint> frequency_points(const FnnModel& model,
                                             const Vec& times) {
  const Vec energies = unit_energies(model, times);
  std::vector<FrequencyPoint> points;
  points.reserve(static_cast<std::size_t>(model.units));
  for (Index u = 0; u < model.units; ++u) {
    points.push_back({u, model.bank.omegas[u] / kTwoPi, energies[u]});
  }
  return points;
}

std::vector<FrequencyPoint> select_primary(const std::vector<FrequencyPoint>& points,
                                           double energy_threshold) {
  double total = 0.0;
  for (const auto& p : points) total += p.energy;
  if (total <= 0.0) {
    throw DegeneracyError("select_primary: all unit energies are zero");
  }

  std::vector<FrequencyPoint> ranked = points;
  std::sort(ranked.begin(), ranked.end(),
            [](const FrequencyPoint& a, const FrequencyPoint& b) {
              if (a.energy != b.energy) return a.energy > b.energy;
              if (a.frequency != b.frequency) return a.frequency < b.frequency;
              return a.unit_index < b.unit_index;
            });

  std::vector<FrequencyPoint> primary;
  double mass = 0.0;
  for (const auto& p : ranked) {
    primary.push_back(p);
    mass += p.energy;
    if (mass > energy_threshold * total) break;
  }

  std::sort(primary.begin(), primary.end(),
            [](const FrequencyPoint& a, const FrequencyPoint& b) {
              if (a.frequency != b.frequency) return a.frequency < b.frequency;
              return a.unit_index < b.unit_index;
            });
  return primary;
}

std::pair<double, double> circle_similarity(const ModeCluster& a,
                                            const ModeCluster& b,
                                            const std::vector<FrequencyPoint>& primaries,
                                            double radius) {
  double weight_a = 0.0;
  double weight_b = 0.0;
  double overlap = 0.0;
  for (const auto& p : primaries) {
    const bool in_a = in_circle(a, p.frequency, radius);
    const bool in_b = in_circle(b, p.frequency, radius);
    if (in_a) weight_a += p.energy;
    if (in_b) weight_b += p.energy;
    if (in_a && in_b) overlap += p.energy;
  }
  if (weight_a <= 0.0 || weight_b <= 0.0) {
    throw DegeneracyError("circle_similarity: zero-weight circle");
  }
  return {overlap / weight_a, overlap / weight_b};
}

std::vector<ModeCluster> merge_clusters(const std::vector<FrequencyPoint>& primaries,
                                        const ClusterConfig& config) {
  if (primaries.empty()) {
    throw DegeneracyError("merge_clusters: no primary frequency components");
  }

  std::vector<ModeCluster> clusters;
  ModeCluster current = singleton(primaries.front());

  for (std::size_t i = 1; i < primaries.size(); ++i) {
    const ModeCluster next = singleton(primaries[i]);
    const auto [s_ij, s_ji] =
        circle_similarity(current, next, primaries, config.radius);
    if (std::max(s_ij, s_ji) > config.merge_threshold) {
      current.members.push_back(primaries[i]);
      current.weight += primaries[i].energy;
      current.hi = primaries[i].frequency;
    } else {
      clusters.push_back(std::move(current));
      current = next;
    }
  }
  clusters.push_back(std::move(current));
  return clusters;
}

std::vector<double> division_points(const std::vector<ModeCluster>& clusters,
                                    double nyquist) {
  std::vector<double> edges;
  edges.push_back(0.0);
  for (std::size_t i = 0; i + 1 < clusters.size(); ++i) {
    edges.push_back(0.5 * (clusters[i].members.back().frequency +
                           clusters[i + 1].members.front().frequency));
  }
  edges.push_back(nyquist);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) {
      throw DegeneracyError("division_points: band edges not strictly increasing");
    }
  }
  return edges;
}

DecompositionResult assemble_imfs(const FnnModel& model, const Vec& times,
                                  const std::vector<double>& edges) {
  const AmUnitSeries series = forward(model, times);
  const std::size_t bands = edges.size() - 1;
  const double nyquist = edges.back();

  DecompositionResult result;
  result.band_edges = edges;
  result.residual = series.residual;
  result.reconstruction = series.output;

  std::vector<Vec> band_sum(bands, Vec::Zero(times.size()));
  std::vector<bool> occupied(bands, false);

  for (Index u = 0; u < model.units; ++u) {
    double f = model.bank.omegas[u] / kTwoPi;
    f = std::clamp(f, 0.0, nyquist);
    std::size_t band = bands - 1;
    for (std::size_t b = 0; b + 1 < bands; ++b) {
      if (f >= edges[b] && f < edges[b + 1]) {
        band = b;
        break;
      }
    }
    band_sum[band] += series.am_signals.row(u).transpose();
    occupied[band] = true;
  }

  // highest frequency first
  for (std::size_t b = bands; b-- > 0;) {
    if (!occupied[b]) {
      result.dropped_bands.emplace_back(edges[b], edges[b + 1]);
      continue;
    }
    result.imfs.push_back(std::move(band_sum[b]));
    const auto spectrum = magnitude_spectrum(result.imfs.back(), false);
    std::size_t top = 0;
    for (std::size_t i = 1; i < spectrum.size(); ++i) {
      if (spectrum[i].magnitude > spectrum[top].magnitude) top = i;
    }
    result.dominant_frequency.push_back(spectrum[top].frequency);
  }
  return result;
}

}  // namespace nmd
