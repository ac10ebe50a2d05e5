#pragma once

#include <utility>
#include <vector>

#include "nmd/fnn.hpp"
#include "nmd/types.hpp"

namespace nmd {

/// One AM unit projected onto the frequency-energy plane.
struct FrequencyPoint {
  Index unit_index = 0;
  double frequency = 0.0;  // cycles over the unit window, omega / 2 pi
  double energy = 0.0;
};

struct ClusterConfig {
  double energy_threshold = 0.95;  // P, in (0, 1)
  double radius = 2.5;             // r, in cycles
  double merge_threshold = 0.8;
};

/// A group of primary frequency components forming one mode.
struct ModeCluster {
  std::vector<FrequencyPoint> members;  // ordered by frequency
  double weight = 0.0;                  // sum of member energies
  double lo = 0.0;
  double hi = 0.0;
};

struct DecompositionResult {
  std::vector<Vec> imfs;                 // highest frequency first
  Vec residual;
  Vec reconstruction;                    // model forward output on the grid
  std::vector<double> band_edges;        // ascending, 0 .. nyquist
  std::vector<double> dominant_frequency;           // per imf, spectrum argmax
  std::vector<std::pair<double, double>> dropped_bands;  // bands with no units
};

/// Frequency-energy points of every unit of a model over the training grid.
std::vector<FrequencyPoint> frequency_points(const FnnModel& model,
                                             const Vec& times);

/// The smallest prefix of the energy-descending ranking whose energy share
/// strictly exceeds threshold * total. Ties rank by lower frequency, then
/// lower unit index. Returned sorted by frequency. Throws DegeneracyError
/// when every energy is zero.
std::vector<FrequencyPoint> select_primary(const std::vector<FrequencyPoint>& points,
                                           double energy_threshold);

/// Overlap similarity of two clusters. Each cluster covers the union of
/// radius-r intervals around its members; a circle's weight is the summed
/// energy of all primaries inside it. Returns (overlap/weight_a,
/// overlap/weight_b).
std::pair<double, double> circle_similarity(const ModeCluster& a,
                                            const ModeCluster& b,
                                            const std::vector<FrequencyPoint>& primaries,
                                            double radius);

/// Single left-to-right pass over the frequency-sorted primaries: absorb the
/// next primary into the current cluster whenever either direction of
/// circle_similarity exceeds the merge threshold, otherwise start a new one.
std::vector<ModeCluster> merge_clusters(const std::vector<FrequencyPoint>& primaries,
                                        const ClusterConfig& config);

/// Band edges: 0, the midpoints between adjacent clusters (last member of one
/// to first member of the next), and nyquist.
std::vector<double> division_points(const std::vector<ModeCluster>& clusters,
                                    double nyquist);

/// Sums each band's AM-unit series into one IMF (units banded by their
/// fine-tuned omega / 2 pi, half-open bands, last band closed). Bands that
/// end up with no units are dropped and reported in the result.
DecompositionResult assemble_imfs(const FnnModel& model, const Vec& times,
                                  const std::vector<double>& edges);

}  // namespace nmd
