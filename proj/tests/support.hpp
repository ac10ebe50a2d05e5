#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "nmd/fnn.hpp"
#include "nmd/types.hpp"

// Independent reference implementations the library is checked against. They
// deliberately take the most literal route available, not the library's.
namespace nmd_test {

/// Complex-exponential route: full DFT, then evaluation of the length-N
/// exponential sum (1/N) sum_n X_n e^{j 2 pi n t} at normalized times t given
/// in units of the full window (grid points are i/N).
inline nmd::Vec complex_idft(const nmd::Vec& x, const nmd::Vec& times) {
  using cd = std::complex<double>;
  const auto n = x.size();
  std::vector<cd> spectrum(static_cast<std::size_t>(n));
  for (nmd::Index k = 0; k < n; ++k) {
    cd acc{0.0, 0.0};
    for (nmd::Index i = 0; i < n; ++i) {
      const double angle = -2.0 * nmd::kPi * static_cast<double>(k) *
                           static_cast<double>(i) / static_cast<double>(n);
      acc += x[i] * cd(std::cos(angle), std::sin(angle));
    }
    spectrum[static_cast<std::size_t>(k)] = acc;
  }
  nmd::Vec out(times.size());
  for (nmd::Index j = 0; j < times.size(); ++j) {
    cd acc{0.0, 0.0};
    for (nmd::Index k = 0; k < n; ++k) {
      // conjugate-symmetric half: indices above N/2 run as negative
      // frequencies so the off-grid evaluation stays real
      const double k_signed = k <= n / 2 ? static_cast<double>(k)
                                         : static_cast<double>(k - n);
      const double angle = 2.0 * nmd::kPi * k_signed * times[j];
      acc += spectrum[static_cast<std::size_t>(k)] * cd(std::cos(angle), std::sin(angle));
    }
    out[j] = acc.real() / static_cast<double>(n);
  }
  return out;
}

struct GradCheck {
  double max_rel_err = 0.0;
  nmd::Index worst_param = -1;
  nmd::Index checked = 0;
  nmd::Index skipped = 0;
};

/// Central finite differences for every packed parameter. Parameters feeding
/// a rectified-linear pre-activation that sits within `kink_guard` of zero
/// are skipped: the loss is not differentiable there.
inline GradCheck check_gradients(const nmd::FnnModel& model,
                                 const nmd::Signal& signal, double lambda,
                                 double step = 1e-5) {
  using nmd::Index;
  const double kink_guard = 2.0 * step + 1e-6;

  const auto [loss0, grads] = nmd::loss_and_gradients(model, signal, lambda);
  (void)loss0;
  const nmd::Vec analytic = grads.flatten();
  const nmd::Vec base = model.flatten();

  // pre-activation margins per hidden row
  const Index ha = model.amplitude.b1.size();
  const Index hr = model.residual.b1.size();
  nmd::Vec amp_margin(ha);
  nmd::Vec res_margin(hr);
  for (Index h = 0; h < ha; ++h) {
    double m = 1e300;
    for (Index i = 0; i < signal.size(); ++i) {
      m = std::min(m, std::abs(model.amplitude.w1[h] * signal.times[i] +
                               model.amplitude.b1[h]));
    }
    amp_margin[h] = m;
  }
  for (Index h = 0; h < hr; ++h) {
    double m = 1e300;
    for (Index i = 0; i < signal.size(); ++i) {
      m = std::min(m, std::abs(model.residual.w1[h] * signal.times[i] +
                               model.residual.b1[h]));
    }
    res_margin[h] = m;
  }

  auto near_kink = [&](Index p) {
    if (p < 2 * ha) return amp_margin[p % ha] < kink_guard;  // amp w1 then b1
    const Index res_start = base.size() - (3 * hr + 1);
    if (p >= res_start && p < res_start + 2 * hr) {
      return res_margin[(p - res_start) % hr] < kink_guard;  // res w1 then b1
    }
    // l1 subgradient is discontinuous at 0 for amplitude parameters
    const Index amp_end = 2 * ha + model.amplitude.w2.size() + model.amplitude.b2.size();
    if (lambda > 0.0 && p < amp_end && std::abs(base[p]) < kink_guard) return true;
    return false;
  };

  GradCheck result;
  nmd::FnnModel probe = model;
  for (Index p = 0; p < base.size(); ++p) {
    if (near_kink(p)) {
      ++result.skipped;
      continue;
    }
    nmd::Vec bumped = base;
    bumped[p] = base[p] + step;
    probe.unflatten(bumped);
    const double up = nmd::loss_and_gradients(probe, signal, lambda).first;
    bumped[p] = base[p] - step;
    probe.unflatten(bumped);
    const double down = nmd::loss_and_gradients(probe, signal, lambda).first;
    const double fd = (up - down) / (2.0 * step);

    const double scale = std::max({std::abs(analytic[p]), std::abs(fd), 1e-4});
    const double rel = std::abs(analytic[p] - fd) / scale;
    if (rel > result.max_rel_err) {
      result.max_rel_err = rel;
      result.worst_param = p;
    }
    ++result.checked;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Brute-force frequency clustering, written straight from the ranked-prefix /
// weighted-circle description and kept free of the library's data types.

struct OraclePoint {
  long index = 0;
  double freq = 0.0;
  double energy = 0.0;
};

/// Ranks by energy (ties: lower frequency, then lower index), walks the
/// prefix until its mass strictly exceeds share * total, returns the chosen
/// points sorted by frequency.
inline std::vector<OraclePoint> oracle_select(std::vector<OraclePoint> points,
                                              double share) {
  double total = 0.0;
  for (const auto& p : points) total += p.energy;
  std::sort(points.begin(), points.end(), [](const OraclePoint& a, const OraclePoint& b) {
    if (a.energy != b.energy) return a.energy > b.energy;
    if (a.freq != b.freq) return a.freq < b.freq;
    return a.index < b.index;
  });
  std::vector<OraclePoint> chosen;
  double mass = 0.0;
  for (const auto& p : points) {
    chosen.push_back(p);
    mass += p.energy;
    if (mass > share * total) break;
  }
  std::sort(chosen.begin(), chosen.end(), [](const OraclePoint& a, const OraclePoint& b) {
    if (a.freq != b.freq) return a.freq < b.freq;
    return a.index < b.index;
  });
  return chosen;
}

/// Weight of the union of radius-r circles around `centers`, counting every
/// primary that lands inside; recomputed from scratch at each step.
inline double oracle_circle_weight(const std::vector<OraclePoint>& centers,
                                   const std::vector<OraclePoint>& primaries,
                                   double radius) {
  double w = 0.0;
  for (const auto& p : primaries) {
    for (const auto& c : centers) {
      if (std::abs(p.freq - c.freq) <= radius) {
        w += p.energy;
        break;
      }
    }
  }
  return w;
}

inline double oracle_overlap_weight(const std::vector<OraclePoint>& a,
                                    const std::vector<OraclePoint>& b,
                                    const std::vector<OraclePoint>& primaries,
                                    double radius) {
  double w = 0.0;
  for (const auto& p : primaries) {
    bool in_a = false;
    bool in_b = false;
    for (const auto& c : a) in_a = in_a || std::abs(p.freq - c.freq) <= radius;
    for (const auto& c : b) in_b = in_b || std::abs(p.freq - c.freq) <= radius;
    if (in_a && in_b) w += p.energy;
  }
  return w;
}

/// One pass over the frequency-sorted primaries, merging whenever either
/// similarity proportion exceeds the threshold.
inline std::vector<std::vector<OraclePoint>> oracle_merge(
    const std::vector<OraclePoint>& primaries, double radius, double threshold) {
  std::vector<std::vector<OraclePoint>> modes;
  std::vector<OraclePoint> current{primaries.front()};
  for (std::size_t i = 1; i < primaries.size(); ++i) {
    const std::vector<OraclePoint> next{primaries[i]};
    const double overlap = oracle_overlap_weight(current, next, primaries, radius);
    const double s_ij = overlap / oracle_circle_weight(current, primaries, radius);
    const double s_ji = overlap / oracle_circle_weight(next, primaries, radius);
    if (s_ij > threshold || s_ji > threshold) {
      current.push_back(primaries[i]);
    } else {
      modes.push_back(current);
      current = next;
    }
  }
  modes.push_back(current);
  return modes;
}

inline std::vector<double> oracle_division(
    const std::vector<std::vector<OraclePoint>>& modes, double nyquist) {
  std::vector<double> edges{0.0};
  for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
    edges.push_back(0.5 * (modes[i].back().freq + modes[i + 1].front().freq));
  }
  edges.push_back(nyquist);
  return edges;
}

}  // namespace nmd_test
