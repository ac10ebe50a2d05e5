#include "nmd/spectral.hpp"

#include <cmath>

#include "nmd/errors.hpp"

namespace nmd {

namespace {

// Direct O(N^2) projections; every series here is a few thousand samples at
// most and an FFT would buy nothing but code.
struct Projections {
  Vec sin_part;  // (2/N) sum_i x_i sin(2 pi k i / N), k = 1..K
  Vec cos_part;
  double mean = 0.0;
  double nyquist = 0.0;  // (1/N) sum_i x_i (-1)^i, even N only
};

Projections project(const Vec& x, Index k_max) {
  const Index n = x.size();
  Projections p;
  p.sin_part.setZero(k_max);
  p.cos_part.setZero(k_max);
  p.mean = x.mean();

  Vec grid(n);
  for (Index i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n);

  for (Index k = 1; k <= k_max; ++k) {
    const Eigen::ArrayXd theta = kTwoPi * static_cast<double>(k) * grid.array();
    p.sin_part[k - 1] = 2.0 / static_cast<double>(n) * (x.array() * theta.sin()).sum();
    p.cos_part[k - 1] = 2.0 / static_cast<double>(n) * (x.array() * theta.cos()).sum();
  }
  if (n % 2 == 0) {
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) acc += (i % 2 == 0 ? x[i] : -x[i]);
    p.nyquist = acc / static_cast<double>(n);
  }
  return p;
}

}  // namespace

HarmonicBasis real_harmonic_decomposition(const Vec& values) {
  const Index n = values.size();
  if (n < 4) {
    throw InputError("real_harmonic_decomposition: need at least 4 samples");
  }
  const bool even = n % 2 == 0;
  const Index k_max = n / 2 - (even ? 1 : 0);

  const Projections p = project(values, k_max);

  HarmonicBasis basis;
  basis.n_samples = n;
  basis.constant = p.mean;
  basis.entries.reserve(static_cast<std::size_t>(k_max));
  for (Index k = 1; k <= k_max; ++k) {
    basis.entries.push_back({static_cast<int>(k), p.sin_part[k - 1], p.cos_part[k - 1]});
  }
  if (even) basis.nyquist_coef = p.nyquist;
  return basis;
}

Vec reconstruct_from_basis(const HarmonicBasis& basis, const Vec& times) {
  Vec out = Vec::Constant(times.size(), basis.constant);
  for (const auto& e : basis.entries) {
    const Eigen::ArrayXd theta = kTwoPi * static_cast<double>(e.k) * times.array();
    out.array() += e.sin_coef * theta.sin() + e.cos_coef * theta.cos();
  }
  if (basis.nyquist_coef) {
    const double omega = kPi * static_cast<double>(basis.n_samples);
    out.array() += *basis.nyquist_coef * (omega * times.array()).cos();
  }
  return out;
}

std::vector<SpectrumRow> magnitude_spectrum(const Vec& values, bool zero_mean) {
  const Index n = values.size();
  if (n < 4) {
    throw InputError("magnitude_spectrum: need at least 4 samples");
  }
  Vec x = values;
  if (zero_mean) x.array() -= x.mean();

  const bool even = n % 2 == 0;
  const Index k_top = n / 2;
  const Index k_paired = k_top - (even ? 1 : 0);
  const Projections p = project(x, k_paired);

  std::vector<SpectrumRow> rows;
  rows.reserve(static_cast<std::size_t>(k_top) + 1);
  rows.push_back({0.0, std::abs(p.mean)});
  for (Index k = 1; k <= k_paired; ++k) {
    const double mag = std::hypot(p.sin_part[k - 1], p.cos_part[k - 1]);
    rows.push_back({static_cast<double>(k), mag});
  }
  if (even) {
    rows.push_back({static_cast<double>(k_top), std::abs(p.nyquist)});
  }
  return rows;
}

}  // namespace nmd
