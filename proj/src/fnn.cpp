#include "nmd/fnn.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nmd/errors.hpp"
#include "nmd/rng.hpp"
#include "nmd/spectral.hpp"

namespace nmd {

namespace {

constexpr double kInitScale = 0.01;
constexpr char kCheckpointFormat[] = "nmd-checkpoint";
constexpr int kCheckpointVersion = 1;

// Everything the backward pass needs from one evaluation.
struct ForwardTrace {
  Mat z1;         // Ha x N amplitude pre-activations
  Mat a1;         // Ha x N
  Mat amplitudes; // H x N
  Mat sin_theta;  // H x N
  Mat cos_theta;  // H x N (filled only when want_cos)
  Mat zr;         // Hr x N residual pre-activations
  Mat ar;         // Hr x N
  Vec residual;   // N
  Vec output;     // N
};

ForwardTrace trace_forward(const FnnModel& m, const Vec& times, bool want_cos) {
  ForwardTrace t;
  const Eigen::RowVectorXd tr = times.transpose();

  t.z1.noalias() = m.amplitude.w1 * tr;
  t.z1.colwise() += m.amplitude.b1;
  t.a1 = t.z1.cwiseMax(0.0);
  t.amplitudes.noalias() = m.amplitude.w2 * t.a1;
  t.amplitudes.colwise() += m.amplitude.b2;

  Mat theta = m.bank.omegas * tr;
  theta.colwise() += m.bank.phis;
  t.sin_theta = theta.array().sin();
  if (want_cos) t.cos_theta = theta.array().cos();

  t.zr.noalias() = m.residual.w1 * tr;
  t.zr.colwise() += m.residual.b1;
  t.ar = t.zr.cwiseMax(0.0);
  t.residual.noalias() = t.ar.transpose() * m.residual.w2;
  t.residual.array() += m.residual.b2;

  t.output = (t.amplitudes.cwiseProduct(t.sin_theta)).colwise().sum().transpose();
  t.output += t.residual;
  return t;
}

double l1_norm(const AmplitudeNet& a) {
  return a.w1.lpNorm<1>() + a.b1.lpNorm<1>() + a.w2.lpNorm<1>() + a.b2.lpNorm<1>();
}

// Subgradient of |p|, 0 at 0.
template <typename T>
auto sign_of(const T& p) {
  return (p.array() > 0.0).template cast<double>() -
         (p.array() < 0.0).template cast<double>();
}

void append(Vec& dst, Index& at, const Vec& src) {
  dst.segment(at, src.size()) = src;
  at += src.size();
}

void append_row_major(Vec& dst, Index& at, const Mat& src) {
  for (Index r = 0; r < src.rows(); ++r) {
    dst.segment(at, src.cols()) = src.row(r).transpose();
    at += src.cols();
  }
}

void take(const Vec& src, Index& at, Vec& dst) {
  dst = src.segment(at, dst.size());
  at += dst.size();
}

void take_row_major(const Vec& src, Index& at, Mat& dst) {
  for (Index r = 0; r < dst.rows(); ++r) {
    dst.row(r) = src.segment(at, dst.cols()).transpose();
    at += dst.cols();
  }
}

}  // namespace

Index FnnModel::parameter_count() const {
  return amplitude.w1.size() + amplitude.b1.size() + amplitude.w2.size() +
         amplitude.b2.size() + bank.omegas.size() + bank.phis.size() +
         residual.w1.size() + residual.b1.size() + residual.w2.size() + 1;
}

Vec FnnModel::flatten() const {
  Vec packed(parameter_count());
  Index at = 0;
  append(packed, at, amplitude.w1);
  append(packed, at, amplitude.b1);
  append_row_major(packed, at, amplitude.w2);
  append(packed, at, amplitude.b2);
  append(packed, at, bank.omegas);
  append(packed, at, bank.phis);
  append(packed, at, residual.w1);
  append(packed, at, residual.b1);
  append(packed, at, residual.w2);
  packed[at++] = residual.b2;
  return packed;
}

void FnnModel::unflatten(const Vec& packed) {
  Index at = 0;
  take(packed, at, amplitude.w1);
  take(packed, at, amplitude.b1);
  take_row_major(packed, at, amplitude.w2);
  take(packed, at, amplitude.b2);
  take(packed, at, bank.omegas);
  take(packed, at, bank.phis);
  take(packed, at, residual.w1);
  take(packed, at, residual.b1);
  take(packed, at, residual.w2);
  residual.b2 = packed[at++];
}

Vec Gradients::flatten() const {
  Vec packed(amplitude.w1.size() + amplitude.b1.size() + amplitude.w2.size() +
             amplitude.b2.size() + bank.omegas.size() + bank.phis.size() +
             residual.w1.size() + residual.b1.size() + residual.w2.size() + 1);
  Index at = 0;
  append(packed, at, amplitude.w1);
  append(packed, at, amplitude.b1);
  append_row_major(packed, at, amplitude.w2);
  append(packed, at, amplitude.b2);
  append(packed, at, bank.omegas);
  append(packed, at, bank.phis);
  append(packed, at, residual.w1);
  append(packed, at, residual.b1);
  append(packed, at, residual.w2);
  packed[at++] = residual.b2;
  return packed;
}

FnnModel init_model(Index n_samples, const FnnConfig& config) {
  if (n_samples < 16) {
    throw InputError("init_model: need at least 16 samples");
  }
  if (config.unit_cap < 2) {
    throw InputError("init_model: unit cap must be at least 2");
  }

  FnnModel m;
  m.config = config;
  m.n_train = n_samples;
  m.units = std::min(2 * (n_samples / 2), config.unit_cap);

  m.bank.omegas.resize(m.units);
  m.bank.phis.resize(m.units);
  for (Index u = 0; u < m.units; ++u) {
    const auto k = static_cast<double>(u / 2 + 1);
    m.bank.omegas[u] = kTwoPi * k;
    m.bank.phis[u] = (u % 2 == 1) ? kPi / 2.0 : 0.0;
  }

  Rng rng(config.seed);
  auto draw_vec = [&rng](Index size) {
    Vec v(size);
    for (Index i = 0; i < size; ++i) v[i] = rng.uniform(-kInitScale, kInitScale);
    return v;
  };
  auto draw_mat = [&rng](Index rows, Index cols) {
    Mat w(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) w(r, c) = rng.uniform(-kInitScale, kInitScale);
    }
    return w;
  };

  m.amplitude.w1 = draw_vec(config.hidden_amp);
  m.amplitude.b1 = draw_vec(config.hidden_amp);
  m.amplitude.w2 = draw_mat(m.units, config.hidden_amp);
  m.amplitude.b2 = draw_vec(m.units);
  m.residual.w1 = draw_vec(config.hidden_res);
  m.residual.b1 = draw_vec(config.hidden_res);
  m.residual.w2 = draw_vec(config.hidden_res);
  m.residual.b2 = rng.uniform(-kInitScale, kInitScale);
  return m;
}

AmUnitSeries forward(const FnnModel& model, const Vec& times) {
  ForwardTrace t = trace_forward(model, times, /*want_cos=*/false);
  AmUnitSeries s;
  s.amplitudes = std::move(t.amplitudes);
  s.am_signals = s.amplitudes.cwiseProduct(t.sin_theta);
  s.residual = std::move(t.residual);
  s.output = std::move(t.output);
  return s;
}

FnnModel load_dft_oracle(FnnModel model, const Signal& grid_signal) {
  const Index n = grid_signal.size();
  if (model.units < 2 * (n / 2)) {
    throw InputError("load_dft_oracle: unit cap binds, cannot hold all harmonics");
  }
  for (Index i = 0; i < n; ++i) {
    const double expected = static_cast<double>(i) / static_cast<double>(n);
    if (std::abs(grid_signal.times[i] - expected) > 1e-9) {
      throw InputError("load_dft_oracle: times are not the half-open grid i/N");
    }
  }

  const HarmonicBasis basis = real_harmonic_decomposition(grid_signal.values);

  model.amplitude.w1.setZero();
  model.amplitude.b1.setZero();
  model.amplitude.w2.setZero();
  model.amplitude.b2.setZero();
  for (const auto& e : basis.entries) {
    const Index sine_unit = 2 * (static_cast<Index>(e.k) - 1);
    model.amplitude.b2[sine_unit] = e.sin_coef;
    model.amplitude.b2[sine_unit + 1] = e.cos_coef;
  }
  if (basis.nyquist_coef) {
    model.amplitude.b2[2 * (n / 2) - 1] = *basis.nyquist_coef;
  }

  model.residual.w1.setZero();
  model.residual.b1.setZero();
  model.residual.w2.setZero();
  model.residual.b2 = basis.constant;
  return model;
}

std::pair<double, Gradients> loss_and_gradients(const FnnModel& model,
                                                const Signal& signal,
                                                double lambda) {
  const Index n = signal.size();
  const ForwardTrace t = trace_forward(model, signal.times, /*want_cos=*/true);

  const Vec err = t.output - signal.values;
  const double data_loss = err.squaredNorm() / static_cast<double>(n);
  const double loss = data_loss + lambda * l1_norm(model.amplitude);

  const Eigen::RowVectorXd g = (2.0 / static_cast<double>(n)) * err.transpose();
  const Eigen::RowVectorXd tr = signal.times.transpose();

  Gradients grad;

  // through the AM products
  const Mat d_amp = t.sin_theta.array().rowwise() * g.array();
  const Mat d_theta =
      (t.amplitudes.array().rowwise() * g.array()) * t.cos_theta.array();
  grad.bank.omegas.noalias() = d_theta * signal.times;
  grad.bank.phis = d_theta.rowwise().sum();

  // amplitude sub-network
  grad.amplitude.b2 = d_amp.rowwise().sum();
  grad.amplitude.w2.noalias() = d_amp * t.a1.transpose();
  Mat d_z1 = model.amplitude.w2.transpose() * d_amp;
  d_z1.array() *= (t.z1.array() > 0.0).cast<double>();
  grad.amplitude.b1 = d_z1.rowwise().sum();
  grad.amplitude.w1.noalias() = d_z1 * signal.times;

  // residual sub-network; its output gradient is g itself
  grad.residual.b2 = g.sum();
  grad.residual.w2.noalias() = t.ar * g.transpose();
  Mat d_zr = model.residual.w2 * g;
  d_zr.array() *= (t.zr.array() > 0.0).cast<double>();
  grad.residual.b1 = d_zr.rowwise().sum();
  grad.residual.w1.noalias() = d_zr * signal.times;

  if (lambda > 0.0) {
    grad.amplitude.w1.array() += lambda * sign_of(model.amplitude.w1);
    grad.amplitude.b1.array() += lambda * sign_of(model.amplitude.b1);
    grad.amplitude.w2.array() += lambda * sign_of(model.amplitude.w2);
    grad.amplitude.b2.array() += lambda * sign_of(model.amplitude.b2);
  }

  return {loss, std::move(grad)};
}

Vec unit_energies(const FnnModel& model, const Vec& times) {
  const AmUnitSeries s = forward(model, times);
  return s.amplitudes.rowwise().squaredNorm() / static_cast<double>(times.size());
}

Signal extrapolate(const FnnModel& model, const NormParams& norm, double horizon,
                   double step) {
  if (horizon <= 0.0) throw InputError("extrapolate: horizon must be positive");
  if (step <= 0.0) throw InputError("extrapolate: step must be positive");

  const double span = norm.t_max - norm.t_min;
  const double step_norm = step / span;
  const auto count = static_cast<Index>(std::floor(horizon / step * (1.0 + 1e-12))) + 1;

  Vec taus(count);
  for (Index j = 0; j < count; ++j) taus[j] = 1.0 + static_cast<double>(j) * step_norm;

  const AmUnitSeries s = forward(model, taus);

  Signal out;
  out.times.resize(count);
  for (Index j = 0; j < count; ++j) out.times[j] = norm.denorm_time(taus[j]);
  out.values = denormalize(s.output, norm);
  return out;
}

void save_model(const FnnModel& model, std::ostream& out) {
  using nlohmann::json;
  auto vec = [](const Vec& v) { return std::vector<double>(v.begin(), v.end()); };
  auto mat_row_major = [](const Mat& m) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
    }
    return flat;
  };

  const json doc = {
      {"format", kCheckpointFormat},
      {"version", kCheckpointVersion},
      {"units", model.units},
      {"n_train", model.n_train},
      {"hidden_amp", model.config.hidden_amp},
      {"hidden_res", model.config.hidden_res},
      {"unit_cap", model.config.unit_cap},
      {"seed", model.config.seed},
      {"norm",
       {{"t_min", model.norm.t_min},
        {"t_max", model.norm.t_max},
        {"x_min", model.norm.x_min},
        {"x_max", model.norm.x_max}}},
      {"amplitude",
       {{"w1", vec(model.amplitude.w1)},
        {"b1", vec(model.amplitude.b1)},
        {"w2", mat_row_major(model.amplitude.w2)},
        {"b2", vec(model.amplitude.b2)}}},
      {"bank", {{"omega", vec(model.bank.omegas)}, {"phi", vec(model.bank.phis)}}},
      {"residual",
       {{"w1", vec(model.residual.w1)},
        {"b1", vec(model.residual.b1)},
        {"w2", vec(model.residual.w2)},
        {"b2", model.residual.b2}}},
  };
  out << doc.dump(2) << '\n';
}

FnnModel load_model(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint: malformed document: ") + e.what());
  }

  try {
    if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat) {
      throw CheckpointError("checkpoint: not a model checkpoint document");
    }
    if (doc.at("version").get<int>() != kCheckpointVersion) {
      throw CheckpointError("checkpoint: unsupported version " +
                            doc.at("version").dump());
    }

    auto vec = [](const json& j) {
      const auto v = j.get<std::vector<double>>();
      return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size())).eval();
    };

    FnnModel m;
    m.units = doc.at("units").get<Index>();
    m.n_train = doc.at("n_train").get<Index>();
    m.config.hidden_amp = doc.at("hidden_amp").get<Index>();
    m.config.hidden_res = doc.at("hidden_res").get<Index>();
    m.config.unit_cap = doc.at("unit_cap").get<Index>();
    m.config.seed = doc.at("seed").get<std::uint64_t>();

    const auto& jn = doc.at("norm");
    m.norm.t_min = jn.at("t_min").get<double>();
    m.norm.t_max = jn.at("t_max").get<double>();
    m.norm.x_min = jn.at("x_min").get<double>();
    m.norm.x_max = jn.at("x_max").get<double>();

    const auto& ja = doc.at("amplitude");
    m.amplitude.w1 = vec(ja.at("w1"));
    m.amplitude.b1 = vec(ja.at("b1"));
    m.amplitude.b2 = vec(ja.at("b2"));
    const auto w2 = ja.at("w2").get<std::vector<double>>();
    if (static_cast<Index>(w2.size()) != m.units * m.config.hidden_amp ||
        m.amplitude.w1.size() != m.config.hidden_amp ||
        m.amplitude.b1.size() != m.config.hidden_amp ||
        m.amplitude.b2.size() != m.units) {
      throw CheckpointError("checkpoint: parameter shapes disagree with header");
    }
    m.amplitude.w2.resize(m.units, m.config.hidden_amp);
    for (Index r = 0; r < m.units; ++r) {
      for (Index c = 0; c < m.config.hidden_amp; ++c) {
        m.amplitude.w2(r, c) = w2[static_cast<std::size_t>(r * m.config.hidden_amp + c)];
      }
    }

    const auto& jb = doc.at("bank");
    m.bank.omegas = vec(jb.at("omega"));
    m.bank.phis = vec(jb.at("phi"));
    if (m.bank.omegas.size() != m.units || m.bank.phis.size() != m.units) {
      throw CheckpointError("checkpoint: bank size disagrees with header");
    }

    const auto& jr = doc.at("residual");
    m.residual.w1 = vec(jr.at("w1"));
    m.residual.b1 = vec(jr.at("b1"));
    m.residual.w2 = vec(jr.at("w2"));
    m.residual.b2 = jr.at("b2").get<double>();
    if (m.residual.w1.size() != m.config.hidden_res ||
        m.residual.b1.size() != m.config.hidden_res ||
        m.residual.w2.size() != m.config.hidden_res) {
      throw CheckpointError("checkpoint: residual size disagrees with header");
    }
    return m;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint: missing or bad field: ") + e.what());
  }
}

}  // namespace nmd
