#include "nmd/signal.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <vector>

#include "nmd/errors.hpp"
#include "nmd/rng.hpp"

namespace nmd {

namespace {

// t_i = i/n, computed per element; LinSpaced would accumulate step rounding.
Vec half_open_grid(Index n) {
  Vec t(n);
  for (Index i = 0; i < n; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  return t;
}

bool parse_double(std::string_view field, double& out) {
  // trim surrounding whitespace
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
    field.remove_prefix(1);
  }
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
    field.remove_suffix(1);
  }
  if (field.empty()) return false;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

void validate_signal(const Signal& s) {
  if (s.times.size() != s.values.size()) {
    throw InputError("signal: times and values differ in length");
  }
  if (s.size() < 4) {
    throw InputError("signal: fewer than 4 samples");
  }
  for (Index i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.values[i]) || !std::isfinite(s.times[i])) {
      throw InputError("signal: non-finite entry at sample " + std::to_string(i));
    }
    if (i > 0 && s.times[i] <= s.times[i - 1]) {
      throw InputError("signal: times not strictly increasing at sample " +
                       std::to_string(i));
    }
  }
}

Signal ingest_csv(std::istream& in, CsvLayout layout) {
  std::vector<double> times;
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  bool first_data_row = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto fields = split_fields(line);
    const std::size_t want = layout == CsvLayout::kValueOnly ? 1 : 2;
    double t = 0.0;
    double x = 0.0;
    bool ok = fields.size() == want;
    if (ok && want == 2) ok = parse_double(fields[0], t);
    if (ok) ok = parse_double(fields.back(), x);

    if (!ok) {
      // a non-numeric first row is a header
      if (first_data_row) {
        first_data_row = false;
        continue;
      }
      throw InputError("csv: malformed row at line " + std::to_string(line_no) +
                       ": '" + line + "'");
    }
    first_data_row = false;
    times.push_back(layout == CsvLayout::kTimeAndValue
                        ? t
                        : static_cast<double>(values.size()));
    values.push_back(x);
  }

  if (values.size() < 4) {
    throw InputError("csv: fewer than 4 data rows");
  }

  Signal s;
  s.times = Eigen::Map<const Vec>(times.data(), static_cast<Index>(times.size()));
  s.values = Eigen::Map<const Vec>(values.data(), static_cast<Index>(values.size()));
  validate_signal(s);
  return s;
}

std::pair<Signal, NormParams> normalize(const Signal& s) {
  validate_signal(s);
  NormParams p;
  p.t_min = s.times.minCoeff();
  p.t_max = s.times.maxCoeff();
  p.x_min = s.values.minCoeff();
  p.x_max = s.values.maxCoeff();
  if (p.x_max == p.x_min) {
    throw InputError("normalize: constant value series");
  }
  Signal out;
  out.times = (s.times.array() - p.t_min) / (p.t_max - p.t_min);
  out.values = (s.values.array() - p.x_min) / (p.x_max - p.x_min);
  return {std::move(out), p};
}

Vec denormalize(const Vec& series, const NormParams& p) {
  return p.x_min + (series.array() * (p.x_max - p.x_min));
}

std::pair<Signal, NormParams> normalize_to_grid(const Signal& s) {
  auto [normed, p] = normalize(s);
  const auto n = static_cast<double>(s.size());
  p.t_max = p.t_min + (s.times.maxCoeff() - p.t_min) * n / (n - 1.0);
  normed.times = half_open_grid(s.size());
  return {std::move(normed), p};
}

double synthetic_value(SyntheticSignal kind, double t) {
  switch (kind) {
    case SyntheticSignal::kXLambda:
      return 4.0 * t * t + std::cos(8.0 * kPi * t) + 2.0 * std::cos(40.0 * kPi * t) +
             std::cos(50.0 * kPi * t + 20.0 * kPi * t * t);
    case SyntheticSignal::kXP:
      return std::cos(4.0 * kPi * t) + 0.25 * std::cos(48.0 * kPi * t) +
             0.0625 * std::cos(200.0 * kPi * t);
    case SyntheticSignal::kX1: {
      const double jump = t <= 0.5 ? std::cos(60.0 * kPi * t)
                                   : std::cos(80.0 * kPi * t - 10.0 * kPi);
      return 6.0 * t * t + std::cos(10.0 * kPi * t + 10.0 * kPi * t * t) + jump;
    }
    case SyntheticSignal::kX2:
      return 1.0 / (1.2 + std::cos(kTwoPi * t)) +
             std::cos(32.0 * kPi * t + 0.2 * std::cos(64.0 * kPi * t)) /
                 (1.5 + std::sin(kTwoPi * t));
  }
  return 0.0;  // unreachable
}

Signal synthesize(SyntheticSignal kind, Index n, double noise_sigma,
                  std::uint64_t seed) {
  if (n < 16) {
    throw InputError("synthesize: need at least 16 samples");
  }
  if (noise_sigma < 0.0) {
    throw InputError("synthesize: negative noise sigma");
  }
  Signal s;
  s.times = half_open_grid(n);
  s.values.resize(n);
  Rng rng(seed);
  for (Index i = 0; i < n; ++i) {
    double v = synthetic_value(kind, s.times[i]);
    if (noise_sigma > 0.0) v += noise_sigma * rng.gaussian();
    s.values[i] = v;
  }
  return s;
}

}  // namespace nmd
