#include "nmd/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "nmd/errors.hpp"

namespace nmd {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_signal_csv(std::ostream& out, const Signal& s) {
  out << "t,value\n";
  for (Index i = 0; i < s.size(); ++i) {
    out << format_double(s.times[i]) << ',' << format_double(s.values[i]) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows) {
  out << "frequency,magnitude\n";
  for (const auto& r : rows) {
    out << format_double(r.frequency) << ',' << format_double(r.magnitude) << '\n';
  }
}

void write_loss_csv(std::ostream& out, const std::vector<double>& loss_history) {
  out << "epoch,loss\n";
  for (std::size_t i = 0; i < loss_history.size(); ++i) {
    out << (i + 1) << ',' << format_double(loss_history[i]) << '\n';
  }
}

void write_decomposition_csv(std::ostream& out, const Vec& times,
                             const std::vector<Vec>& imfs, const Vec& residual,
                             const Vec& reconstruction, const Vec& original) {
  out << 't';
  for (std::size_t k = 0; k < imfs.size(); ++k) out << ",imf" << (k + 1);
  out << ",residual,reconstruction,original\n";
  for (Index i = 0; i < times.size(); ++i) {
    out << format_double(times[i]);
    for (const auto& imf : imfs) out << ',' << format_double(imf[i]);
    out << ',' << format_double(residual[i]) << ',' << format_double(reconstruction[i])
        << ',' << format_double(original[i]) << '\n';
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_field(const std::string& field, long line_no) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InputError("decomposition csv: bad number at line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

bool looks_like_decomposition_header(const std::string& first_line) {
  return first_line.rfind("t,imf1,", 0) == 0;
}

DecompositionTable read_decomposition_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError("decomposition csv: empty stream");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  if (header.size() < 5 || header.front() != "t" ||
      header[header.size() - 3] != "residual" ||
      header[header.size() - 2] != "reconstruction" || header.back() != "original") {
    throw InputError("decomposition csv: unexpected header '" + line + "'");
  }
  const std::size_t n_imfs = header.size() - 4;

  std::vector<std::vector<double>> columns(header.size());
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw InputError("decomposition csv: wrong column count at line " +
                       std::to_string(line_no));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      columns[c].push_back(parse_field(fields[c], line_no));
    }
  }
  if (columns[0].empty()) {
    throw InputError("decomposition csv: no data rows");
  }

  auto to_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size())).eval();
  };

  DecompositionTable table;
  table.times = to_vec(columns[0]);
  for (std::size_t k = 0; k < n_imfs; ++k) table.imfs.push_back(to_vec(columns[1 + k]));
  table.residual = to_vec(columns[1 + n_imfs]);
  table.reconstruction = to_vec(columns[2 + n_imfs]);
  table.original = to_vec(columns[3 + n_imfs]);
  return table;
}

void write_metrics_json(std::ostream& out, const MetricsReport& report,
                        const std::vector<double>& dominant_frequency) {
  using nlohmann::json;
  json corr = json::array();
  for (const double c : report.corr) {
    if (std::isnan(c)) {
      corr.push_back(nullptr);
    } else {
      corr.push_back(c);
    }
  }
  const json doc = {
      {"io", report.io},
      {"mae", report.mae},
      {"pe", report.pe},
      {"corr", corr},
      {"dominant_frequency", dominant_frequency},
  };
  out << doc.dump(2) << '\n';
}

MetricsDocument read_metrics_json(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
    MetricsDocument m;
    m.report.io = doc.at("io").get<double>();
    m.report.mae = doc.at("mae").get<double>();
    m.report.pe = doc.at("pe").get<std::vector<double>>();
    for (const auto& c : doc.at("corr")) {
      m.report.corr.push_back(c.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : c.get<double>());
    }
    m.dominant_frequency = doc.at("dominant_frequency").get<std::vector<double>>();
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("metrics json: ") + e.what());
  }
}

void write_decomposition_meta_json(std::ostream& out, const DecompositionMeta& meta) {
  using nlohmann::json;
  json dropped = json::array();
  for (const auto& [lo, hi] : meta.dropped_bands) dropped.push_back({lo, hi});
  json echo = json::object();
  for (const auto& [key, value] : meta.config_echo) echo[key] = value;
  const json doc = {
      {"band_edges", meta.band_edges},
      {"dominant_frequency", meta.dominant_frequency},
      {"dropped_bands", dropped},
      {"nyquist", meta.nyquist},
      {"config", echo},
  };
  out << doc.dump(2) << '\n';
}

}  // namespace nmd
