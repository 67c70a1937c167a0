#include "quadadapt/telemetry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "quadadapt/errors.hpp"

namespace quadadapt {

namespace {

// Visits every scalar of a record in column order. F receives (name, ref).
template <typename Record, typename F>
void visit_fields(Record& r, F&& f) {
  auto vec = [&](const char* base, auto& v) {
    for (int i = 0; i < v.size(); ++i) f(std::string(base) + "_" + std::to_string(i + 1), v(i));
  };
  f("t", r.t);
  vec("x", r.x);
  vec("v", r.v);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      f("R_" + std::to_string(i + 1) + std::to_string(j + 1), r.R(i, j));
    }
  }
  vec("Omega", r.Omega);
  vec("xd", r.x_d);
  vec("ex", r.e_x);
  vec("ev", r.e_v);
  vec("eR", r.e_R);
  vec("eOmega", r.e_Omega);
  f("Psi", r.psi);
  f("f", r.thrust);
  vec("M", r.moment);
  vec("T", r.rotor_thrusts);
  vec("w", r.rotor_speeds);
  for (int j = 0; j < 4; ++j) f("sat_" + std::to_string(j + 1), r.saturated[j]);
  vec("d1bar", r.delta1_bar);
  vec("d2bar", r.delta2_bar);
  vec("d1", r.delta1);
  vec("d2", r.delta2);
  f("W1_norm", r.W1_norm);
  f("V1_norm", r.V1_norm);
  f("W2_norm", r.W2_norm);
  f("V2_norm", r.V2_norm);
  f("V1", r.V1);
  f("V2", r.V2);
  f("V", r.V);
  f("weighted_norm", r.weighted_norm);
  vec("vw", r.wind);
}

void put(std::string& line, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  line.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> out;
    TelemetryRecord r;
    visit_fields(r, [&](const std::string& name, auto&) { out.push_back(name); });
    return out;
  }();
  return cols;
}

void write_csv(const std::vector<TelemetryRecord>& records, std::ostream& os, int decimate) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  std::string line;
  for (std::size_t k = 0; k < records.size(); k += static_cast<std::size_t>(decimate)) {
    line.clear();
    bool first = true;
    visit_fields(records[k], [&](const std::string&, const auto& value) {
      if (!first) line += ',';
      first = false;
      if constexpr (std::is_same_v<std::decay_t<decltype(value)>, bool>) {
        line += value ? '1' : '0';
      } else {
        put(line, value);
      }
    });
    line += '\n';
    os << line;
  }
}

void write_csv(const std::vector<TelemetryRecord>& records, const std::string& path,
               int decimate) {
  std::ofstream os(path);
  if (!os) throw IOError("cannot open '" + path + "' for writing");
  write_csv(records, os, decimate);
  if (!os) throw IOError("write to '" + path + "' failed");
}

std::vector<TelemetryRecord> read_csv(std::istream& is) {
  const auto& cols = csv_columns();
  std::string line;
  if (!std::getline(is, line)) throw ParseError("missing CSV header", 1, "");
  {
    std::istringstream hs(line);
    std::string name;
    std::size_t i = 0;
    while (std::getline(hs, name, ',')) {
      if (i >= cols.size() || name != cols[i]) throw ParseError("unexpected CSV column", 1, name);
      ++i;
    }
    if (i != cols.size()) throw ParseError("CSV header is missing columns", 1, "");
  }
  std::vector<TelemetryRecord> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
    if (values.size() != cols.size()) {
      throw ParseError("row has " + std::to_string(values.size()) + " cells", line_no, "");
    }
    TelemetryRecord r;
    std::size_t i = 0;
    visit_fields(r, [&](const std::string&, auto& value) {
      if constexpr (std::is_same_v<std::decay_t<decltype(value)>, bool>) {
        value = values[i++] != 0.0;
      } else {
        value = values[i++];
      }
    });
    out.push_back(r);
  }
  return out;
}

void write_weights(const nn::NNWeights& nn1, const nn::NNWeights& nn2, std::ostream& os) {
  os << "net,matrix,row,col,value\n";
  std::string line;
  auto dump = [&](int net, const char* name, const MatrixX& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        line = std::to_string(net) + "," + name + "," + std::to_string(i) + "," +
               std::to_string(j) + ",";
        put(line, M(i, j));
        os << line << '\n';
      }
    }
  };
  dump(1, "W", nn1.W);
  dump(1, "V", nn1.V);
  dump(2, "W", nn2.W);
  dump(2, "V", nn2.V);
}

void write_weights(const nn::NNWeights& nn1, const nn::NNWeights& nn2, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IOError("cannot open '" + path + "' for writing");
  write_weights(nn1, nn2, os);
  if (!os) throw IOError("write to '" + path + "' failed");
}

Summary summarize(const std::vector<TelemetryRecord>& rec, double band) {
  Summary s;
  s.records = rec.size();
  s.settling_band = band;
  if (rec.empty()) return s;
  s.duration = rec.back().t - rec.front().t;

  const std::size_t n = rec.size();
  const std::size_t tail_start = n - std::max<std::size_t>(1, n / 5);
  double ex2 = 0.0, eR2 = 0.0, ex2_tail = 0.0, eR2_tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const TelemetryRecord& r = rec[k];
    const double ex = r.e_x.norm(), eR = r.e_R.norm();
    ex2 += ex * ex;
    eR2 += eR * eR;
    s.e_x_max = std::max(s.e_x_max, ex);
    s.e_R_max = std::max(s.e_R_max, eR);
    if (k >= tail_start) {
      ex2_tail += ex * ex;
      eR2_tail += eR * eR;
      s.e_x_max_tail = std::max(s.e_x_max_tail, ex);
      s.e_R_max_tail = std::max(s.e_R_max_tail, eR);
    }
    s.W1_max = std::max(s.W1_max, r.W1_norm);
    s.V1_max = std::max(s.V1_max, r.V1_norm);
    s.W2_max = std::max(s.W2_max, r.W2_norm);
    s.V2_max = std::max(s.V2_max, r.V2_norm);
    bool any = false;
    for (int j = 0; j < 4; ++j) {
      if (r.saturated[j]) {
        ++s.saturation_counts[j];
        any = true;
      }
    }
    if (any) ++s.saturated_steps;
  }
  const double tail_n = static_cast<double>(n - tail_start);
  s.e_x_rms = std::sqrt(ex2 / n);
  s.e_R_rms = std::sqrt(eR2 / n);
  s.e_x_rms_tail = std::sqrt(ex2_tail / tail_n);
  s.e_R_rms_tail = std::sqrt(eR2_tail / tail_n);
  s.final_V = rec.back().V;

  s.settling_time = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = n; k-- > 0;) {
    if (rec[k].e_x.norm() > band) break;
    s.settling_time = rec[k].t;
  }
  return s;
}

void write_summary(std::ostream& os, const Summary& s, const std::string& p) {
  const auto old_precision = os.precision(12);
  os << p << "records: " << s.records << '\n'
     << p << "duration: " << s.duration << '\n'
     << p << "e_x_rms: " << s.e_x_rms << '\n'
     << p << "e_x_max: " << s.e_x_max << '\n'
     << p << "e_R_rms: " << s.e_R_rms << '\n'
     << p << "e_R_max: " << s.e_R_max << '\n'
     << p << "e_x_rms_tail: " << s.e_x_rms_tail << '\n'
     << p << "e_x_max_tail: " << s.e_x_max_tail << '\n'
     << p << "e_R_rms_tail: " << s.e_R_rms_tail << '\n'
     << p << "e_R_max_tail: " << s.e_R_max_tail << '\n'
     << p << "settling_band: " << s.settling_band << '\n'
     << p << "settling_time: " << s.settling_time << '\n'
     << p << "W1_max: " << s.W1_max << '\n'
     << p << "V1_max: " << s.V1_max << '\n'
     << p << "W2_max: " << s.W2_max << '\n'
     << p << "V2_max: " << s.V2_max << '\n'
     << p << "final_V: " << s.final_V << '\n'
     << p << "saturated_steps: " << s.saturated_steps << '\n';
  for (int j = 0; j < 4; ++j) {
    os << p << "saturation_count_" << j + 1 << ": " << s.saturation_counts[j] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace quadadapt
