#pragma once

// Flat CSV tables: '#' provenance comments, one header row, shortest
// round-trip decimal floats (std::to_chars), one record per line.

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "cntspin/errors.hpp"
#include "cntspin/experiments.hpp"

namespace cntspin {

struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw DomainError("csv: cannot parse number '" + s + "'");
  return v;
}

inline void write_csv(const CsvTable& table, std::ostream& out) {
  for (const std::string& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw DomainError("csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

inline void emit_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  write_csv(table, out);
  if (!out) throw std::runtime_error("csv: write to '" + path + "' failed");
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header) {
      table.columns = std::move(cells);
      header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) throw DomainError("csv: row width does not match header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) row.push_back(parse_double(c));
    table.rows.push_back(std::move(row));
  }
  if (!header) throw DomainError("csv: missing header row");
  return table;
}

inline CsvTable load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  return read_csv(in);
}

// Experiment tables.

inline CsvTable transfer_table(const TransferSpec& spec, const TransferResult& r) {
  CsvTable t;
  std::ostringstream head;
  head << "transfer model=" << to_string(spec.model) << " fock_levels=" << spec.fock_levels
       << " omega_r_2piMHz=" << format_double(MHz_from_angular(spec.omega_r))
       << " g_2piMHz=" << format_double(MHz_from_angular(spec.g))
       << " gamma_r_2piMHz=" << format_double(MHz_from_angular(spec.gamma_r))
       << " gamma_s_2piMHz=" << format_double(MHz_from_angular(spec.gamma_s))
       << " temperature_K=" << format_double(spec.temperature);
  t.comments.push_back(head.str());
  t.comments.push_back("integrator=rk4 dt_s=" + format_double(r.dt_used) + " steps=" + std::to_string(r.steps) +
                       " t_end_s=" + format_double(r.t_end));
  t.comments.push_back("fidelity=" + format_double(r.fidelity));
  t.columns = {"t_us", "p10", "p01", "re_c", "im_c"};
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    t.rows.push_back({r.t[i] * 1e6, r.p10[i], r.p01[i], r.coherence[i].real(), r.coherence[i].imag()});
  }
  return t;
}

/// Rates are written in units of 2 pi x MHz, temperature in K.
inline double sweep_display_value(SweepParameter p, double v) {
  return p == SweepParameter::temperature ? v : MHz_from_angular(v);
}

inline CsvTable sweep_table(const SweepSpec& spec, const SweepResult& r) {
  CsvTable t;
  const char* unit = spec.parameter == SweepParameter::temperature ? "K" : "2piMHz";
  const TransferSpec& b = spec.base;
  std::ostringstream head;
  head << "sweep parameter=" << to_string(spec.parameter) << " unit=" << unit << " model=" << to_string(b.model)
       << " fock_levels=" << b.fock_levels << " omega_r_2piMHz=" << format_double(MHz_from_angular(b.omega_r))
       << " g_2piMHz=" << format_double(MHz_from_angular(b.g))
       << " gamma_r_2piMHz=" << format_double(MHz_from_angular(b.gamma_r))
       << " gamma_s_2piMHz=" << format_double(MHz_from_angular(b.gamma_s))
       << " temperature_K=" << format_double(b.temperature);
  t.comments.push_back(head.str());
  t.comments.push_back("integrator=rk4 dt_s=" + format_double(r.dt_used) + " steps=" + std::to_string(r.steps) +
                       " (identical for every point)");
  for (const SweepPoint& p : r.points) {
    if (p.failure) {
      t.comments.push_back("failed param_value=" + format_double(sweep_display_value(spec.parameter, p.value)) +
                           ": " + *p.failure);
    }
  }
  t.columns = {"param_value", "error"};
  for (const SweepPoint& p : r.points) t.rows.push_back({sweep_display_value(spec.parameter, p.value), p.error});
  return t;
}

inline CsvTable coupling_table(const CouplingCurveSpec& spec, const CouplingCurve& c) {
  CsvTable t;
  const CouplingParams& p = spec.params;
  std::ostringstream head;
  head << "coupling length_m=" << format_double(p.beam.length()) << " u0_m=" << format_double(p.beam.u0())
       << " beta0=" << format_double(p.beam.beta0()) << " delta_so_eV=" << format_double(p.delta_so)
       << " alpha_per_m=" << format_double(p.dot.alpha());
  t.comments.push_back(head.str());
  t.comments.push_back("max_abs_g_MHz=" + format_double(c.max_abs_g_MHz) +
                       " at zc_over_l=" + format_double(c.argmax_over_l));
  for (const std::string& w : c.warnings) t.comments.push_back("warning: " + w);
  t.columns = {"zc_over_l", "g_MHz"};
  for (std::size_t i = 0; i < c.zc_over_l.size(); ++i) t.rows.push_back({c.zc_over_l[i], c.g_MHz[i]});
  return t;
}

}  // namespace cntspin
