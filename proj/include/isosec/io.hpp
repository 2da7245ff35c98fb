#pragma once

#include "zonoid.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace isosec {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& cell, int line) {
  const std::string s = strip(cell);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (s.empty() || pos != s.size() || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line) + ": not a finite number: '" + s + "'");
  }
  return v;
}

// Rows of a CSV with the given header; blank lines are skipped.
inline std::vector<std::vector<double>> read_table(std::istream& in, const std::string& header) {
  std::string line;
  int n = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  const std::size_t cols = split_csv(header).size();
  while (std::getline(in, line)) {
    ++n;
    const std::string s = strip(line);
    if (s.empty()) continue;
    if (!have_header) {
      if (s != header) throw InputError("line " + std::to_string(n) + ": expected header '" + header + "'");
      have_header = true;
      continue;
    }
    const auto cells = split_csv(s);
    if (cells.size() != cols) {
      throw InputError("line " + std::to_string(n) + ": expected " + std::to_string(cols) + " columns, got " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, n));
    rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError("empty CSV: expected header '" + header + "'");
  return rows;
}

}  // namespace detail

// Grid dump: theta,phi,weight,value in node order.
inline void write_grid_csv(std::ostream& out, const SphericalGrid& grid, std::span<const double> values) {
  require(values.size() == grid.size(), "write_grid_csv: value count does not match grid");
  out << "theta,phi,weight,value\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid.rings()[grid.ring_of(i)].theta) << ',' << format_double(grid.phi(grid.longitude_of(i)))
        << ',' << format_double(grid.weight(i)) << ',' << format_double(values[i]) << '\n';
  }
}

inline void write_grid_csv(std::ostream& out, const SphericalFunction& f) { write_grid_csv(out, *f.grid(), f.values()); }

// Reads a grid dump and checks it against `grid` node by node.
inline SphericalFunction read_grid_csv(std::istream& in, GridPtr grid) {
  std::string line;
  const std::string header = "theta,phi,weight,value";
  std::vector<double> values;
  int n = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++n;
    const std::string s = detail::strip(line);
    if (s.empty()) continue;
    if (!have_header) {
      if (s != header) throw InputError("line " + std::to_string(n) + ": expected header '" + header + "'");
      have_header = true;
      continue;
    }
    const auto cells = detail::split_csv(s);
    if (cells.size() != 4) {
      throw InputError("line " + std::to_string(n) + ": expected 4 columns, got " + std::to_string(cells.size()));
    }
    const std::size_t i = values.size();
    if (i >= grid->size()) throw InputError("line " + std::to_string(n) + ": more rows than grid nodes");
    const double theta = detail::parse_number(cells[0], n), phi = detail::parse_number(cells[1], n);
    detail::parse_number(cells[2], n);
    if (std::abs(theta - grid->rings()[grid->ring_of(i)].theta) > 1e-9 ||
        std::abs(phi - grid->phi(grid->longitude_of(i))) > 1e-9) {
      throw InputError("line " + std::to_string(n) + ": node does not match the configured grid");
    }
    values.push_back(detail::parse_number(cells[3], n));
  }
  if (!have_header) throw InputError("empty CSV: expected header '" + header + "'");
  if (values.size() != grid->size()) {
    throw InputError("line " + std::to_string(n) + ": expected " + std::to_string(grid->size()) + " rows, got " +
                     std::to_string(values.size()));
  }
  return SphericalFunction::from_values(std::move(grid), std::move(values));
}

inline void write_coeffs_csv(std::ostream& out, const HarmonicCoeffs& c) {
  out << "l,m,value\n";
  for (int l = 0; l <= c.band(); ++l)
    for (int m = -l; m <= l; ++m) out << l << ',' << m << ',' << format_double(c(l, m)) << '\n';
}

inline HarmonicCoeffs read_coeffs_csv(std::istream& in) {
  const auto rows = detail::read_table(in, "l,m,value");
  int L = 0;
  for (const auto& r : rows) L = std::max(L, static_cast<int>(r[0]));
  HarmonicCoeffs c(L);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int l = static_cast<int>(rows[k][0]), m = static_cast<int>(rows[k][1]);
    if (l != rows[k][0] || m != rows[k][1] || l < 0 || std::abs(m) > l) {
      throw InputError("row " + std::to_string(k + 1) + ": invalid degree/order");
    }
    c(l, m) = rows[k][2];
  }
  return c;
}

inline void write_multipliers_csv(std::ostream& out, const MultiplierTable& t) {
  out << "l,lambda\n";
  for (std::size_t l = 0; l < t.lambda.size(); ++l) out << l << ',' << format_double(t.lambda[l]) << '\n';
}

inline void write_support_csv(std::ostream& out, const SupportFunction& h, const SphericalGrid& grid) {
  out << "theta,phi,h\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid.rings()[grid.ring_of(i)].theta) << ',' << format_double(grid.phi(grid.longitude_of(i)))
        << ',' << format_double(h(grid.node(i))) << '\n';
  }
}

inline void write_zonal_measure_csv(std::ostream& out, const ZonalMeasure& mu) {
  out << "t_lo,t_hi,mass\n";
  for (const auto& b : mu.bands) out << format_double(b.t_lo) << ',' << format_double(b.t_hi) << ',' << format_double(b.mass) << '\n';
  out << "atom_t,atom_mass\n";
  for (const auto& a : mu.atoms) out << format_double(a.t) << ',' << format_double(a.mass) << '\n';
}

inline nlohmann::json to_json(const IsotropyReport& r) {
  return {{"u", {r.u.x(), r.u.y(), r.u.z()}},
          {"T", {r.T(0, 0), r.T(0, 1), r.T(1, 1)}},
          {"trace", r.trace},
          {"deviation", r.deviation}};
}

}  // namespace isosec
