#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hwk/io.hpp"
#include "hwk/models.hpp"

namespace hwk {

struct ConvergenceRow {
  std::size_t n = 0;
  double l1_error = 0.0;
  std::optional<double> order;  ///< only against the previous row when n doubled
  double tv_error = 0.0;
};

struct ConvergenceReport {
  Profile profile = Profile::sine;
  SchemeKind scheme = SchemeKind::sl_hweno5;
  std::vector<ConvergenceRow> rows;
  std::optional<std::string> failure;  ///< set when the sweep aborted

  void write_csv(std::ostream& os) const {
    os << "n,l1_error,order,tv_error\n" << std::setprecision(17);
    for (const auto& r : rows) {
      os << r.n << ',' << r.l1_error << ',';
      if (r.order) os << *r.order;
      os << ',' << r.tv_error << '\n';
    }
  }

  void write_text(std::ostream& os) const {
    os << "profile " << to_string(profile) << ", scheme " << to_string(scheme) << '\n';
    os << std::setw(8) << "n" << std::setw(14) << "L1 error" << std::setw(9) << "order" << std::setw(14) << "TV error"
       << '\n';
    for (const auto& r : rows) {
      std::ostringstream order;
      if (r.order) order << std::fixed << std::setprecision(2) << *r.order;
      os << std::setw(8) << r.n << std::setw(14) << std::scientific << std::setprecision(3) << r.l1_error
         << std::setw(9) << order.str() << std::setw(14) << r.tv_error << std::defaultfloat << '\n';
    }
    if (failure) os << "aborted: " << *failure << '\n';
  }
};

/// r = log2(e_n / e_{2n}) between consecutive doubled resolutions.
inline void fill_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].order.reset();
    if (k > 0 && rows[k].n == 2 * rows[k - 1].n && rows[k].l1_error > 0.0 && rows[k - 1].l1_error > 0.0)
      rows[k].order = std::log2(rows[k - 1].l1_error / rows[k].l1_error);
  }
}

inline ConvergenceReport convergence_harness(const Transport1DSetup& setup, SchemeKind scheme,
                                             const std::vector<std::size_t>& ns, const SchemeConfig& cfg) {
  ConvergenceReport rep;
  rep.profile = setup.profile;
  rep.scheme = scheme;
  for (std::size_t n : ns) {
    try {
      const Transport1DResult r = run_transport1d(setup, scheme, n, cfg);
      rep.rows.push_back({n, r.l1_error, std::nullopt, r.tv_error});
    } catch (const std::exception& e) {
      rep.failure = "n = " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  fill_orders(rep.rows);
  return rep;
}

// ---------------------------------------------------------------------------
// Time-series comparison

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv_table(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty CSV");
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw IoError("non-numeric CSV cell on line " + std::to_string(lineno));
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw IoError("wrong column count on CSV line " + std::to_string(lineno));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable load_csv_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_csv_table(is);
}

struct CompareResult {
  bool equal = true;
  double max_abs_diff = 0.0;
  std::string message;
};

/// Cells match when |a - b| <= atol + rtol * max(|a|, |b|).
inline CompareResult compare_tables(const CsvTable& a, const CsvTable& b, double rtol, double atol) {
  CompareResult out;
  if (a.header != b.header) return {false, 0.0, "headers differ"};
  if (a.rows.size() != b.rows.size())
    return {false, 0.0, "row counts differ: " + std::to_string(a.rows.size()) + " vs " + std::to_string(b.rows.size())};
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    for (std::size_t c = 0; c < a.header.size(); ++c) {
      const double x = a.rows[r][c], y = b.rows[r][c];
      const double d = std::abs(x - y);
      out.max_abs_diff = std::max(out.max_abs_diff, d);
      const bool ok = d <= atol + rtol * std::max(std::abs(x), std::abs(y)) || (std::isnan(x) && std::isnan(y));
      if (!ok && out.equal) {
        out.equal = false;
        std::ostringstream msg;
        msg << std::setprecision(17) << "first mismatch at row " << r + 1 << ", column " << a.header[c] << ": " << x
            << " vs " << y;
        out.message = msg.str();
      }
    }
  if (out.equal) out.message = "match";
  return out;
}

}  // namespace hwk
