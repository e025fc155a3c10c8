#include "halfline/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace halfline {

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (trim(field.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidInput,
              "malformed number '" + field + "' on line " + std::to_string(line));
}

// Fritsch-Carlson end slope (three-point, shape preserving).
double end_slope(double h0, double h1, double d0, double d1) {
  double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (s * d0 <= 0) return 0.0;
  if (d0 * d1 < 0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
  return s;
}

}  // namespace

void write_sampled_csv(const std::filesystem::path& path, const SampledFunction& f) {
  auto out = open_for_writing(path);
  out << "x,value\n";
  for (Eigen::Index i = 0; i < f.size(); ++i) out << f.grid().node(i) << ',' << f[i] << '\n';
}

void write_columns_csv(const std::filesystem::path& path, const Eigen::ArrayXd& x,
                       const std::vector<std::pair<std::string, Eigen::ArrayXd>>& columns) {
  auto out = open_for_writing(path);
  out << 'x';
  for (const auto& [name, col] : columns) {
    if (col.size() != x.size()) {
      throw Error(ErrorKind::Configuration, "column " + name + " has the wrong length");
    }
    out << ',' << name;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out << x[i];
    for (const auto& [name, col] : columns) out << ',' << col[i];
    out << '\n';
  }
}

SampleTable read_sample_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  SampleTable table;
  std::string line;
  std::size_t number = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::InvalidInput, "expected two columns on line " + std::to_string(number));
    }
    table.x.push_back(parse_number(trim(line.substr(0, comma)), number));
    table.value.push_back(parse_number(trim(line.substr(comma + 1)), number));
  }
  return table;
}

SampledFunction monotone_cubic_resample(const SampleTable& table, const Grid& grid,
                                        double outside) {
  const std::size_t m = table.x.size();
  if (m < 2 || table.value.size() != m) {
    throw Error(ErrorKind::GridTooCoarse, "interpolation needs at least two samples");
  }
  std::vector<double> h(m - 1), delta(m - 1), slope(m, 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    h[k] = table.x[k + 1] - table.x[k];
    if (!(h[k] > 0)) throw Error(ErrorKind::InvalidInput, "sample positions must increase strictly");
    delta[k] = (table.value[k + 1] - table.value[k]) / h[k];
  }
  if (m == 2) {
    slope[0] = slope[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < m; ++k) {
      if (delta[k - 1] * delta[k] <= 0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slope[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    slope[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    slope[m - 1] = end_slope(h[m - 2], h[m - 3 < m ? m - 3 : 0], delta[m - 2], delta[m - 3]);
  }

  Eigen::ArrayXd v(grid.size());
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double t = grid.node(i);
    if (t < table.x.front() || t > table.x.back()) {
      v[i] = outside;
      continue;
    }
    while (k + 2 < m && t >= table.x[k + 1]) ++k;
    const double s = (t - table.x[k]) / h[k];
    if (s == 0.0) {
      v[i] = table.value[k];
      continue;
    }
    if (s == 1.0) {
      v[i] = table.value[k + 1];
      continue;
    }
    const double s2 = s * s;
    const double s3 = s2 * s;
    v[i] = (2 * s3 - 3 * s2 + 1) * table.value[k] + (s3 - 2 * s2 + s) * h[k] * slope[k] +
           (-2 * s3 + 3 * s2) * table.value[k + 1] + (s3 - s2) * h[k] * slope[k + 1];
  }
  return SampledFunction(grid, std::move(v));
}

}  // namespace halfline
