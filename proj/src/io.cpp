#include "qpd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qpd/ccr.hpp"
#include "qpd/su2.hpp"

namespace qpd {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::Io, "cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCategory::Io, "malformed number '" + s + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const std::string& path, const QpdField& field, const std::string& backend_tag) {
  auto out = open_out(path);
  const PhaseGrid& grid = *field.grid;
  out << "# s=" << format_double(field.s) << " backend=" << backend_tag << " grid=" << grid.rows()
      << "x" << grid.cols();
  if (grid.kind == GridKind::Planar) out << " L=" << format_double(grid.half_width);
  out << "\n";
  const bool complex_values = field.values.imag().cwiseAbs().maxCoeff() > 1e-10;
  for (int k = 0; k < grid.size(); ++k) {
    const PhasePoint p = grid.node(k);
    out << format_double(p.a) << "," << format_double(p.b) << ","
        << format_double(field.values(k).real());
    if (complex_values) out << "," << format_double(field.values(k).imag());
    out << "\n";
  }
}

LoadedField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Io, "cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header) || !header.starts_with("#"))
    throw Error(ErrorCategory::Io, "missing field header in '" + path + "'");

  double s = 1.0, half_width = 0.0;
  int rows = 0, cols = 0;
  std::string backend_tag;
  for (const auto& token : split(header.substr(1), ' ')) {
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    if (key == "s") s = parse_double(value);
    if (key == "backend") backend_tag = value;
    if (key == "L") half_width = parse_double(value);
    if (key == "grid") {
      const auto x = value.find('x');
      if (x == std::string::npos) throw Error(ErrorCategory::Io, "malformed grid size");
      rows = std::stoi(value.substr(0, x));
      cols = std::stoi(value.substr(x + 1));
    }
  }
  if (rows <= 0 || cols <= 0 || backend_tag.empty())
    throw Error(ErrorCategory::Io, "incomplete field header in '" + path + "'");

  LoadedField loaded;
  loaded.backend_tag = backend_tag;
  auto grid = std::make_shared<PhaseGrid>();
  if (backend_tag.starts_with("ccr")) {
    if (rows != cols) throw Error(ErrorCategory::Io, "planar grids are square");
    *grid = planar_grid(half_width, rows);
  } else if (backend_tag.starts_with("spin:")) {
    const SpinSystem sys(parse_double(backend_tag.substr(5)));
    *grid = sphere_quadrature(sys, rows, cols);
  } else {
    throw Error(ErrorCategory::Io, "unknown backend tag '" + backend_tag + "'");
  }

  loaded.field.s = s;
  loaded.field.grid = grid;
  loaded.field.values.resize(grid->size());
  std::string line;
  int k = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (k >= grid->size()) throw Error(ErrorCategory::Io, "more rows than grid nodes");
    const auto parts = split(line, ',');
    if (parts.size() != 3 && parts.size() != 4)
      throw Error(ErrorCategory::Io, "expected 3 or 4 columns per row");
    const PhasePoint p = grid->node(k);
    if (std::abs(parse_double(parts[0]) - p.a) > 1e-9 ||
        std::abs(parse_double(parts[1]) - p.b) > 1e-9)
      throw Error(ErrorCategory::Io, "stored coordinates do not match the reconstructed grid");
    const double re = parse_double(parts[2]);
    const double im = parts.size() == 4 ? parse_double(parts[3]) : 0.0;
    loaded.field.values(k) = Complex(re, im);
    ++k;
  }
  if (k != grid->size()) throw Error(ErrorCategory::Io, "fewer rows than grid nodes");
  return loaded;
}

void write_report_json(const std::string& path, const AxiomReport& report) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"max_abs_deviation", c.max_abs_deviation},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  nlohmann::ordered_json doc = {{"backend", report.backend},
                                {"s", report.s},
                                {"all_pass", report.all_pass()},
                                {"checks", checks}};
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Io, "cannot open '" + path + "'");
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split(line, ',');
    if (parts.size() % 2 != 0)
      throw Error(ErrorCategory::Io, "matrix rows need interleaved re,im columns");
    std::vector<Complex> row;
    for (size_t i = 0; i < parts.size(); i += 2)
      row.emplace_back(parse_double(parts[i]), parse_double(parts[i + 1]));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCategory::Io, "empty matrix file");
  const size_t d = rows.size();
  Matrix m(d, d);
  for (size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d)
      throw Error(ErrorCategory::Io, "matrix file is not square");
    for (size_t j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j).real()) << "," << format_double(m(i, j).imag());
    }
    out << "\n";
  }
}

}  // namespace qpd
