#include "phasespace/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "phasespace/error.hpp"

namespace phasespace::cli {

namespace {

using Index = Eigen::Index;

double parse_double(std::string_view s, std::string_view what) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "bad number '" + std::string(s) + "' for " + std::string(what));
  }
  return x;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string distribution_csv(const PhaseSpaceDistribution& dist) {
  const auto& g = dist.qgrid();
  const auto& pg = dist.pgrid();
  const auto& c = dist.constants();
  std::string out;
  out.reserve(g.size() * pg.size() * 96 + 256);
  out += "# kind=" + std::string(to_string(dist.kind())) + "\n";
  out += "# nq=" + std::to_string(g.size()) + "\n";
  out += "# np=" + std::to_string(pg.size()) + "\n";
  out += "# qmin=" + format_double(g.q_min()) + "\n";
  out += "# qmax=" + format_double(g.q_max()) + "\n";
  out += "# hbar=" + format_double(c.hbar) + "\n";
  out += "# mass=" + format_double(c.mass) + "\n";
  out += "q,p,re,im\n";
  const auto& v = dist.values();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const std::string q = format_double(g.point(j));
    for (std::size_t k = 0; k < pg.size(); ++k) {
      const Complex z = v(static_cast<Index>(j), static_cast<Index>(k));
      out += q;
      out += ',';
      out += format_double(pg.point(k));
      out += ',';
      out += format_double(z.real());
      out += ',';
      out += format_double(z.imag());
      out += '\n';
    }
  }
  return out;
}

PhaseSpaceDistribution parse_distribution_csv(std::string_view text) {
  std::map<std::string, std::string, std::less<>> header;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    const std::size_t eol = text.find('\n', pos);
    const std::size_t stop = eol == std::string_view::npos ? text.size() : eol;
    line = trim(text.substr(pos, stop - pos));
    pos = stop + 1;
    return true;
  };

  std::string_view line;
  bool have_columns = false;
  while (next_line(line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      line = trim(line);
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw Error(ErrorCode::ParseError, "header line without '='");
      header[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
      continue;
    }
    if (line != "q,p,re,im") throw Error(ErrorCode::ParseError, "expected column line q,p,re,im");
    have_columns = true;
    break;
  }
  if (!have_columns) throw Error(ErrorCode::ParseError, "missing column line");

  auto key = [&](std::string_view name) -> const std::string& {
    const auto it = header.find(name);
    if (it == header.end()) throw Error(ErrorCode::ParseError, "missing header key " + std::string(name));
    return it->second;
  };
  const DistributionKind kind = distribution_kind_from_string(key("kind"));
  const double nq_d = parse_double(key("nq"), "nq");
  const double np_d = parse_double(key("np"), "np");
  if (nq_d != np_d || nq_d < 1 || nq_d != std::floor(nq_d)) {
    throw Error(ErrorCode::ParseError, "nq and np must be equal positive integers");
  }
  const auto n = static_cast<std::size_t>(nq_d);
  const PositionGrid grid(parse_double(key("qmin"), "qmin"), parse_double(key("qmax"), "qmax"), n);
  PhysicalConstants constants{parse_double(key("hbar"), "hbar"), parse_double(key("mass"), "mass")};
  constants.validate();
  const MomentumGrid pgrid(grid, constants);

  ComplexMatrix values(static_cast<Index>(n), static_cast<Index>(n));
  const double qscale = std::max(std::abs(grid.q_min()), std::abs(grid.q_max()));
  const double pscale = pgrid.max_abs();
  std::size_t row = 0;
  while (next_line(line)) {
    if (line.empty()) continue;
    if (row >= n * n) throw Error(ErrorCode::ParseError, "more rows than nq * np");
    double field[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const std::size_t comma = f < 3 ? line.find(',', start) : line.size();
      if (comma == std::string_view::npos) throw Error(ErrorCode::ParseError, "row with fewer than 4 fields");
      field[f] = parse_double(trim(line.substr(start, comma - start)), "row field");
      start = comma + 1;
    }
    const std::size_t j = row / n;
    const std::size_t k = row % n;
    if (!close(field[0], grid.point(j), qscale) || !close(field[1], pgrid.point(k), pscale)) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + " is off the grid or out of order");
    }
    values(static_cast<Index>(j), static_cast<Index>(k)) = Complex(field[2], field[3]);
    ++row;
  }
  if (row != n * n) throw Error(ErrorCode::ParseError, "expected nq * np rows");
  return PhaseSpaceDistribution(kind, grid, constants, std::move(values));
}

std::string marginal_csv(const MarginalVector& marginal) {
  std::string out = "x,value\n";
  for (std::size_t i = 0; i < marginal.values.size(); ++i) {
    out += format_double(marginal.points[i]);
    out += ',';
    out += format_double(marginal.values[i]);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::InvalidConfig, "write failed for " + path.string());
}

}  // namespace phasespace::cli
