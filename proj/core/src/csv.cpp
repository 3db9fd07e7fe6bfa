#include "sublimit/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sublimit/error.hpp"

namespace sublimit {
namespace {

struct Row {
  double x, re, im;
};

std::vector<Row> read_rows(std::istream& in, const std::string& expected_header) {
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) throw PreconditionError("csv: expected header '" + expected_header + "', got '" + line + "'");

  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c, ','))
      throw PreconditionError("csv: line " + std::to_string(line_no) + " has fewer than 3 fields");
    try {
      rows.push_back({std::stod(a), std::stod(b), std::stod(c)});
    } catch (const std::exception&) {
      throw PreconditionError("csv: line " + std::to_string(line_no) + " is not numeric");
    }
  }
  if (rows.size() < 2) throw PreconditionError("csv: need at least two rows");
  return rows;
}

// Uniform spacing check, relative to the step.
double uniform_step(const std::vector<Row>& rows) {
  const double step = (rows.back().x - rows.front().x) / static_cast<double>(rows.size() - 1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double expected = rows.front().x + step * static_cast<double>(k);
    if (std::abs(rows[k].x - expected) > 1e-9 * step)
      throw PreconditionError("csv: row " + std::to_string(k) + " is off the uniform grid");
  }
  return step;
}

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

void write_signal_csv(std::ostream& out, const SampledSignal& s) {
  out << "t,re,im\n";
  for (std::size_t k = 0; k < s.size(); ++k)
    out << format_number(s.grid().time(k)) << ',' << format_number(s[k].real()) << ',' << format_number(s[k].imag())
        << '\n';
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "w,re,im\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << format_number(s.frequency(i)) << ',' << format_number(s[i].real()) << ',' << format_number(s[i].imag())
        << '\n';
}

SampledSignal read_signal_csv(std::istream& in) {
  const auto rows = read_rows(in, "t,re,im");
  const double dt = uniform_step(rows);
  TimeGrid grid(rows.front().x, dt, rows.size());
  ComplexVector values;
  values.reserve(rows.size());
  for (const auto& r : rows) values.emplace_back(r.re, r.im);
  return SampledSignal(grid, std::move(values));
}

Spectrum read_spectrum_csv(std::istream& in, double t_start) {
  const auto rows = read_rows(in, "w,re,im");
  const double dw = uniform_step(rows);
  const std::size_t n = rows.size();
  TimeGrid grid(t_start, 1.0 / (dw * static_cast<double>(n)), n);
  if (std::abs(rows.front().x - grid.frequency(0)) > 1e-9 * dw)
    throw PreconditionError("csv: spectrum does not start at -n/2 dw");
  ComplexVector values;
  values.reserve(n);
  for (const auto& r : rows) values.emplace_back(r.re, r.im);
  return Spectrum(grid, std::move(values));
}

}  // namespace sublimit
