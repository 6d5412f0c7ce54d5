#include "regerr/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace regerr {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double& value) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

PredictionMatrix read_prediction_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::string line;
  bool first = true;
  bool pending_blank = false;
  std::size_t blank_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) {
      if (!pending_blank) blank_line = line_no;
      pending_blank = true;
      continue;
    }
    if (pending_blank && !first) throw ParseError("blank line inside data", blank_line);
    pending_blank = false;

    auto cells = split(line);
    if (first) {
      first = false;
      width = cells.size();
      double probe = 0.0;
      bool numeric = true;
      for (const auto& c : cells) numeric = numeric && parse_double(c, probe);
      if (!numeric) {
        header = std::move(cells);
        continue;
      }
    }
    if (cells.size() != width) {
      std::ostringstream os;
      os << "expected " << width << " cells, found " << cells.size();
      throw ParseError(os.str(), line_no);
    }
    std::vector<double> values(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (cells[c].empty()) throw ParseError("empty cell", line_no, c + 1);
      if (!parse_double(cells[c], values[c]))
        throw ParseError("not a number: '" + cells[c] + "'", line_no, c + 1);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no data rows");

  Matrix data(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < width; ++c)
      data(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
  return PredictionMatrix(std::move(data), std::move(header));
}

PredictionMatrix read_prediction_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_prediction_csv(in);
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& rows) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format_number(rows(i, c));
    out << '\n';
  }
}

void write_prediction_csv(std::ostream& out, const PredictionMatrix& m) {
  std::vector<std::string> header;
  for (int r = 0; r < m.regressors(); ++r) header.push_back(m.name(r));
  write_csv(out, header, m.data());
}

void write_component_csv(std::ostream& out, const Vector& values, const std::string& value_name) {
  out << "component," << value_name << '\n';
  for (Index k = 0; k < values.size(); ++k) out << k << ',' << format_number(values(k)) << '\n';
}

}  // namespace regerr
