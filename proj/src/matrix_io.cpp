#include "nnrank/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nnrank::io {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end != begin && *end == '\0';
}

DenseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty MatrixMarket file", 1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, fmt, field, symmetry;
    hs >> banner >> object >> fmt >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
      throw ParseError("expected '%%MatrixMarket matrix ...' banner", lineno);
    if (lower(fmt) != "array" || lower(field) != "real" || lower(symmetry) != "general")
      throw ParseError("unsupported MatrixMarket header (need 'array real general')", lineno);
  }

  // skip comment lines
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    break;
  }
  long dims_line = lineno;
  long rows = 0, cols = 0;
  {
    std::istringstream ds(line);
    if (!(ds >> rows >> cols) || rows <= 0 || cols <= 0)
      throw ParseError("malformed dimensions line", dims_line);
    std::string extra;
    if (ds >> extra) throw ParseError("malformed dimensions line", dims_line);
  }

  std::vector<double> colmajor;
  colmajor.reserve(static_cast<size_t>(rows) * cols);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    std::istringstream vs(line);
    std::string tok;
    while (vs >> tok) {
      double v = 0.0;
      if (!parse_double(tok, v)) throw ParseError("non-numeric token '" + tok + "'", lineno);
      colmajor.push_back(v);
      if (colmajor.size() > static_cast<size_t>(rows) * cols)
        throw ParseError("more entries than rows*cols", lineno);
    }
  }
  if (colmajor.size() != static_cast<size_t>(rows) * cols)
    throw ParseError("entry count " + std::to_string(colmajor.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols),
                     lineno);

  DenseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i)
      m(static_cast<int>(i), static_cast<int>(j)) = colmajor[static_cast<size_t>(j) * rows + i];
  m.check_finite();
  return m;
}

DenseMatrix read_csv(std::istream& in) {
  std::string line;
  long lineno = 0;
  std::vector<double> values;
  long rows = 0;
  long cols = -1;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      if (rows > 0) continue;  // tolerate trailing blank lines
      throw ParseError("blank line before any data", lineno);
    }
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    if (cols < 0) {
      cols = static_cast<long>(fields.size());
    } else if (static_cast<long>(fields.size()) != cols) {
      throw ParseError("ragged row: expected " + std::to_string(cols) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    for (std::string f : fields) {
      // trim
      size_t a = f.find_first_not_of(" \t");
      size_t b = f.find_last_not_of(" \t");
      if (a == std::string::npos) throw ParseError("empty field", lineno);
      f = f.substr(a, b - a + 1);
      double v = 0.0;
      if (!parse_double(f, v)) throw ParseError("non-numeric token '" + f + "'", lineno);
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("empty CSV file", 1);
  return DenseMatrix(static_cast<int>(rows), static_cast<int>(cols), std::move(values));
}

}  // namespace

MatrixFormat infer_format(const std::filesystem::path& path) {
  std::string ext = lower(path.extension().string());
  if (ext == ".mtx" || ext == ".mm") return MatrixFormat::MatrixMarket;
  if (ext == ".csv") return MatrixFormat::Csv;
  throw ValueError("cannot infer matrix format from extension '" + ext +
                   "' (use .mtx/.mm or .csv, or pass the format explicitly)");
}

DenseMatrix read_matrix(std::istream& in, MatrixFormat format) {
  return format == MatrixFormat::MatrixMarket ? read_matrix_market(in) : read_csv(in);
}

DenseMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file for reading: " + path.string());
  return read_matrix(in, format);
}

void write_matrix(const DenseMatrix& m, std::ostream& out, MatrixFormat format) {
  if (format == MatrixFormat::MatrixMarket) {
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << " " << m.cols() << "\n";
    for (int j = 0; j < m.cols(); ++j)
      for (int i = 0; i < m.rows(); ++i) out << fmt17(m(i, j)) << "\n";
  } else {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (j) out << ",";
        out << fmt17(m(i, j));
      }
      out << "\n";
    }
  }
}

void write_matrix(const DenseMatrix& m, const std::filesystem::path& path, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path.string());
  write_matrix(m, out, format);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace nnrank::io
