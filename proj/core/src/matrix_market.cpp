#include "sketchkrylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sketchkrylov/error.hpp"
#include "sketchkrylov/text_format.hpp"

namespace sketchkrylov {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

double number(const std::string& tok, std::size_t line) {
  try {
    return parse_double(tok);
  } catch (const InvalidArgument&) {
    throw ParseError("invalid numeric field '" + tok + "'", line);
  }
}

std::size_t count(const std::string& tok, std::size_t line) {
  try {
    return parse_count(tok);
  } catch (const InvalidArgument&) {
    throw ParseError("invalid integer field '" + tok + "'", line);
  }
}

// Next non-comment, non-blank line; false at end of input.
bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    return true;
  }
  return false;
}

}  // namespace

MatrixMarketData read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  lineno = 1;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> head = tokens(line);
  if (head.size() != 5 || lower(head[0]) != "%%matrixmarket" || lower(head[1]) != "matrix") {
    throw ParseError("missing '%%MatrixMarket matrix' header", lineno);
  }
  const std::string format = lower(head[2]), field = lower(head[3]), symmetry = lower(head[4]);
  if (format != "coordinate" && format != "array") throw ParseError("unknown format '" + head[2] + "'", lineno);
  if (field != "real" && field != "integer" && field != "double") {
    throw ParseError("unsupported field '" + head[3] + "'", lineno);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("unsupported symmetry '" + head[4] + "'", lineno);
  }
  MatrixMarketData data;
  data.coordinate = format == "coordinate";
  data.symmetric = symmetry == "symmetric";

  if (!next_data_line(in, line, lineno)) throw ParseError("missing size line", lineno + 1);
  const std::vector<std::string> size = tokens(line);
  if (size.size() != (data.coordinate ? 3u : 2u)) throw ParseError("malformed size line", lineno);
  const std::size_t rows = count(size[0], lineno), cols = count(size[1], lineno);
  if (data.symmetric && rows != cols) throw ParseError("symmetric matrix must be square", lineno);

  if (data.coordinate) {
    const std::size_t nnz = count(size[2], lineno);
    std::vector<Triplet> entries;
    entries.reserve(data.symmetric ? 2 * nnz : nnz);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!next_data_line(in, line, lineno)) throw ParseError("expected " + std::to_string(nnz) + " entries", lineno + 1);
      const std::vector<std::string> t = tokens(line);
      if (t.size() != 3) throw ParseError("malformed entry", lineno);
      const std::size_t i = count(t[0], lineno), j = count(t[1], lineno);
      if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("index out of range", lineno);
      const double v = number(t[2], lineno);
      if (data.symmetric && j > i) throw ParseError("symmetric entry above the diagonal", lineno);
      entries.push_back({i - 1, j - 1, v});
      if (data.symmetric && i != j) entries.push_back({j - 1, i - 1, v});
    }
    data.sparse = CsrMatrix::from_triplets(rows, cols, std::move(entries));
  } else {
    data.dense = Matrix(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t i = data.symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line, lineno)) throw ParseError("too few array entries", lineno + 1);
        const std::vector<std::string> t = tokens(line);
        if (t.size() != 1) throw ParseError("malformed array entry", lineno);
        const double v = number(t[0], lineno);
        data.dense(i, j) = v;
        if (data.symmetric) data.dense(j, i) = v;
      }
    }
  }
  if (next_data_line(in, line, lineno)) throw ParseError("unexpected trailing data", lineno);
  return data;
}

MatrixMarketData load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, MatrixView A) {
  out << "%%MatrixMarket matrix array real general\n" << A.rows << ' ' << A.cols << '\n';
  for (std::size_t j = 0; j < A.cols; ++j) {
    for (std::size_t i = 0; i < A.rows; ++i) out << format_double(A(i, j)) << '\n';
  }
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
  out << "%%MatrixMarket matrix coordinate real general\n"
      << A.rows() << ' ' << A.cols() << ' ' << A.nnz() << '\n';
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t e = A.row_ptr()[i]; e < A.row_ptr()[i + 1]; ++e) {
      out << i + 1 << ' ' << A.col_idx()[e] + 1 << ' ' << format_double(A.values()[e]) << '\n';
    }
  }
}

namespace {

template <class M>
void save(const std::string& path, const M& A) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_matrix_market(out, A);
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace

void save_matrix_market(const std::string& path, MatrixView A) { save(path, A); }
void save_matrix_market(const std::string& path, const CsrMatrix& A) { save(path, A); }

}  // namespace sketchkrylov
