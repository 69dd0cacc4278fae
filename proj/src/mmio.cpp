#include "bse/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace bse {

namespace {

enum class Layout { Coordinate, Array };
enum class Field { Complex, Real, Integer };
enum class Tag { General, Symmetric, Hermitian };

struct Header {
  Layout layout = Layout::Coordinate;
  Field field = Field::Complex;
  Tag tag = Tag::General;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw FormatError(path + ": " + what);
}

Header parse_header(const std::string& path, const std::string& line) {
  std::istringstream in(line);
  std::string banner, object, layout, field, tag;
  in >> banner >> object >> layout >> field >> tag;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    fail(path, "missing '%%MatrixMarket matrix' header");
  Header h;
  layout = lower(layout);
  field = lower(field);
  tag = lower(tag);
  if (layout == "coordinate") h.layout = Layout::Coordinate;
  else if (layout == "array") h.layout = Layout::Array;
  else fail(path, "unsupported format '" + layout + "'");
  if (field == "complex") h.field = Field::Complex;
  else if (field == "real" || field == "double") h.field = Field::Real;
  else if (field == "integer") h.field = Field::Integer;
  else fail(path, "unsupported field '" + field + "'");
  if (tag == "general") h.tag = Tag::General;
  else if (tag == "symmetric") h.tag = Tag::Symmetric;
  else if (tag == "hermitian") h.tag = Tag::Hermitian;
  else fail(path, "unsupported symmetry '" + tag + "'");
  if (h.tag == Tag::Hermitian && h.field != Field::Complex)
    fail(path, "hermitian symmetry requires complex field");
  return h;
}

/// Whitespace-separated tokens of the data section with their line numbers.
struct TokenStream {
  std::ifstream& in;
  const std::string& path;
  std::size_t lineno;
  std::istringstream current;

  bool next_line() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      current.clear();
      current.str(line);
      return true;
    }
    return false;
  }

  std::string where() const { return "line " + std::to_string(lineno); }
};

template <typename T>
T parse_number(const std::string& tok, const std::string& path, const std::string& where) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  T value{};
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(path, where + ": cannot parse number '" + tok + "'");
  return value;
}

template <typename Real>
Complex<Real> read_value(TokenStream& ts, const Header& h) {
  std::string re, im;
  if (!(ts.current >> re)) fail(ts.path, ts.where() + ": missing value");
  Real imag = 0;
  if (h.field == Field::Complex) {
    if (!(ts.current >> im)) fail(ts.path, ts.where() + ": missing imaginary part");
    imag = parse_number<Real>(im, ts.path, ts.where());
  }
  std::string extra;
  if (ts.current >> extra) fail(ts.path, ts.where() + ": trailing data '" + extra + "'");
  return Complex<Real>(parse_number<Real>(re, ts.path, ts.where()), imag);
}

std::string entry_name(const std::string& name, Index i, Index j) {
  return name + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

template <typename Real>
std::string format_value(Complex<Real> v) {
  char buf[96];
  char* p = buf;
  p = std::to_chars(p, buf + 47, v.real()).ptr;
  *p++ = ' ';
  p = std::to_chars(p, buf + 95, v.imag()).ptr;
  return std::string(buf, p);
}

/// Mirror of entry (i, j) for the expected symmetry.
template <typename Real>
Complex<Real> mirror(Complex<Real> v, BlockSymmetry sym) {
  return sym == BlockSymmetry::Hermitian ? std::conj(v) : v;
}

template <typename Real>
void check_exact(const CMatrix<Real>& A, BlockSymmetry sym, const std::string& path) {
  Real worst = -1;
  Index wi = 0, wj = 0;
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = j; i < A.rows(); ++i) {
      const Real dev = std::abs(A(i, j) - mirror(A(j, i), sym));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = j;
      }
    }
  if (worst > 0) {
    const std::string rel = sym == BlockSymmetry::Hermitian ? "conj of " : "";
    std::ostringstream msg;
    msg << path << ": " << entry_name("A", wi, wj) << " = " << format_value(A(wi, wj))
        << " differs from " << rel << entry_name("A", wj, wi) << " = "
        << format_value(A(wj, wi)) << " (max deviation " << worst << ")";
    throw SymmetryViolation(msg.str());
  }
}

template <typename Real>
void check_exact(const CSparse<Real>& A, BlockSymmetry sym, const std::string& path) {
  const CSparse<Real> mirrored =
      sym == BlockSymmetry::Hermitian ? CSparse<Real>(A.adjoint()) : CSparse<Real>(A.transpose());
  const CSparse<Real> diff = A - mirrored;
  Real worst = 0;
  Index wi = 0, wj = 0;
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (typename CSparse<Real>::InnerIterator it(diff, k); it; ++it)
      if (std::abs(it.value()) > worst) {
        worst = std::abs(it.value());
        wi = it.row();
        wj = it.col();
      }
  if (worst > 0) {
    const std::string rel = sym == BlockSymmetry::Hermitian ? "conj of " : "";
    std::ostringstream msg;
    msg << path << ": " << entry_name("A", wi, wj) << " = " << format_value<Real>(A.coeff(wi, wj))
        << " differs from " << rel << entry_name("A", wj, wi) << " = "
        << format_value<Real>(A.coeff(wj, wi)) << " (max deviation " << worst << ")";
    throw SymmetryViolation(msg.str());
  }
}

/// Tag-implied mirror of a stored lower-triangle entry.
template <typename Real>
Complex<Real> tag_mirror(Complex<Real> v, Tag tag) {
  return tag == Tag::Hermitian ? std::conj(v) : v;
}

void check_tag(const Header& h, BlockSymmetry expected, const std::string& path) {
  if (expected == BlockSymmetry::Symmetric && h.tag == Tag::Hermitian)
    fail(path, "expected a complex symmetric matrix, file is tagged hermitian");
}

template <typename Real>
void check_symmetric_tag_data(Complex<Real> v, const Header& h, BlockSymmetry expected,
                              Index i, Index j, const std::string& path) {
  if (i == j && h.tag == Tag::Hermitian && v.imag() != 0)
    throw SymmetryViolation(path + ": diagonal entry " + entry_name("A", i, j) +
                            " of a hermitian file is not real");
  if (i != j && h.tag == Tag::Symmetric && expected == BlockSymmetry::Hermitian &&
      v.imag() != 0)
    throw SymmetryViolation(path + ": entry " + entry_name("A", i, j) +
                            " is complex in a symmetric file, so the matrix is not Hermitian");
  if (i == j && h.tag == Tag::Symmetric && expected == BlockSymmetry::Hermitian &&
      v.imag() != 0)
    throw SymmetryViolation(path + ": diagonal entry " + entry_name("A", i, j) + " is not real");
}

}  // namespace

template <typename Real>
Block<Real> read_block(const std::string& path, BlockSymmetry expected) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  const Header h = parse_header(path, line);
  check_tag(h, expected, path);
  TokenStream ts{in, path, 1, {}};
  if (!ts.next_line()) fail(path, "missing size line");

  Index rows = 0, cols = 0, nnz = 0;
  std::string tok;
  auto read_index = [&](const char* what) {
    if (!(ts.current >> tok)) fail(path, ts.where() + ": missing " + std::string(what));
    return Index(parse_number<long long>(tok, path, ts.where()));
  };
  rows = read_index("row count");
  cols = read_index("column count");
  if (h.layout == Layout::Coordinate) nnz = read_index("entry count");
  if (rows <= 0 || cols <= 0 || nnz < 0) fail(path, ts.where() + ": invalid size");
  if (rows != cols) throw DimensionMismatch(path + ": matrix is " + std::to_string(rows) + "x" +
                                            std::to_string(cols) + ", expected square");

  if (h.layout == Layout::Array) {
    CMatrix<Real> A = CMatrix<Real>::Zero(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = (h.tag == Tag::General ? 0 : j); i < rows; ++i) {
        if (!ts.next_line()) fail(path, "unexpected end of file in array data");
        const Complex<Real> v = read_value<Real>(ts, h);
        if (h.tag != Tag::General) check_symmetric_tag_data(v, h, expected, i, j, path);
        A(i, j) = v;
        if (h.tag != Tag::General && i != j) A(j, i) = tag_mirror(v, h.tag);
      }
    if (ts.next_line()) fail(path, ts.where() + ": data after the last array entry");
    if (h.tag == Tag::General) check_exact(A, expected, path);
    return A;
  }

  std::vector<Eigen::Triplet<Complex<Real>>> trip;
  trip.reserve(h.tag == Tag::General ? nnz : 2 * nnz);
  for (Index e = 0; e < nnz; ++e) {
    if (!ts.next_line()) fail(path, "unexpected end of file after " + std::to_string(e) +
                                        " of " + std::to_string(nnz) + " entries");
    const Index i = read_index("row index") - 1;
    const Index j = read_index("column index") - 1;
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      fail(path, ts.where() + ": index out of range");
    const Complex<Real> v = read_value<Real>(ts, h);
    if (h.tag != Tag::General) {
      if (i < j) fail(path, ts.where() + ": upper-triangle entry in a " +
                                std::string(h.tag == Tag::Hermitian ? "hermitian" : "symmetric") +
                                " file");
      check_symmetric_tag_data(v, h, expected, i, j, path);
    }
    trip.emplace_back(i, j, v);
    if (h.tag != Tag::General && i != j) trip.emplace_back(j, i, tag_mirror(v, h.tag));
  }
  if (ts.next_line()) fail(path, ts.where() + ": more entries than declared");
  CSparse<Real> A(rows, cols);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  if (h.tag == Tag::General) check_exact(A, expected, path);
  return A;
}

template <typename Real>
void write_block(const std::string& path, const Block<Real>& block, BlockSymmetry sym) {
  std::ofstream out(path);
  if (!out) throw FormatError(path + ": cannot open file for writing");
  if (const auto* dense = std::get_if<CMatrix<Real>>(&block)) {
    out << "%%MatrixMarket matrix array complex general\n";
    out << dense->rows() << ' ' << dense->cols() << '\n';
    for (Index j = 0; j < dense->cols(); ++j)
      for (Index i = 0; i < dense->rows(); ++i) out << format_value((*dense)(i, j)) << '\n';
  } else {
    const auto& sp = std::get<CSparse<Real>>(block);
    std::vector<std::string> lines;
    for (Index k = 0; k < sp.outerSize(); ++k)
      for (typename CSparse<Real>::InnerIterator it(sp, k); it; ++it)
        if (it.row() >= it.col())
          lines.push_back(std::to_string(it.row() + 1) + ' ' + std::to_string(it.col() + 1) +
                          ' ' + format_value<Real>(it.value()));
    out << "%%MatrixMarket matrix coordinate complex "
        << (sym == BlockSymmetry::Hermitian ? "hermitian" : "symmetric") << '\n';
    out << sp.rows() << ' ' << sp.cols() << ' ' << lines.size() << '\n';
    for (const auto& l : lines) out << l << '\n';
  }
  if (!out) throw FormatError(path + ": write failed");
}

template <typename Real>
BseOperator<Real> read_blocks(const std::string& path_r, const std::string& path_c) {
  Block<Real> r = read_block<Real>(path_r, BlockSymmetry::Hermitian);
  Block<Real> c = read_block<Real>(path_c, BlockSymmetry::Symmetric);
  if (block_rows(r) != block_rows(c))
    throw DimensionMismatch(path_r + " is " + std::to_string(block_rows(r)) + "x" +
                            std::to_string(block_rows(r)) + " but " + path_c + " is " +
                            std::to_string(block_rows(c)) + "x" +
                            std::to_string(block_rows(c)));
  if (r.index() != c.index()) {
    r = block_to_dense(r);
    c = block_to_dense(c);
  }
  return BseOperator<Real>(std::move(r), std::move(c));
}

template <typename Real>
void write_blocks(const BseOperator<Real>& op, const std::string& path_r,
                  const std::string& path_c) {
  write_block(path_r, op.r(), BlockSymmetry::Hermitian);
  write_block(path_c, op.c(), BlockSymmetry::Symmetric);
}

#define BSE_INSTANTIATE(Real)                                                              \
  template Block<Real> read_block<Real>(const std::string&, BlockSymmetry);                \
  template void write_block<Real>(const std::string&, const Block<Real>&, BlockSymmetry);  \
  template BseOperator<Real> read_blocks<Real>(const std::string&, const std::string&);    \
  template void write_blocks<Real>(const BseOperator<Real>&, const std::string&,           \
                                   const std::string&);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
