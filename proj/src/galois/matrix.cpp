#include <string>

#include "ncga/error.hpp"
#include "ncga/galois.hpp"

namespace ncga::gf {

GfMatrix::GfMatrix(std::size_t rows, std::size_t cols, unsigned q)
    : rows_(rows), cols_(cols), q_(q), data_(rows * cols, 0) {
  (void)Field::get(q);
}

GfMatrix::GfMatrix(std::size_t rows, std::size_t cols, std::vector<Symbol> entries, unsigned q)
    : rows_(rows), cols_(cols), q_(q), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("expected " + std::to_string(rows * cols) + " entries, got " +
                            std::to_string(data_.size()));
  }
  const std::uint32_t order = Field::get(q).order();
  for (Symbol s : data_) {
    if (s >= order) throw std::invalid_argument("entry outside GF(2^" + std::to_string(q) + ")");
  }
}

GfMatrix GfMatrix::identity(std::size_t n, unsigned q) {
  GfMatrix m(n, n, q);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

GfMatrix GfMatrix::random(std::size_t rows, std::size_t cols, Rng& rng, unsigned q) {
  GfMatrix m(rows, cols, q);
  const Field& f = Field::get(q);
  for (Symbol& s : m.data_) s = f.random(rng);
  return m;
}

GfMatrix multiply(const GfMatrix& a, const GfMatrix& b) {
  if (a.q() != b.q()) throw FieldMismatch("matrix operands over different fields");
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("inner dimensions " + std::to_string(a.cols()) + " and " + std::to_string(b.rows()));
  }
  GfMatrix c(a.rows(), b.cols(), a.q());
  const Field& f = a.field();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) f.axpy(c.row(i), b.row(k), a.at(i, k));
  }
  return c;
}

std::size_t row_reduce(GfMatrix& m) {
  const Field& f = m.field();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    std::size_t pick = pivot_row;
    while (pick < m.rows() && m.at(pick, col) == 0) ++pick;
    if (pick == m.rows()) continue;
    if (pick != pivot_row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(pick, c), m.at(pivot_row, c));
    }
    f.scale(m.row(pivot_row), f.inv(m.at(pivot_row, col)));
    for (std::size_t r = pivot_row + 1; r < m.rows(); ++r) {
      const Symbol factor = m.at(r, col);
      if (factor != 0) f.axpy(m.row(r), m.row(pivot_row), factor);
    }
    ++pivot_row;
  }
  return pivot_row;
}

std::size_t rank(const GfMatrix& m) {
  GfMatrix copy = m;
  return row_reduce(copy);
}

GfMatrix encode_segment(const GfMatrix& segment, const GfMatrix& coefficients) {
  return multiply(coefficients, segment);
}

GfMatrix decode_segment(std::span<const CodedBlock> coded, unsigned q) {
  if (coded.empty()) throw RankDeficient("no coded blocks");
  const std::size_t blocks = coded.front().coefficients.size();
  const std::size_t width = coded.front().payload.size();
  // Augmented system [V | C], one row per coded block.
  GfMatrix system(coded.size(), blocks + width, q);
  for (std::size_t i = 0; i < coded.size(); ++i) {
    if (coded[i].coefficients.size() != blocks || coded[i].payload.size() != width) {
      throw DimensionMismatch("coded block " + std::to_string(i) + " has inconsistent length");
    }
    std::copy(coded[i].coefficients.begin(), coded[i].coefficients.end(), system.row(i).begin());
    std::copy(coded[i].payload.begin(), coded[i].payload.end(), system.row(i).begin() + static_cast<std::ptrdiff_t>(blocks));
  }

  const Field& f = system.field();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < blocks; ++col) {
    std::size_t pick = pivot_row;
    while (pick < system.rows() && system.at(pick, col) == 0) ++pick;
    if (pick == system.rows()) {
      throw RankDeficient("coding vectors span only " + std::to_string(pivot_row) + " of " +
                          std::to_string(blocks) + " dimensions");
    }
    if (pick != pivot_row) {
      for (std::size_t c = 0; c < system.cols(); ++c) std::swap(system.at(pick, c), system.at(pivot_row, c));
    }
    f.scale(system.row(pivot_row), f.inv(system.at(pivot_row, col)));
    for (std::size_t r = 0; r < system.rows(); ++r) {
      const Symbol factor = system.at(r, col);
      if (r != pivot_row && factor != 0) f.axpy(system.row(r), system.row(pivot_row), factor);
    }
    ++pivot_row;
  }

  GfMatrix segment(blocks, width, q);
  for (std::size_t i = 0; i < blocks; ++i) {
    const auto src = system.row(i).subspan(blocks);
    std::copy(src.begin(), src.end(), segment.row(i).begin());
  }
  return segment;
}

bool is_innovative(std::span<const Symbol> v, std::span<const CodingVector> held, unsigned q) {
  EchelonBasis basis(v.size(), q);
  for (const CodingVector& h : held) {
    if (h.size() != v.size()) throw DimensionMismatch("coding vectors differ in length");
    basis.insert(h);
  }
  return basis.would_increase_rank(v);
}

EchelonBasis::EchelonBasis(std::size_t dimension, unsigned q) : dim_(dimension), field_(&Field::get(q)) {}

void EchelonBasis::reduce(std::vector<Symbol>& v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Symbol factor = v[pivots_[i]];
    if (factor != 0) field_->axpy(v, rows_[i], factor);
  }
}

bool EchelonBasis::would_increase_rank(std::span<const Symbol> v) const {
  if (v.size() != dim_) throw DimensionMismatch("vector length differs from basis dimension");
  if (rows_.size() == dim_) return false;
  std::vector<Symbol> work(v.begin(), v.end());
  reduce(work);
  for (Symbol s : work) {
    if (s != 0) return true;
  }
  return false;
}

bool EchelonBasis::insert(std::span<const Symbol> v) {
  if (v.size() != dim_) throw DimensionMismatch("vector length differs from basis dimension");
  if (rows_.size() == dim_) return false;
  std::vector<Symbol> work(v.begin(), v.end());
  reduce(work);
  std::size_t lead = 0;
  while (lead < dim_ && work[lead] == 0) ++lead;
  if (lead == dim_) return false;
  field_->scale(work, field_->inv(work[lead]));
  // Keep the basis fully reduced so reduce() is a single pass.
  for (auto& row : rows_) {
    const Symbol factor = row[lead];
    if (factor != 0) field_->axpy(row, work, factor);
  }
  rows_.push_back(std::move(work));
  pivots_.push_back(lead);
  return true;
}

}  // namespace ncga::gf
