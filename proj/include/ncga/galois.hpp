#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ncga/rng.hpp"

namespace ncga::gf {

using Symbol = std::uint16_t;

/// GF(2^q) for q in {4, 8, 16}.
///
/// q = 8 uses the AES polynomial 0x11B with a full 256x256 product table;
/// q = 4 (0x13) and q = 16 (0x1100B) multiply by shift-and-reduce.
class Field {
 public:
  static const Field& get(unsigned q);

  unsigned q() const { return q_; }
  std::uint32_t order() const { return 1u << q_; }
  std::uint32_t polynomial() const { return poly_; }

  static Symbol add(Symbol a, Symbol b) { return a ^ b; }

  Symbol mul(Symbol a, Symbol b) const {
    if (q_ == 8) return table_[(static_cast<std::size_t>(a) << 8) | b];
    return slow_mul(a, b);
  }

  /// Throws std::domain_error for zero.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  /// Uniform element of [1, 2^q).
  Symbol random_nonzero(Rng& rng) const { return static_cast<Symbol>(1 + uniform_below(rng, order() - 1)); }
  Symbol random(Rng& rng) const { return static_cast<Symbol>(uniform_below(rng, order())); }

  /// dst += c * src, element-wise.
  void axpy(std::span<Symbol> dst, std::span<const Symbol> src, Symbol c) const;
  void scale(std::span<Symbol> row, Symbol c) const;

  /// Byte-region variants for q = 8 payloads.
  void axpy_bytes(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c) const;
  void scale_bytes(std::span<std::uint8_t> row, std::uint8_t c) const;

 private:
  explicit Field(unsigned q);
  Symbol slow_mul(Symbol a, Symbol b) const;

  unsigned q_;
  std::uint32_t poly_;
  std::vector<std::uint8_t> table_;    // q = 8 only: a*b at [a << 8 | b]
  std::vector<Symbol> inverse_;        // q <= 8
};

/// Field element tagged with its exponent, for the checked scalar API.
struct GfElement {
  std::uint32_t value = 0;
  unsigned q = 8;

  friend bool operator==(const GfElement&, const GfElement&) = default;
};

/// Throw FieldMismatch when the operands' q differ.
GfElement gf_add(GfElement a, GfElement b);
GfElement gf_mul(GfElement a, GfElement b);
GfElement gf_inv(GfElement a);

/// Dense row-major matrix over GF(2^q).
class GfMatrix {
 public:
  GfMatrix() = default;
  GfMatrix(std::size_t rows, std::size_t cols, unsigned q = 8);
  GfMatrix(std::size_t rows, std::size_t cols, std::vector<Symbol> entries, unsigned q = 8);

  static GfMatrix identity(std::size_t n, unsigned q = 8);
  static GfMatrix random(std::size_t rows, std::size_t cols, Rng& rng, unsigned q = 8);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  unsigned q() const { return q_; }
  const Field& field() const { return Field::get(q_); }

  Symbol& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Symbol at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<Symbol> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Symbol> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Symbol>& entries() const { return data_; }

  friend bool operator==(const GfMatrix&, const GfMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  unsigned q_ = 8;
  std::vector<Symbol> data_;
};

/// Throws DimensionMismatch or FieldMismatch.
GfMatrix multiply(const GfMatrix& a, const GfMatrix& b);

/// In-place forward elimination. Pivot = first row at or below the current
/// pivot row with a nonzero entry in the column. Returns the rank.
std::size_t row_reduce(GfMatrix& m);

std::size_t rank(const GfMatrix& m);

using CodingVector = std::vector<Symbol>;

struct CodedBlock {
  CodingVector coefficients;
  std::vector<Symbol> payload;
};

/// C = R x M. Row i of the result pairs with row i of R as its coding vector.
GfMatrix encode_segment(const GfMatrix& segment, const GfMatrix& coefficients);

/// Recovers the B x S segment from coded blocks whose coding vectors span
/// GF(2^q)^B. Throws RankDeficient when they do not, DimensionMismatch on
/// ragged input.
GfMatrix decode_segment(std::span<const CodedBlock> coded, unsigned q = 8);

/// rank(held + v) == rank(held) + 1.
bool is_innovative(std::span<const Symbol> v, std::span<const CodingVector> held, unsigned q = 8);

/// Incrementally maintained reduced basis; the receive-side innovativeness
/// check used by the simulator and the rate evaluator.
class EchelonBasis {
 public:
  EchelonBasis(std::size_t dimension, unsigned q = 8);

  /// Reduces `v` against the basis. If a nonzero remainder is left it is
  /// added and true is returned.
  bool insert(std::span<const Symbol> v);

  /// Same test without mutating.
  bool would_increase_rank(std::span<const Symbol> v) const;

  std::size_t rank() const { return pivots_.size(); }
  std::size_t dimension() const { return dim_; }

 private:
  void reduce(std::vector<Symbol>& v) const;

  std::size_t dim_;
  const Field* field_;
  std::vector<std::vector<Symbol>> rows_;  // each row normalised: pivot entry == 1
  std::vector<std::size_t> pivots_;
};

}  // namespace ncga::gf
