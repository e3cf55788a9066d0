#include <doctest.h>

#include "ncga/error.hpp"
#include "ncga/galois.hpp"
#include "oracles.hpp"

using namespace ncga;
using namespace ncga::gf;

namespace {

// Carry-less multiply then reduce, bit by bit. Independent of Field.
std::uint32_t reference_mul(std::uint32_t a, std::uint32_t b, unsigned q, std::uint32_t poly) {
  std::uint32_t product = 0;
  for (unsigned i = 0; i < q; ++i) {
    if (b >> i & 1u) product ^= a << i;
  }
  for (int bit = static_cast<int>(2 * q) - 2; bit >= static_cast<int>(q); --bit) {
    if (product >> bit & 1u) product ^= poly << (bit - static_cast<int>(q));
  }
  return product;
}

GfMatrix full_rank_random(std::size_t n, Rng& rng) {
  for (;;) {
    GfMatrix m = GfMatrix::random(n, n, rng);
    if (rank(m) == n) return m;
  }
}

}  // namespace

TEST_CASE("gf_add examples") {
  CHECK(gf_add({0x57, 8}, {0x83, 8}).value == 0xD4);
  CHECK(gf_add({0x9A, 8}, {0x9A, 8}).value == 0);
  CHECK(gf_add({0x9A, 8}, {0, 8}).value == 0x9A);
  CHECK_THROWS_AS(gf_add({1, 8}, {1, 4}), FieldMismatch);
}

TEST_CASE("gf_mul examples") {
  CHECK(gf_mul({0x02, 8}, {0x80, 8}).value == 0x1B);
  CHECK(gf_mul({0x57, 8}, {0x83, 8}).value == 0xC1);  // FIPS-197 worked example
  CHECK(gf_mul({0xA7, 8}, {1, 8}).value == 0xA7);
  CHECK(gf_mul({0xA7, 8}, {0, 8}).value == 0);
  CHECK_THROWS_AS(gf_mul({1, 16}, {1, 8}), FieldMismatch);
}

TEST_CASE("multiplication matches a bitwise reference for every field") {
  for (unsigned q : {4u, 8u, 16u}) {
    const Field& f = Field::get(q);
    Rng rng(q);
    for (int i = 0; i < 20000; ++i) {
      const Symbol a = f.random(rng), b = f.random(rng);
      REQUIRE(f.mul(a, b) == reference_mul(a, b, q, f.polynomial()));
    }
  }
  const Field& f8 = Field::get(8);
  for (std::uint32_t a = 0; a < 256; ++a) {
    for (std::uint32_t b = 0; b < 256; ++b) REQUIRE(f8.mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) == reference_mul(a, b, 8, 0x11B));
  }
}

TEST_CASE("property: field axioms") {
  for (unsigned q : {4u, 8u, 16u}) {
    const Field& f = Field::get(q);
    Rng rng(100 + q);
    for (int i = 0; i < 5000; ++i) {
      const Symbol a = f.random(rng), b = f.random(rng), c = f.random(rng);
      CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
      CHECK(f.mul(a, b) == f.mul(b, a));
      CHECK(f.mul(a, Field::add(b, c)) == Field::add(f.mul(a, b), f.mul(a, c)));
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
    }
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
  }
  CHECK(gf_mul({0x53, 8}, gf_inv({0x53, 8})).value == 1);
  CHECK(gf_inv({0x53, 8}).value == 0xCA);  // AES inverse table entry
}

TEST_CASE("byte-region kernels agree with scalar arithmetic") {
  const Field& f = Field::get(8);
  Rng rng(4);
  std::vector<std::uint8_t> dst(37), src(37);
  for (auto& x : dst) x = static_cast<std::uint8_t>(f.random(rng));
  for (auto& x : src) x = static_cast<std::uint8_t>(f.random(rng));
  const auto before = dst;
  const std::uint8_t c = 0x3D;
  f.axpy_bytes(dst, src, c);
  for (std::size_t i = 0; i < dst.size(); ++i) CHECK(dst[i] == (before[i] ^ f.mul(c, src[i])));
  f.scale_bytes(dst, 0);
  for (auto x : dst) CHECK(x == 0);
}

TEST_CASE("rank examples") {
  CHECK(rank(GfMatrix::identity(3)) == 3);
  const GfMatrix dup(2, 3, {7, 1, 9, 7, 1, 9});
  CHECK(rank(dup) == 1);
  Rng rng(7);
  const GfMatrix m = GfMatrix::random(5, 5, rng);
  CHECK(rank(m) == oracle::minor_rank(m));
}

TEST_CASE("property: rank agrees with the minor oracle on small matrices") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + uniform_below(rng, 4), cols = 1 + uniform_below(rng, 4);
    const unsigned q = trial % 2 ? 4 : 8;
    GfMatrix m(rows, cols, q);
    // Sparse entries so that rank deficiency actually happens.
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (bernoulli(rng, 0.4)) m.at(r, c) = static_cast<Symbol>(1 + uniform_below(rng, q == 4 ? 2 : 3));
      }
    }
    CHECK(rank(m) == oracle::minor_rank(m));
  }
}

TEST_CASE("property: rank is invariant under elementary row operations") {
  Rng rng(23);
  const Field& f = Field::get(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 2 + uniform_below(rng, 6), cols = 2 + uniform_below(rng, 6);
    GfMatrix m = GfMatrix::random(rows, cols, rng);
    if (bernoulli(rng, 0.5)) {
      // plant a dependency
      const std::size_t a = uniform_below(rng, rows), b = uniform_below(rng, rows);
      for (std::size_t c = 0; c < cols; ++c) m.at(a, c) = f.mul(m.at(b, c), 0x11);
    }
    const std::size_t r0 = rank(m);
    const std::size_t i = uniform_below(rng, rows), j = uniform_below(rng, rows);
    GfMatrix swapped = m;
    for (std::size_t c = 0; c < cols; ++c) std::swap(swapped.at(i, c), swapped.at(j, c));
    CHECK(rank(swapped) == r0);
    GfMatrix scaled = m;
    f.scale(scaled.row(i), f.random_nonzero(rng));
    CHECK(rank(scaled) == r0);
    if (i != j) {
      GfMatrix added = m;
      f.axpy(added.row(i), m.row(j), f.random(rng));
      CHECK(rank(added) == r0);
    }
  }
}

TEST_CASE("encode_segment examples") {
  Rng rng(1);
  const GfMatrix m = GfMatrix::random(3, 5, rng);
  CHECK(encode_segment(m, GfMatrix::identity(3)) == m);
  CHECK(encode_segment(m, GfMatrix(3, 3)) == GfMatrix(3, 5));
  const GfMatrix c = encode_segment(GfMatrix(2, 1, {0x01, 0x02}), GfMatrix(2, 2, {0x01, 0x01, 0x00, 0x01}));
  CHECK(c == GfMatrix(2, 1, {0x03, 0x02}));
  CHECK_THROWS_AS(encode_segment(m, GfMatrix::identity(4)), DimensionMismatch);
}

TEST_CASE("decode_segment examples") {
  Rng rng(3);
  const GfMatrix m = GfMatrix::random(4, 6, rng);
  std::vector<CodedBlock> unit;
  const GfMatrix id = GfMatrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i) {
    unit.push_back({{id.row(i).begin(), id.row(i).end()}, {m.row(i).begin(), m.row(i).end()}});
  }
  CHECK(decode_segment(unit) == m);
  CHECK_THROWS_AS(decode_segment(std::span<const CodedBlock>(unit).first(3)), RankDeficient);

  const GfMatrix r = full_rank_random(4, rng);
  const GfMatrix c = encode_segment(m, r);
  std::vector<CodedBlock> coded;
  for (std::size_t i = 0; i < 4; ++i) coded.push_back({{r.row(i).begin(), r.row(i).end()}, {c.row(i).begin(), c.row(i).end()}});
  CHECK(decode_segment(coded) == m);
}

TEST_CASE("property: decode inverts encode for 1000 full-rank systems") {
  Rng rng(8);
  int exact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t b = 1 + uniform_below(rng, 8), s = 1 + uniform_below(rng, 16);
    const GfMatrix m = GfMatrix::random(b, s, rng);
    const GfMatrix r = full_rank_random(b, rng);
    const GfMatrix c = encode_segment(m, r);
    std::vector<CodedBlock> coded;
    for (std::size_t i = 0; i < b; ++i) coded.push_back({{r.row(i).begin(), r.row(i).end()}, {c.row(i).begin(), c.row(i).end()}});
    exact += decode_segment(coded) == m;
  }
  CHECK(exact == 1000);
}

TEST_CASE("is_innovative examples") {
  const CodingVector a{1, 2, 3}, b{0, 5, 9};
  CHECK(is_innovative(a, {}));
  const std::vector<CodingVector> held{a, b};
  CHECK_FALSE(is_innovative(a, held));
  const CodingVector sum{static_cast<Symbol>(1 ^ 0), static_cast<Symbol>(2 ^ 5), static_cast<Symbol>(3 ^ 9)};
  CHECK_FALSE(is_innovative(sum, held));
  CHECK(is_innovative(CodingVector{0, 0, 1}, held));
  CHECK_FALSE(is_innovative(CodingVector{0, 0, 0}, {}));
}

TEST_CASE("property: innovativeness matches rank increase, EchelonBasis agrees") {
  Rng rng(31);
  const Field& f = Field::get(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 1 + uniform_below(rng, 6);
    EchelonBasis basis(dim);
    std::vector<CodingVector> held;
    for (int step = 0; step < 10; ++step) {
      CodingVector v(dim, 0);
      if (!held.empty() && bernoulli(rng, 0.5)) {
        for (const auto& h : held) f.axpy(v, h, f.random(rng));
      } else {
        for (auto& x : v) x = f.random(rng);
      }
      GfMatrix before(held.size(), dim), after(held.size() + 1, dim);
      for (std::size_t i = 0; i < held.size(); ++i) {
        std::copy(held[i].begin(), held[i].end(), before.row(i).begin());
        std::copy(held[i].begin(), held[i].end(), after.row(i).begin());
      }
      std::copy(v.begin(), v.end(), after.row(held.size()).begin());
      const bool expected = rank(after) == rank(before) + 1;
      CHECK(is_innovative(v, held) == expected);
      CHECK(basis.would_increase_rank(v) == expected);
      CHECK(basis.insert(v) == expected);
      held.push_back(v);
      CHECK(basis.rank() == rank(after));
    }
  }
}

TEST_CASE("random square matrices are almost always full rank") {
  Rng rng(12);
  int full = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    const std::size_t b = 1 + uniform_below(rng, 32);
    full += rank(GfMatrix::random(b, b, rng)) == b;
  }
  CHECK(static_cast<double>(full) / trials >= 0.99);
}
