#pragma once

// Dense bit-packed GF(2) vectors and matrices, plus the matrices of graded
// multiplication maps in B(n).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "semireg/boolean_ring.hpp"

namespace semireg::gf2 {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
    bool any() const;
    std::size_t popcount() const;
    std::span<Word> words() { return words_; }
    std::span<const Word> words() const { return words_; }

    BitVector& operator^=(const BitVector& other);
    friend bool operator==(const BitVector&, const BitVector&) = default;

  private:
    std::size_t size_ = 0;
    std::vector<Word> words_;
};

/// Row-major packed matrix. Bits past `cols` in each row stay zero.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
    }
    void set(std::size_t r, std::size_t c, bool value = true);
    void flip(std::size_t r, std::size_t c) { data_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits); }

    std::span<Word> row(std::size_t r) { return {data_.data() + r * stride_, stride_}; }
    std::span<const Word> row(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }

    BitMatrix transpose() const;
    BitVector multiply(const BitVector& v) const;

    /// Row rank by forward elimination on a private copy; pivots are taken
    /// left to right without column exchanges.
    std::size_t rank() const;
    /// Basis of the right null space {v : M v = 0}, one vector per free
    /// column of the reduced echelon form, in increasing free-column order.
    std::vector<BitVector> kernel_basis() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> data_;
};

/// Incremental row-echelon basis of a subspace of GF(2)^dim. Each stored
/// vector is keyed by its lowest set bit; inserting reduces against the
/// stored pivots and keeps the remainder if nonzero. Storage grows with the
/// rank, so a rank-r basis costs r * dim bits.
class EchelonBasis {
  public:
    explicit EchelonBasis(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rank_; }
    bool full() const { return rank_ == dim_; }

    /// Returns true when v was independent of the current span. `v` is
    /// consumed as scratch space.
    bool insert(std::span<Word> v);
    bool insert(BitVector v) { return insert(v.words()); }

  private:
    static constexpr std::uint32_t kNoRow = ~std::uint32_t{0};

    std::size_t dim_;
    std::size_t stride_;
    std::size_t rank_ = 0;
    std::vector<Word> rows_;                // rank_ x stride_, in insertion order
    std::vector<std::uint32_t> pivot_row_;  // pivot bit -> row, or kNoRow
};

/// Matrix of multiplication by `lambda` from B(n)_k to B(n)_{k+d}: C(n, k+d)
/// rows, C(n, k) columns, column j holding the coordinates of lambda * m_j.
/// Throws DimensionError unless 0 <= k and k + d <= n.
BitMatrix mult_map_matrix(const Element& lambda, int k);

/// Rank of multiplication by `lambda` from B(n)_k to B(n)_{k+d}. Degrees
/// outside [0, n] give empty spaces and rank 0.
std::size_t mult_map_rank(const Element& lambda, int k);

/// All products m * g_i with deg m = k - deg g_i, as columns of a matrix
/// with C(n, k) rows. Generators of degree above k contribute no columns.
BitMatrix stacked_ideal_matrix(std::span<const Element> gens, int k);

/// dim (I ∩ B_k) for I = (gens), computed with early exit once the span
/// fills B_k. Agrees with stacked_ideal_matrix(gens, k).rank().
std::size_t stacked_ideal_rank(std::span<const Element> gens, int k);

} // namespace semireg::gf2
