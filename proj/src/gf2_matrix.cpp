#include "semireg/gf2_matrix.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "semireg/errors.hpp"

namespace semireg::gf2 {

namespace {

void xor_into(std::span<Word> dst, std::span<const Word> src, std::size_t from_word = 0) {
    for (std::size_t i = from_word; i < dst.size(); ++i)
        dst[i] ^= src[i];
}

// Column index -> coordinates of lambda * m for every degree-k monomial m,
// appended as packed vectors of C(n, k+d) bits. Calls `sink(span)` per column.
template <typename Sink>
void for_each_product_column(const Element& lambda, int k, std::vector<Word>& scratch, Sink&& sink) {
    const int n = lambda.ambient();
    const int target = k + lambda.degree();
    const std::size_t dim = binomial_u64(n, target);
    const std::size_t stride = words_for(dim);
    scratch.assign(stride, 0);
    for (Mask m : monomials_of_degree(n, k)) {
        std::fill(scratch.begin(), scratch.end(), 0);
        for (Mask s : lambda.support()) {
            if ((m & s) != 0)
                continue;
            const std::uint64_t r = colex_rank(m | s);
            scratch[r / kWordBits] ^= Word{1} << (r % kWordBits);
        }
        sink(std::span<Word>(scratch));
    }
}

} // namespace

// ---------------------------------------------------------------------------
// BitVector

void BitVector::set(std::size_t i, bool value) {
    const Word bit = Word{1} << (i % kWordBits);
    if (value)
        words_[i / kWordBits] |= bit;
    else
        words_[i / kWordBits] &= ~bit;
}

bool BitVector::any() const {
    return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
}

std::size_t BitVector::popcount() const {
    std::size_t c = 0;
    for (Word w : words_)
        c += std::popcount(w);
    return c;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_)
        throw DimensionError("bit vector length mismatch");
    xor_into(words_, other.words_);
    return *this;
}

// ---------------------------------------------------------------------------
// BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * words_for(cols), 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i);
    return m;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    Word& w = data_[r * stride_ + c / kWordBits];
    const Word bit = Word{1} << (c % kWordBits);
    w = value ? (w | bit) : (w & ~bit);
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto src = row(r);
        for (std::size_t wi = 0; wi < stride_; ++wi)
            for (Word w = src[wi]; w != 0; w &= w - 1)
                t.set(wi * kWordBits + std::countr_zero(w), r);
    }
    return t;
}

BitVector BitMatrix::multiply(const BitVector& v) const {
    if (v.size() != cols_)
        throw DimensionError("matrix-vector dimension mismatch");
    BitVector out(rows_);
    auto vw = v.words();
    for (std::size_t r = 0; r < rows_; ++r) {
        auto rw = row(r);
        Word acc = 0;
        for (std::size_t i = 0; i < stride_; ++i)
            acc ^= rw[i] & vw[i];
        if (std::popcount(acc) & 1)
            out.set(r);
    }
    return out;
}

std::size_t BitMatrix::rank() const {
    BitMatrix m = *this;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
        const std::size_t wi = c / kWordBits;
        const Word bit = Word{1} << (c % kWordBits);
        std::size_t pivot = rank;
        while (pivot < rows_ && !(m.data_[pivot * stride_ + wi] & bit))
            ++pivot;
        if (pivot == rows_)
            continue;
        if (pivot != rank)
            std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(), m.row(rank).begin());
        auto prow = m.row(rank);
        for (std::size_t r = rank + 1; r < rows_; ++r)
            if (m.data_[r * stride_ + wi] & bit)
                xor_into(m.row(r), prow, wi);
        ++rank;
    }
    return rank;
}

std::vector<BitVector> BitMatrix::kernel_basis() const {
    BitMatrix m = *this;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
        const std::size_t wi = c / kWordBits;
        const Word bit = Word{1} << (c % kWordBits);
        std::size_t pivot = rank;
        while (pivot < rows_ && !(m.data_[pivot * stride_ + wi] & bit))
            ++pivot;
        if (pivot == rows_)
            continue;
        if (pivot != rank)
            std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(), m.row(rank).begin());
        auto prow = m.row(rank);
        for (std::size_t r = 0; r < rows_; ++r)
            if (r != rank && (m.data_[r * stride_ + wi] & bit))
                xor_into(m.row(r), prow);
        pivot_cols.push_back(c);
        ++rank;
    }

    std::vector<bool> is_pivot(cols_, false);
    for (std::size_t c : pivot_cols)
        is_pivot[c] = true;

    std::vector<BitVector> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free])
            continue;
        BitVector v(cols_);
        v.set(free);
        // Reduced form: pivot variable of row i equals that row's entry in `free`.
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            if (m.get(i, free))
                v.set(pivot_cols[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// EchelonBasis

EchelonBasis::EchelonBasis(std::size_t dim)
    : dim_(dim), stride_(words_for(dim)), pivot_row_(dim, kNoRow) {}

bool EchelonBasis::insert(std::span<Word> v) {
    if (v.size() != stride_)
        throw DimensionError("echelon insert: vector length mismatch");
    std::size_t wi = 0;
    while (wi < stride_) {
        if (v[wi] == 0) {
            ++wi;
            continue;
        }
        const std::size_t p = wi * kWordBits + std::countr_zero(v[wi]);
        if (pivot_row_[p] == kNoRow) {
            pivot_row_[p] = static_cast<std::uint32_t>(rank_);
            rows_.insert(rows_.end(), v.begin(), v.end());
            ++rank_;
            return true;
        }
        xor_into(v, std::span<const Word>(rows_.data() + pivot_row_[p] * stride_, stride_), wi);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Multiplication maps

BitMatrix mult_map_matrix(const Element& lambda, int k) {
    const int n = lambda.ambient();
    if (k < 0 || k + lambda.degree() > n)
        throw DimensionError("multiplication map B_" + std::to_string(k) + " -> B_" +
                             std::to_string(k + lambda.degree()) + " is outside B(" + std::to_string(n) + ")");
    const std::size_t rows = binomial_u64(n, k + lambda.degree());
    const std::size_t cols = binomial_u64(n, k);
    BitMatrix m(rows, cols);
    std::vector<Word> scratch;
    std::size_t col = 0;
    for_each_product_column(lambda, k, scratch, [&](std::span<Word> v) {
        for (std::size_t wi = 0; wi < v.size(); ++wi)
            for (Word w = v[wi]; w != 0; w &= w - 1)
                m.set(wi * kWordBits + std::countr_zero(w), col);
        ++col;
    });
    return m;
}

std::size_t mult_map_rank(const Element& lambda, int k) {
    const int n = lambda.ambient();
    const int target = k + lambda.degree();
    if (k < 0 || k > n || target > n || lambda.is_zero())
        return 0;
    EchelonBasis basis(binomial_u64(n, target));
    std::vector<Word> scratch;
    const std::size_t cap = std::min<std::size_t>(binomial_u64(n, k), basis.dim());
    // Early exit once the image reaches its maximum possible dimension.
    for_each_product_column(lambda, k, scratch, [&](std::span<Word> v) {
        if (basis.rank() < cap)
            basis.insert(v);
    });
    return basis.rank();
}

BitMatrix stacked_ideal_matrix(std::span<const Element> gens, int k) {
    if (gens.empty())
        throw DomainError("stacked ideal matrix needs at least one generator");
    const int n = gens.front().ambient();
    if (k < 0 || k > n)
        throw DimensionError("degree out of range");
    std::size_t cols = 0;
    for (const auto& g : gens) {
        if (g.ambient() != n)
            throw DimensionError("generators live in different rings");
        if (g.degree() <= k)
            cols += binomial_u64(n, k - g.degree());
    }
    BitMatrix m(binomial_u64(n, k), cols);
    std::vector<Word> scratch;
    std::size_t col = 0;
    for (const auto& g : gens) {
        if (g.degree() > k)
            continue;
        for_each_product_column(g, k - g.degree(), scratch, [&](std::span<Word> v) {
            for (std::size_t wi = 0; wi < v.size(); ++wi)
                for (Word w = v[wi]; w != 0; w &= w - 1)
                    m.set(wi * kWordBits + std::countr_zero(w), col);
            ++col;
        });
    }
    return m;
}

std::size_t stacked_ideal_rank(std::span<const Element> gens, int k) {
    if (gens.empty())
        return 0;
    const int n = gens.front().ambient();
    if (k < 0 || k > n)
        return 0;
    EchelonBasis basis(binomial_u64(n, k));
    std::vector<Word> scratch;
    for (const auto& g : gens) {
        if (g.ambient() != n)
            throw DimensionError("generators live in different rings");
        if (g.degree() > k || g.is_zero())
            continue;
        for_each_product_column(g, k - g.degree(), scratch, [&](std::span<Word> v) {
            if (!basis.full())
                basis.insert(v);
        });
        if (basis.full())
            break;
    }
    return basis.rank();
}

} // namespace semireg::gf2
