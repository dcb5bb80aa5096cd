#pragma once

// Hilbert series of graded ideals in B(n) and the semi-regularity tests built
// on them: full series comparison, D-semi-regularity, first fall degree,
// quadratic rank and the closed-form predictions for single elements.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "semireg/boolean_ring.hpp"
#include "semireg/series.hpp"

namespace semireg {

/// Homogeneous generators of an ideal, all nonzero of degree >= 1 in the
/// same ring. Duplicates are allowed.
class IdealSpec {
  public:
    /// Throws DomainError on an empty list, a zero generator or a degree-0
    /// generator, and DimensionError on mixed rings.
    explicit IdealSpec(std::vector<Element> gens);

    int ambient() const { return n_; }
    std::size_t size() const { return gens_.size(); }
    std::span<const Element> gens() const { return gens_; }
    const Element& operator[](std::size_t i) const { return gens_[i]; }
    series::DegreeVector degrees() const;

  private:
    int n_ = 1;
    std::vector<Element> gens_;
};

struct HilbertOptions {
    /// Largest allowed C(n, k) * min(C(n, k), product columns) at one degree,
    /// i.e. the bits an elimination at that degree may store.
    std::uint64_t max_matrix_bits = std::uint64_t{1} << 34;
};

struct HilbertData {
    /// dims[k] = dim (B/I)_k for k = 0..n, then a trailing 0 if none earlier.
    std::vector<std::uint64_t> dims;
    /// ranks[k] = dim (I ∩ B_k).
    std::vector<std::uint64_t> ranks;
    /// First k with dims[k] = 0.
    std::size_t index = 0;
};

/// Full Hilbert function of B/I. Degrees past the index are filled with 0
/// without further rank work. Throws ResourceError naming the degree whose
/// matrix would exceed the budget.
HilbertData hilbert_series(const IdealSpec& ideal, const HilbertOptions& opts = {});

struct SemiregularVerdict {
    bool semiregular = false;
    /// dims[k] for every degree actually examined.
    std::vector<std::uint64_t> dims;
    std::vector<std::uint64_t> ranks;
    /// Coefficients of [T_{d,n}] followed by zeros, over the same range.
    std::vector<series::BigInt> t_coeffs;
    std::size_t t_index = 0;
    std::optional<std::size_t> first_divergence;
    /// sign(dims - t) at the divergence: +1 means B/I is larger than predicted.
    int gap_sign = 0;
};

/// Compares the Hilbert function of B/I with [T_{d,n}] degree by degree,
/// stopping at the first disagreement or once degree ind(T) has been
/// checked to vanish.
SemiregularVerdict is_semiregular(const IdealSpec& ideal, const HilbertOptions& opts = {});

/// k_i(d - d_i) = 0 for every prefix i and every d < D, i.e. the dimension
/// identity s_i(d) = s_{i-1}(d) - s_i(d - d_i) holds for the prefix Hilbert
/// functions s_i below D.
bool is_D_semiregular(const IdealSpec& ideal, int D, const HilbertOptions& opts = {});

std::size_t ideal_index(const IdealSpec& ideal, const HilbertOptions& opts = {});

/// Smallest k = deg g + d with g * lambda = 0 and g outside (lambda), or
/// nullopt if there is none (every k up to n + d checked).
std::optional<int> first_fall_degree(const Element& lambda);

/// True when some generator has first fall degree strictly below ind(I).
bool ffd_vs_index_veto(const IdealSpec& ideal, const HilbertOptions& opts = {});

/// Rank of the alternating form attached to a quadratic: the number of
/// independent linear forms needed to write q. Throws DomainError unless
/// q is a nonzero element of degree 2.
int quadratic_rank(const Element& q);

/// ceil((n+d)/2) for n < 3d and 2d+1 for n = 3d. Throws DomainError for
/// d < 2 or n < d, InapplicableError for n > 3d.
int predicted_index_if_semiregular(int n, int d);

/// Closed-form classification of sigma_{d,n}. Throws InapplicableError for
/// n < d and DomainError for d < 1.
bool sigma_semiregular_predicted(int d, int n);

/// Injectivity / surjectivity test at the two or three critical degrees for
/// deg lambda = d >= n/3. Throws InapplicableError when n > 3d.
bool semiregular_via_maps(const Element& lambda);

/// Sufficient condition: some equal-degree group of generators spans its
/// whole graded piece B_k and every other generator has degree >= k.
bool is_trivially_semiregular(const IdealSpec& ideal);

/// {verdict, index, hilbert_dims, t_coeffs, first_divergence, ffd, ranks_used}.
nlohmann::json decision_report(const IdealSpec& ideal, const HilbertOptions& opts = {});

} // namespace semireg
