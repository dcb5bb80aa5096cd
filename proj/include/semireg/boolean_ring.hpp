#pragma once

// Arithmetic in the Boolean quotient ring B(n) = F2[X1..Xn]/(X1^2..Xn^2).
//
// A squarefree monomial is a bitmask over the variables (bit i <-> x_{i+1}).
// Homogeneous elements are sorted supports of equal-degree monomials. Within
// one degree, numeric order of the masks is the colexicographic order of the
// underlying subsets, which is also the order used for matrix coordinates.

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace semireg {

using Mask = std::uint64_t;
using Rng = std::mt19937_64;

inline constexpr int kMaxVariables = 64;

/// C(n, k) for 0 <= n <= 64 from a precomputed Pascal table; 0 when k is out
/// of range. Every entry fits in 64 bits.
std::uint64_t binomial_u64(int n, int k);

/// Mask with the lowest n bits set.
constexpr Mask low_bits(int n) {
    return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

class Monomial {
  public:
    /// Throws DimensionError if n is out of [1, 64] or vars uses bits >= n.
    Monomial(int n, Mask vars);

    static Monomial one(int n) { return Monomial(n, 0); }
    /// x_{index+1}; index is 0-based.
    static Monomial variable(int n, int index);
    /// Build from 1-based variable indices, e.g. {1, 2} -> x1*x2.
    static Monomial from_indices(int n, std::span<const int> one_based);

    int ambient() const { return n_; }
    Mask vars() const { return vars_; }
    int degree() const;
    bool divisible_by(int index) const { return (vars_ >> index) & 1U; }

    /// 1-based indices of the variables dividing this monomial, ascending.
    std::vector<int> indices() const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;

  private:
    int n_;
    Mask vars_;
};

/// Product in B(n); std::nullopt is the zero of the ring (a repeated variable).
std::optional<Monomial> monomial_mul(const Monomial& a, const Monomial& b);

/// Homogeneous element of B(n) with F2 coefficients.
///
/// The zero element keeps a nominal degree but compares equal to every other
/// zero of the same ring, so folds over mixed-degree sums start cleanly.
class Element {
  public:
    static Element zero(int n, int degree = 0);
    /// Throws DomainError on mixed degrees or duplicate monomials.
    static Element from_support(int n, int degree, std::vector<Mask> support);
    static Element from_monomial(const Monomial& m);

    int ambient() const { return n_; }
    int degree() const { return degree_; }
    bool is_zero() const { return support_.empty(); }
    std::size_t size() const { return support_.size(); }
    std::span<const Mask> support() const { return support_; }
    std::vector<Monomial> monomials() const;

    friend bool operator==(const Element& a, const Element& b);

  private:
    Element(int n, int degree, std::vector<Mask> support)
        : n_(n), degree_(degree), support_(std::move(support)) {}

    int n_ = 1;
    int degree_ = 0;
    std::vector<Mask> support_;
};

/// Symmetric difference of supports. Throws GradingError when both operands
/// are nonzero with different degrees and DimensionError on mismatched n.
Element element_add(const Element& a, const Element& b);
/// Bilinear product; terms sharing a variable vanish and pairs cancel mod 2.
Element element_mul(const Element& a, const Element& b);

inline Element operator+(const Element& a, const Element& b) { return element_add(a, b); }
inline Element operator*(const Element& a, const Element& b) { return element_mul(a, b); }

/// Elementary symmetric polynomial sigma_d(x1..xn). For d > n the result is
/// the zero element with nominal degree d; sigma(0, n) is 1.
Element sigma(int d, int n);
/// sigma_d restricted to the variables in `vars`, as an element of B(n).
Element sigma_on(int d, int n, Mask vars);

/// Expands sigma_d(x1..xn) = sum_i sigma_{d-i}(x1..xk) sigma_i(x_{k+1}..xn)
/// with element_mul and reports whether both sides agree.
bool sigma_split_identity_check(int d, int n, int k);

/// Generators of Ann(m) = (var(m)). The zero monomial (nullopt) is
/// annihilated by the whole ring, which is flagged instead.
struct AnnihilatorGenerators {
    bool whole_ring = false;
    std::vector<Monomial> variables;
};
AnnihilatorGenerators monomial_annihilator_basis(const std::optional<Monomial>& m);

/// Uniform nonzero homogeneous element of degree d: each monomial is kept
/// with probability 1/2 (one raw engine bit each), resampling the all-zero
/// outcome. Throws ResourceError if C(n, d) exceeds 2^26.
Element random_element(int n, int d, Rng& rng);

/// Colex ranking of the degree-k monomials of B(n) via the combinatorial
/// number system: rank(m) = sum_i C(p_i, i+1) over the set bit positions
/// p_0 < p_1 < ... of m.
class GradedBasisIndex {
  public:
    GradedBasisIndex(int n, int k);

    int ambient() const { return n_; }
    int degree() const { return k_; }
    std::uint64_t size() const { return size_; }

    std::uint64_t rank(Mask vars) const;
    std::uint64_t rank(const Monomial& m) const;
    Monomial unrank(std::uint64_t index) const;

  private:
    int n_;
    int k_;
    std::uint64_t size_;
};

/// Unchecked colex rank of a mask among masks of the same popcount.
std::uint64_t colex_rank(Mask vars);

/// All degree-k masks in B(n), in colex order.
std::vector<Mask> monomials_of_degree(int n, int k);

/// Text form `d:n:{j1.j2,k1.k2}` with 1-based indices. The unit monomial of
/// degree 0 is written as `0`, so `0:n:{0}` is 1 and `0:n:{}` is zero.
std::string to_text(const Element& e);
Element parse_element(std::string_view text);

/// JSON form {"n":int,"degree":int,"support":[[int,...],...]}.
nlohmann::json to_json(const Element& e);
Element element_from_json(const nlohmann::json& j);

} // namespace semireg
