#pragma once

// Exact integer power series in z: T_{d,n}(z) = (1+z)^n / prod_i (1+z^{d_i}),
// series indices and truncations, binomial parity, and the rational linear
// lower-bound certificates for tau_d(n) = ind T_{d,n}(z).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace semireg::series {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class DegreeVector {
  public:
    /// Throws DomainError if empty or any entry is < 1.
    explicit DegreeVector(std::vector<int> degrees);
    /// Parses "2" or "2,2,3".
    static DegreeVector parse(std::string_view text);

    std::size_t size() const { return d_.size(); }
    int operator[](std::size_t i) const { return d_[i]; }
    std::span<const int> values() const { return d_; }
    auto begin() const { return d_.begin(); }
    auto end() const { return d_.end(); }
    std::string to_string() const;

    friend bool operator==(const DegreeVector&, const DegreeVector&) = default;

  private:
    std::vector<int> d_;
};

/// Power series with an explicit horizon. A truncated series knows exactly
/// the coefficients below its horizon and reading further throws
/// InconclusiveError. A polynomial is exact everywhere: coefficients past the
/// stored ones are zero.
class IntSeries {
  public:
    static IntSeries truncated(std::vector<BigInt> coeffs);
    static IntSeries polynomial(std::vector<BigInt> coeffs);

    std::size_t horizon() const { return coeffs_.size(); }
    bool is_polynomial() const { return polynomial_; }
    BigInt at(std::size_t j) const;
    std::span<const BigInt> coefficients() const { return coeffs_; }

    friend bool operator==(const IntSeries&, const IntSeries&) = default;

  private:
    IntSeries(std::vector<BigInt> coeffs, bool polynomial)
        : coeffs_(std::move(coeffs)), polynomial_(polynomial) {}

    std::vector<BigInt> coeffs_;
    bool polynomial_ = false;
};

BigInt binom(std::int64_t n, std::int64_t k);

/// C(n, k) mod 2 by halving: 0 when n is even and k odd, else the parity of
/// C(floor(n/2), floor(k/2)).
int binom_parity(std::uint64_t n, std::uint64_t k);
/// Lucas form of the same quantity: 1 iff the bits of k are a subset of n's.
int binom_parity_submask(std::uint64_t n, std::uint64_t k);

/// Coefficient of z^k in (1+z)^n / (1+z^d): sum_j (-1)^j C(n, k - j d).
BigInt gamma(std::int64_t n, std::int64_t k, std::int64_t d);

/// Coefficients t_{d,n}(j), j < horizon. Expands (1+z)^n and divides by each
/// (1+z^{d_i}) through t_i(j) = t_{i-1}(j) - t_i(j - d_i).
IntSeries T_series(const DegreeVector& d, int n, std::size_t horizon);

/// Product, exact below the smaller horizon (or exact if both are polynomials).
IntSeries multiply(const IntSeries& u, const IntSeries& v);
/// s(z) * (1 + z^d) and s(z) / (1 + z^d), keeping s's horizon.
IntSeries mul_one_plus_zd(const IntSeries& s, int d);
IntSeries div_one_plus_zd(const IntSeries& s, int d);

/// First t with coefficient <= 0. For a truncated series whose stored
/// coefficients are all positive the index is unknown and nullopt is
/// returned; a polynomial is zero past its stored coefficients.
std::optional<std::size_t> series_index(const IntSeries& s);

/// [s]_D: the polynomial of coefficients below D. Throws InconclusiveError if
/// D exceeds the horizon of a truncated series.
IntSeries truncate(const IntSeries& s, std::size_t D);
/// [s] = [s]_{ind s}. Throws InconclusiveError if the index is not resolved
/// within the horizon.
IntSeries truncate_at_index(const IntSeries& s);

/// Checks [uv]_D = [[u]_D [v]_D]_D = [u [v]_D]_D, and that replacing v by any
/// w with [w]_D = [v]_D leaves [uv]_D unchanged.
bool truncation_algebra_check(const IntSeries& u, const IntSeries& v, std::size_t D);

/// tau_d(n) = ind T_{d,n}(z). Always finite and at most n + 1.
int tau(const DegreeVector& d, int n);

/// A witness N with slope (tau_(d)(N) - d) / N > 1/2.
struct SlopeCertificate {
    int degree = 0;
    int N = 0;
    int tau_at_N = 0;
    Rational slope;
};

/// Smallest N <= search_limit with (tau_(d)(N) - d)/N > 1/2. Throws
/// InconclusiveError if none is found.
SlopeCertificate single_degree_slope_certificate(int d, int search_limit = 100000);

/// tau_d(n) >= slope * n + intercept for every n >= 0.
struct LinearBound {
    Rational slope;
    Rational intercept;
    /// Degrees in the order they were folded in (descending slope).
    std::vector<SlopeCertificate> chain;
    /// Constant after each fold; the last entry equals `intercept`.
    std::vector<Rational> constants;
};

/// Builds (r, c) for tau_d. The first degree uses the superadditive growth
/// bound tau(n + N) >= tau(n) + (tau(N) - d) with base point n0 = 1; each
/// further degree of slope s <= r folds in as c' = min{c - 2 s N, -s N, 0}.
/// `slopes[i]` must certify degree d[i]. Throws CertificateError if a slope
/// is <= 1/2 or does not match its degree.
LinearBound linear_lower_bound(const DegreeVector& d, std::span<const SlopeCertificate> slopes);

struct PositivityViolation {
    int n = 0;
    int d = 0;
    int k = 0;
    BigInt value;
};

struct PositivityReport {
    int n_max = 0;
    int d_max = 0;
    std::size_t checked = 0;
    std::vector<PositivityViolation> violations;
    /// Smallest n0 such that no violation has n >= n0 (within the scan).
    int holds_from_n = 0;
};

/// Scans gamma(2n, k, d) > 0 for 0 <= n <= n_max, 1 <= d <= d_max,
/// 0 <= k <= n + floor(d/2), recording every failure.
PositivityReport gamma_positivity_check(int n_max, int d_max);

struct NonexistenceThreshold {
    int N = 0;
    int critical_degree = 0; // smallest d_j >= 2
    LinearBound bound;
};

/// Smallest N with r n + c > n/2 + d_j/2 + 1 for every n >= N, where (r, c)
/// comes from linear_lower_bound with certificates from
/// single_degree_slope_certificate. Throws InapplicableError when every d_j
/// is 1 (linear sequences are semi-regular iff independent).
NonexistenceThreshold nonexistence_threshold(const DegreeVector& d, int search_limit = 100000);
NonexistenceThreshold nonexistence_threshold(const DegreeVector& d, const LinearBound& bound);

std::string to_string(const Rational& q);
/// Decimal strings, one per stored coefficient.
nlohmann::json to_json(const IntSeries& s);

} // namespace semireg::series
