#pragma once

// Reproduction harness: seeded Monte-Carlo proportions, exhaustive quadratic
// censuses, the sigma classification table and non-existence threshold
// scans. Every cell says whether it was sampled, enumerated or forced by a
// theorem, and results never depend on the number of worker threads.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "semireg/boolean_ring.hpp"
#include "semireg/series.hpp"

namespace semireg::experiments {

using series::BigInt;
using series::Rational;

enum class CellMode { sampled, exhaustive, by_theorem };
std::string to_string(CellMode mode);

struct RunOptions {
    /// Worker threads; 0 means SEMIREG_THREADS, then hardware concurrency.
    int threads = 0;
    /// Progress lines go here when set.
    std::ostream* progress = nullptr;
};

int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. If any call
/// throws, the exception from the smallest failing index is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Independent engine for one sample of one cell.
Rng substream(std::uint64_t seed, int n, int m, int d, std::uint64_t sample);

struct ProportionCell {
    int n = 0;
    int m = 0;
    int d = 0;
    CellMode mode = CellMode::sampled;
    BigInt trials = 0;
    BigInt successes = 0;
    /// Index of T_{d,n} and its coefficient there (often 0, sometimes negative).
    int t_index = 0;
    BigInt t_at_index = 0;

    double estimate() const;
};

/// `samples` sequences of m independent nonzero degree-d elements, each
/// tested with is_semiregular. Throws DomainError unless 1 <= d <= n and
/// samples, m >= 1.
ProportionCell estimate_proportion(int n, int m, int d, int samples, std::uint64_t seed,
                                   const RunOptions& opts = {});

/// Value every sequence of this shape must have, when a theorem fixes it:
/// false when some generator's first fall degree bound lies below
/// tau_d(n) (or n > 3d for a single element of degree >= 2), true for
/// a single linear element or a single element of degree n-1 or n.
std::optional<bool> forced_verdict(int n, int m, int d);

/// Number of alternating n x n matrices over F2 of rank 2r, i.e. of
/// quadratics in B(n) of rank 2r.
BigInt quadratic_rank_count(int n, int r);

struct RankClass {
    int rank = 0;
    BigInt count = 0;
    bool semiregular = false;
    /// Hilbert function of B/(q) shared by every member of the class.
    std::vector<std::uint64_t> hilbert_dims;
    /// False if some enumerated member disagreed with the class verdict or
    /// Hilbert function (never expected; reported rather than hidden).
    bool uniform = true;
};

struct QuadraticCensus {
    int n = 0;
    CellMode mode = CellMode::exhaustive;
    BigInt population = 0;
    BigInt semiregular = 0;
    std::vector<RankClass> classes;

    Rational proportion() const;
};

/// n <= 6: enumerates every nonzero quadratic. n >= 7: rank classes by
/// orbit counting, one representative x1x2 + ... + x_{2r-1}x_{2r} checked
/// per class when n <= representative_limit, and the proportion 0 by the
/// n > 3d theorem (mode by_theorem).
QuadraticCensus quadratic_census(int n, const RunOptions& opts = {}, int representative_limit = 14);

/// Orbit-count census for any n >= 2 with a direct check of each
/// representative; used to scan n = 7..12 without enumeration.
QuadraticCensus quadratic_rank_classes(int n, const RunOptions& opts = {});

/// A proportion as printed in a published table, next to the exact value.
struct PublishedValue {
    std::string source;
    std::string printed;
};

struct CensusDiscrepancy {
    int n = 0;
    Rational exact;
    std::vector<PublishedValue> published;
    /// True when the printed values disagree with each other or with the
    /// exact value rounded to the printed precision.
    bool flagged = false;
    std::string note;
};

/// Published two-digit proportions of semi-regular quadratics (n = 4, 5, 6)
/// from the summary table and from the census derivation, compared with
/// the exact census.
std::vector<CensusDiscrepancy> census_discrepancies(const RunOptions& opts = {});

struct SigmaCell {
    int d = 0;
    int n = 0;
    bool direct = false;
    bool predicted = false;
};

/// Direct test of sigma_{d,n} for 1 <= d <= d_max, d <= n <= n_max.
std::vector<SigmaCell> sigma_table(int n_max, int d_max, const RunOptions& opts = {});

/// pi(n, m, 2) grid in the layout of the quadratic-sequence table.
std::vector<ProportionCell> proportion_table(int n_min, int n_max, int m_min, int m_max, int d, int samples,
                                             std::uint64_t seed, const RunOptions& opts = {});

/// pi(n, 1, d) for d_min <= d <= min(n, d_max), n_min <= n <= n_max.
/// Theorem-forced cells report the whole population.
std::vector<ProportionCell> single_element_grid(int n_min, int n_max, int d_min, int d_max, int samples,
                                                std::uint64_t seed, const RunOptions& opts = {});

struct ThresholdRow {
    int n = 0;
    int tau = 0;
    Rational ffd_bound;       // (n + d_j + 2) / 2
    bool tau_exceeds = false; // tau > ffd_bound: no semi-regular sequence
    bool above_certificate = false;
    Rational linear_bound;    // r n + c
    std::optional<ProportionCell> empirical;
};

struct ThresholdReport {
    series::DegreeVector degrees{std::vector<int>{2}};
    series::NonexistenceThreshold certificate;
    std::vector<ThresholdRow> rows;
    /// Rows at or above the certificate threshold where tau does not exceed
    /// the bound, or where tau falls below r n + c (both must stay empty).
    std::vector<int> certificate_violations;
};

/// Rows for n_min <= n <= n_max. Empirical counts are attached for
/// n <= empirical_limit: exact rank classes for a single quadratic,
/// otherwise `samples` draws.
ThresholdReport threshold_scan(const series::DegreeVector& d, int n_min, int n_max, int empirical_limit,
                               int samples, std::uint64_t seed, const RunOptions& opts = {});

// Output

nlohmann::json to_json(const ProportionCell& cell);
nlohmann::json to_json(const QuadraticCensus& census);
nlohmann::json to_json(const CensusDiscrepancy& record);
nlohmann::json to_json(const SigmaCell& cell);
nlohmann::json to_json(const ThresholdReport& report);

/// `n,m,d,mode,trials,successes,estimate` with a header line.
void write_csv(std::ostream& out, const std::vector<ProportionCell>& cells);

/// JSON number when it fits in 64 bits, decimal string otherwise.
nlohmann::json bigint_to_json(const BigInt& v);

} // namespace semireg::experiments
