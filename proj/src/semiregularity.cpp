#include "semireg/semiregularity.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <string>

#include "semireg/errors.hpp"
#include "semireg/gf2_matrix.hpp"

namespace semireg {

namespace {

using series::BigInt;

// Rank of I ∩ B_k after checking that the elimination fits the budget. The
// echelon basis stores at most min(C(n,k), columns) rows of C(n,k) bits.
std::uint64_t checked_rank(std::span<const Element> gens, int n, int k, const HilbertOptions& opts) {
    if (k < 0 || k > n)
        return 0;
    unsigned __int128 cols = 0;
    for (const auto& g : gens)
        if (g.degree() <= k)
            cols += binomial_u64(n, k - g.degree());
    const unsigned __int128 dim = binomial_u64(n, k);
    const unsigned __int128 bits = dim * std::min(dim, cols);
    if (bits > opts.max_matrix_bits)
        throw ResourceError("degree " + std::to_string(k) + " of B(" + std::to_string(n) +
                            ") needs an elimination of " + std::to_string(static_cast<std::uint64_t>(dim)) +
                            " x " + std::to_string(static_cast<std::uint64_t>(std::min(dim, cols))) +
                            " bits, over the configured budget");
    return gf2::stacked_ideal_rank(gens, k);
}

nlohmann::json bigint_json(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return v.convert_to<std::int64_t>();
    return v.str();
}

} // namespace

// ---------------------------------------------------------------------------
// IdealSpec

IdealSpec::IdealSpec(std::vector<Element> gens) : gens_(std::move(gens)) {
    if (gens_.empty())
        throw DomainError("an ideal needs at least one generator");
    n_ = gens_.front().ambient();
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const auto& g = gens_[i];
        if (g.ambient() != n_)
            throw DimensionError("generator " + std::to_string(i + 1) + " lives in B(" +
                                 std::to_string(g.ambient()) + "), expected B(" + std::to_string(n_) + ")");
        if (g.is_zero())
            throw DomainError("generator " + std::to_string(i + 1) + " is zero");
        if (g.degree() < 1)
            throw DomainError("generator " + std::to_string(i + 1) + " has degree 0");
    }
}

series::DegreeVector IdealSpec::degrees() const {
    std::vector<int> d;
    d.reserve(gens_.size());
    for (const auto& g : gens_)
        d.push_back(g.degree());
    return series::DegreeVector(std::move(d));
}

// ---------------------------------------------------------------------------
// Hilbert series and semi-regularity

HilbertData hilbert_series(const IdealSpec& ideal, const HilbertOptions& opts) {
    const int n = ideal.ambient();
    HilbertData out;
    bool vanished = false;
    for (int k = 0; k <= n; ++k) {
        const std::uint64_t full = binomial_u64(n, k);
        // Strong grading: once I contains B_k it contains every later piece.
        const std::uint64_t rank = vanished ? full : checked_rank(ideal.gens(), n, k, opts);
        out.ranks.push_back(rank);
        out.dims.push_back(full - rank);
        if (!vanished && rank == full) {
            vanished = true;
            out.index = static_cast<std::size_t>(k);
        }
    }
    if (!vanished) {
        out.index = static_cast<std::size_t>(n) + 1;
        out.dims.push_back(0);
        out.ranks.push_back(0);
    }
    return out;
}

SemiregularVerdict is_semiregular(const IdealSpec& ideal, const HilbertOptions& opts) {
    const int n = ideal.ambient();
    const auto t = series::T_series(ideal.degrees(), n, static_cast<std::size_t>(n) + 2);
    SemiregularVerdict v;
    v.t_index = *series::series_index(t); // exists below n + 2
    for (std::size_t k = 0; k <= v.t_index; ++k) {
        const BigInt expected = k < v.t_index ? t.at(k) : BigInt(0);
        const int kk = static_cast<int>(k);
        const std::uint64_t full = binomial_u64(n, kk);
        const std::uint64_t rank = checked_rank(ideal.gens(), n, kk, opts);
        const std::uint64_t dim = full - rank;
        v.ranks.push_back(rank);
        v.dims.push_back(dim);
        v.t_coeffs.push_back(expected);
        if (BigInt(dim) != expected) {
            v.first_divergence = k;
            v.gap_sign = BigInt(dim) > expected ? 1 : -1;
            return v;
        }
    }
    v.semiregular = true;
    return v;
}

bool is_D_semiregular(const IdealSpec& ideal, int D, const HilbertOptions& opts) {
    const int n = ideal.ambient();
    int max_d = 0;
    for (const auto& g : ideal.gens())
        max_d = std::max(max_d, g.degree());
    // For d > n + max_d every term of the identity is a dimension of a zero space.
    const int top = std::min(D, n + max_d + 1);
    if (top <= 0)
        return true;

    // s[i][d] = dim (B / (g_1..g_i))_d for d < top; s[0] is B itself.
    std::vector<std::vector<std::int64_t>> s(ideal.size() + 1, std::vector<std::int64_t>(top, 0));
    for (int d = 0; d < top; ++d)
        s[0][d] = static_cast<std::int64_t>(binomial_u64(n, std::min(d, n + 1)));
    for (std::size_t i = 1; i <= ideal.size(); ++i) {
        auto prefix = ideal.gens().first(i);
        for (int d = 0; d < top && d <= n; ++d)
            s[i][d] = static_cast<std::int64_t>(binomial_u64(n, d) - checked_rank(prefix, n, d, opts));
    }
    auto at = [&](std::size_t i, int d) -> std::int64_t { return d < 0 ? 0 : s[i][d]; };
    for (std::size_t i = 1; i <= ideal.size(); ++i) {
        const int di = ideal[i - 1].degree();
        for (int d = 0; d < top; ++d) {
            // Kernel of multiplication by g_i on B/I_{i-1} beyond the part
            // coming from (g_i) itself.
            const std::int64_t excess = at(i, d - di) - at(i - 1, d) + at(i, d);
            if (excess != 0)
                return false;
        }
    }
    return true;
}

std::size_t ideal_index(const IdealSpec& ideal, const HilbertOptions& opts) {
    return hilbert_series(ideal, opts).index;
}

std::optional<int> first_fall_degree(const Element& lambda) {
    if (lambda.is_zero() || lambda.degree() < 1)
        throw DomainError("first fall degree needs a nonzero element of positive degree");
    const int n = lambda.ambient();
    const int d = lambda.degree();
    for (int e = 0; e <= n; ++e) {
        const std::uint64_t kernel = binomial_u64(n, e) - gf2::mult_map_rank(lambda, e);
        // lambda^2 = 0, so lambda * B_{e-d} always lies in the kernel.
        const std::uint64_t trivial = e >= d ? gf2::mult_map_rank(lambda, e - d) : 0;
        if (kernel > trivial)
            return e + d;
    }
    return std::nullopt;
}

bool ffd_vs_index_veto(const IdealSpec& ideal, const HilbertOptions& opts) {
    const std::size_t index = ideal_index(ideal, opts);
    for (const auto& g : ideal.gens()) {
        const auto f = first_fall_degree(g);
        if (f && static_cast<std::size_t>(*f) < index)
            return true;
    }
    return false;
}

int quadratic_rank(const Element& q) {
    if (q.is_zero() || q.degree() != 2)
        throw DomainError("quadratic rank needs a nonzero element of degree 2");
    const int n = q.ambient();
    gf2::BitMatrix form(n, n);
    for (Mask m : q.support()) {
        const int i = std::countr_zero(m);
        const int j = std::countr_zero(m & (m - 1));
        form.set(i, j);
        form.set(j, i);
    }
    return static_cast<int>(form.rank());
}

int predicted_index_if_semiregular(int n, int d) {
    if (d < 2 || n < d)
        throw DomainError("prediction needs 2 <= d <= n");
    if (n > 3 * d)
        throw InapplicableError("no semi-regular element of degree " + std::to_string(d) + " exists in B(" +
                                std::to_string(n) + ") since n > 3d");
    if (n == 3 * d)
        return 2 * d + 1;
    return (n + d + 1) / 2;
}

bool sigma_semiregular_predicted(int d, int n) {
    if (d < 1)
        throw DomainError("sigma degree must be >= 1");
    if (n < d)
        throw InapplicableError("sigma_" + std::to_string(d) + " vanishes in B(" + std::to_string(n) + ")");
    if (d == 1)
        return true;
    const int m = std::countr_zero(static_cast<unsigned>(d));
    const int l = d >> m;
    const int reach = 1 << (m + 1);
    return l > 1 ? n <= d + reach - 1 : n <= d + reach;
}

bool semiregular_via_maps(const Element& lambda) {
    if (lambda.is_zero() || lambda.degree() < 1)
        throw DomainError("needs a nonzero element of positive degree");
    const int n = lambda.ambient();
    const int d = lambda.degree();
    if (n > 3 * d)
        throw InapplicableError("map criterion needs deg >= n/3; use is_semiregular");
    auto injective = [&](int src) { return src < 0 || gf2::mult_map_rank(lambda, src) == binomial_u64(n, src); };
    auto surjective = [&](int src) {
        const int dst = src + d;
        return dst > n || gf2::mult_map_rank(lambda, src) == binomial_u64(n, dst);
    };
    if (n < 3 * d) {
        const int D = (n + d + 1) / 2;
        return injective(D - 1 - d) && surjective(D - d);
    }
    // n = 3d: the only kernel allowed at degree d is lambda itself.
    return injective(d - 1) && gf2::mult_map_rank(lambda, d) + 1 == binomial_u64(n, d) && surjective(d + 1);
}

bool is_trivially_semiregular(const IdealSpec& ideal) {
    const int n = ideal.ambient();
    std::map<int, std::vector<Element>> by_degree;
    for (const auto& g : ideal.gens())
        by_degree[g.degree()].push_back(g);
    // Only the lowest degree can qualify: a higher spanning group would leave
    // a generator of smaller degree.
    const auto& [k, group] = *by_degree.begin();
    return gf2::stacked_ideal_rank(group, k) == binomial_u64(n, k);
}

nlohmann::json decision_report(const IdealSpec& ideal, const HilbertOptions& opts) {
    const auto verdict = is_semiregular(ideal, opts);
    const auto hs = hilbert_series(ideal, opts);
    nlohmann::json j;
    j["verdict"] = verdict.semiregular;
    j["index"] = hs.index;
    j["series_index"] = verdict.t_index;
    j["hilbert_dims"] = hs.dims;
    nlohmann::json t = nlohmann::json::array();
    const auto ts = series::T_series(ideal.degrees(), ideal.ambient(), hs.dims.size());
    for (std::size_t k = 0; k < hs.dims.size(); ++k)
        t.push_back(k < verdict.t_index ? bigint_json(ts.at(k)) : nlohmann::json(0));
    j["t_coeffs"] = t;
    j["first_divergence"] = verdict.first_divergence ? nlohmann::json(*verdict.first_divergence) : nlohmann::json();
    if (verdict.first_divergence)
        j["gap_sign"] = verdict.gap_sign;
    nlohmann::json ffd = nlohmann::json::array();
    for (const auto& g : ideal.gens()) {
        const auto f = first_fall_degree(g);
        ffd.push_back(f ? nlohmann::json(*f) : nlohmann::json("inf"));
    }
    j["ffd"] = ffd;
    j["ranks_used"] = hs.ranks;
    return j;
}

} // namespace semireg
