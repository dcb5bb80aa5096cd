#include "semireg/series.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "semireg/errors.hpp"

namespace semireg::series {

// ---------------------------------------------------------------------------
// DegreeVector

DegreeVector::DegreeVector(std::vector<int> degrees) : d_(std::move(degrees)) {
    if (d_.empty())
        throw DomainError("degree vector must be nonempty");
    for (int d : d_)
        if (d < 1)
            throw DomainError("generator degrees must be >= 1");
}

DegreeVector DegreeVector::parse(std::string_view text) {
    std::vector<int> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        std::string_view tok = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        while (!tok.empty() && tok.front() == ' ')
            tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ')
            tok.remove_suffix(1);
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ParseError("invalid degree '" + std::string(tok) + "'");
        out.push_back(v);
    }
    try {
        return DegreeVector(std::move(out));
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

std::string DegreeVector::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < d_.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(d_[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// IntSeries

IntSeries IntSeries::truncated(std::vector<BigInt> coeffs) { return IntSeries(std::move(coeffs), false); }

IntSeries IntSeries::polynomial(std::vector<BigInt> coeffs) { return IntSeries(std::move(coeffs), true); }

BigInt IntSeries::at(std::size_t j) const {
    if (j < coeffs_.size())
        return coeffs_[j];
    if (polynomial_)
        return 0;
    throw InconclusiveError("coefficient z^" + std::to_string(j) + " is beyond the computed horizon " +
                            std::to_string(coeffs_.size()));
}

// ---------------------------------------------------------------------------
// Binomials

BigInt binom(std::int64_t n, std::int64_t k) {
    if (n < 0)
        throw DomainError("binom requires n >= 0");
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

int binom_parity(std::uint64_t n, std::uint64_t k) {
    while (k != 0) {
        if (k > n)
            return 0;
        if (n % 2 == 0 && k % 2 == 1)
            return 0;
        n /= 2;
        k /= 2;
    }
    return 1;
}

int binom_parity_submask(std::uint64_t n, std::uint64_t k) { return (k & n) == k ? 1 : 0; }

BigInt gamma(std::int64_t n, std::int64_t k, std::int64_t d) {
    if (d < 1)
        throw DomainError("gamma requires d >= 1");
    if (k < 0)
        return 0;
    BigInt sum = 0;
    for (std::int64_t j = 0; j <= k / d; ++j) {
        if (j % 2 == 0)
            sum += binom(n, k - j * d);
        else
            sum -= binom(n, k - j * d);
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Series arithmetic

IntSeries T_series(const DegreeVector& d, int n, std::size_t horizon) {
    if (n < 0)
        throw DomainError("T_series requires n >= 0");
    if (horizon < 1)
        throw DomainError("horizon must be >= 1");
    std::vector<BigInt> t(horizon);
    // Row n of Pascal's triangle, built incrementally.
    BigInt c = 1;
    for (std::size_t j = 0; j < horizon && j <= static_cast<std::size_t>(n); ++j) {
        t[j] = c;
        c *= n - static_cast<int>(j);
        c /= static_cast<int>(j) + 1;
    }
    for (int di : d)
        for (std::size_t j = di; j < horizon; ++j)
            t[j] -= t[j - di];
    return IntSeries::truncated(std::move(t));
}

IntSeries multiply(const IntSeries& u, const IntSeries& v) {
    const bool poly = u.is_polynomial() && v.is_polynomial();
    std::size_t h = 0;
    if (poly)
        h = u.horizon() + v.horizon() == 0 ? 0 : u.horizon() + v.horizon() - 1;
    else if (u.is_polynomial())
        h = v.horizon();
    else if (v.is_polynomial())
        h = u.horizon();
    else
        h = std::min(u.horizon(), v.horizon());
    std::vector<BigInt> out(h);
    auto uc = u.coefficients();
    auto vc = v.coefficients();
    for (std::size_t i = 0; i < uc.size() && i < h; ++i) {
        if (uc[i] == 0)
            continue;
        for (std::size_t j = 0; j < vc.size() && i + j < h; ++j)
            out[i + j] += uc[i] * vc[j];
    }
    return poly ? IntSeries::polynomial(std::move(out)) : IntSeries::truncated(std::move(out));
}

IntSeries mul_one_plus_zd(const IntSeries& s, int d) {
    if (d < 1)
        throw DomainError("d must be >= 1");
    std::vector<BigInt> out(s.coefficients().begin(), s.coefficients().end());
    if (s.is_polynomial())
        out.resize(out.size() + d);
    for (std::size_t j = out.size(); j-- > static_cast<std::size_t>(d);)
        out[j] += s.at(j - d);
    return s.is_polynomial() ? IntSeries::polynomial(std::move(out)) : IntSeries::truncated(std::move(out));
}

IntSeries div_one_plus_zd(const IntSeries& s, int d) {
    if (d < 1)
        throw DomainError("d must be >= 1");
    // The quotient of a polynomial is generally an infinite series, so the
    // result is always a truncated series with s's stored length.
    std::vector<BigInt> out(s.coefficients().begin(), s.coefficients().end());
    for (std::size_t j = d; j < out.size(); ++j)
        out[j] -= out[j - d];
    return IntSeries::truncated(std::move(out));
}

std::optional<std::size_t> series_index(const IntSeries& s) {
    auto c = s.coefficients();
    for (std::size_t t = 0; t < c.size(); ++t)
        if (c[t] <= 0)
            return t;
    if (s.is_polynomial())
        return c.size(); // first stored-past coefficient is 0
    return std::nullopt;
}

IntSeries truncate(const IntSeries& s, std::size_t D) {
    if (!s.is_polynomial() && D > s.horizon())
        throw InconclusiveError("cannot truncate at " + std::to_string(D) + " beyond horizon " +
                                std::to_string(s.horizon()));
    std::vector<BigInt> out(D);
    for (std::size_t j = 0; j < D; ++j)
        out[j] = s.at(j);
    return IntSeries::polynomial(std::move(out));
}

IntSeries truncate_at_index(const IntSeries& s) {
    const auto idx = series_index(s);
    if (!idx)
        throw InconclusiveError("series index not reached within horizon " + std::to_string(s.horizon()));
    return truncate(s, *idx);
}

bool truncation_algebra_check(const IntSeries& u, const IntSeries& v, std::size_t D) {
    const IntSeries uv = truncate(multiply(u, v), D);
    const IntSeries tu = truncate(u, D);
    const IntSeries tv = truncate(v, D);
    const bool part1a = truncate(multiply(tu, tv), D) == uv;
    const bool part1b = truncate(multiply(u, tv), D) == uv;

    // w agrees with v below D and differs arbitrarily above it.
    std::vector<BigInt> w(tv.coefficients().begin(), tv.coefficients().end());
    for (std::size_t j = 0; j < 3; ++j)
        w.push_back(BigInt(static_cast<long>(j) * 7 - 5) + (j < u.horizon() ? u.at(j) : BigInt(1)));
    const IntSeries ws = IntSeries::polynomial(std::move(w));
    const bool part2 = truncate(multiply(u, ws), D) == uv;
    return part1a && part1b && part2;
}

int tau(const DegreeVector& d, int n) {
    if (n < 0)
        throw DomainError("tau requires n >= 0");
    // A non-positive coefficient always appears by z^{n+1}; the loop only
    // widens the horizon defensively.
    for (std::size_t horizon = static_cast<std::size_t>(n) + 2;; horizon *= 2) {
        if (auto idx = series_index(T_series(d, n, horizon)))
            return static_cast<int>(*idx);
    }
}

// ---------------------------------------------------------------------------
// Certificates

std::string to_string(const Rational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

SlopeCertificate single_degree_slope_certificate(int d, int search_limit) {
    if (d < 1)
        throw DomainError("degree must be >= 1");
    const DegreeVector dv({d});
    for (int N = 1; N <= search_limit; ++N) {
        const int t = tau(dv, N);
        // (t - d) / N > 1/2  <=>  2 (t - d) > N
        if (2 * (t - d) > N)
            return {d, N, t, Rational(t - d, N)};
    }
    throw InconclusiveError("no slope > 1/2 found for degree " + std::to_string(d) + " with N <= " +
                            std::to_string(search_limit));
}

LinearBound linear_lower_bound(const DegreeVector& d, std::span<const SlopeCertificate> slopes) {
    if (slopes.size() != d.size())
        throw CertificateError("need exactly one slope certificate per degree");
    const Rational half(1, 2);
    std::vector<SlopeCertificate> order;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& s = slopes[i];
        if (s.degree != d[i])
            throw CertificateError("slope certificate for degree " + std::to_string(s.degree) +
                                   " supplied for degree " + std::to_string(d[i]));
        if (s.N < 1)
            throw CertificateError("certificate needs N >= 1");
        const int t = tau(DegreeVector({s.degree}), s.N);
        if (t != s.tau_at_N || s.slope != Rational(t - s.degree, s.N))
            throw CertificateError("slope certificate does not match tau_(" + std::to_string(s.degree) + ")(" +
                                   std::to_string(s.N) + ")");
        if (s.slope <= half)
            throw CertificateError("slope " + to_string(s.slope) + " for degree " + std::to_string(s.degree) +
                                   " is not > 1/2");
        order.push_back(s);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const SlopeCertificate& a, const SlopeCertificate& b) { return a.slope > b.slope; });

    LinearBound out;
    out.chain = order;

    // Growth bound for the leading degree: f(n + N) >= f(n) + A for n >= 1
    // gives f(n) >= (A/N) n + f(1) - (A/N)(1 + N) there; n = 0 is the only
    // point below the base and contributes f(0).
    const auto& lead = order.front();
    const DegreeVector lead_d({lead.degree});
    const Rational r = lead.slope;
    const Rational k = Rational(tau(lead_d, 1)) - r * (1 + lead.N);
    Rational c = std::min(k, Rational(tau(lead_d, 0)));
    out.constants.push_back(c);

    for (std::size_t i = 1; i < order.size(); ++i) {
        const Rational s = order[i].slope;
        const Rational sN = s * order[i].N;
        c = std::min({Rational(c - 2 * sN), Rational(-sN), Rational(0)});
        out.constants.push_back(c);
    }
    out.slope = order.back().slope;
    out.intercept = c;
    return out;
}

PositivityReport gamma_positivity_check(int n_max, int d_max) {
    PositivityReport report;
    report.n_max = n_max;
    report.d_max = d_max;
    for (int n = 0; n <= n_max; ++n)
        for (int d = 1; d <= d_max; ++d)
            for (int k = 0; k <= n + d / 2; ++k) {
                ++report.checked;
                BigInt g = gamma(2 * n, k, d);
                if (g <= 0) {
                    report.violations.push_back({n, d, k, std::move(g)});
                    report.holds_from_n = std::max(report.holds_from_n, n + 1);
                }
            }
    return report;
}

NonexistenceThreshold nonexistence_threshold(const DegreeVector& d, const LinearBound& bound) {
    int dj = 0;
    for (int di : d)
        if (di >= 2 && (dj == 0 || di < dj))
            dj = di;
    if (dj == 0)
        throw InapplicableError("every degree is 1; linear sequences are semi-regular iff independent");
    const Rational excess = bound.slope - Rational(1, 2);
    if (excess <= 0)
        throw CertificateError("bound slope must exceed 1/2");
    // r n + c > n/2 + dj/2 + 1  <=>  n > (dj/2 + 1 - c) / (r - 1/2)
    const Rational x = (Rational(dj, 2) + 1 - bound.intercept) / excess;
    const BigInt num = boost::multiprecision::numerator(x);
    const BigInt den = boost::multiprecision::denominator(x);
    BigInt fl = num / den;
    if (num < 0 && fl * den != num)
        fl -= 1;
    BigInt N = fl + 1;
    if (N < 1)
        N = 1;
    return {N.convert_to<int>(), dj, bound};
}

NonexistenceThreshold nonexistence_threshold(const DegreeVector& d, int search_limit) {
    bool any_nonlinear = false;
    for (int di : d)
        any_nonlinear |= di >= 2;
    if (!any_nonlinear)
        throw InapplicableError("every degree is 1; linear sequences are semi-regular iff independent");
    std::vector<SlopeCertificate> slopes;
    for (int di : d)
        slopes.push_back(single_degree_slope_certificate(di, search_limit));
    return nonexistence_threshold(d, linear_lower_bound(d, slopes));
}

nlohmann::json to_json(const IntSeries& s) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : s.coefficients())
        out.push_back(c.str());
    return out;
}

} // namespace semireg::series
