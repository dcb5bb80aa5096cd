#include <random>
#include <vector>

#include "doctest.h"
#include "semireg/errors.hpp"
#include "semireg/series.hpp"

using namespace semireg;
using namespace semireg::series;

namespace {

// (1+z)^n times prod_i sum_j (-1)^j z^{j d_i}, multiplied out naively.
std::vector<BigInt> expanded_T(const std::vector<int>& d, int n, std::size_t horizon) {
    std::vector<BigInt> c(horizon, 0);
    for (int k = 0; k <= n && static_cast<std::size_t>(k) < horizon; ++k)
        c[k] = binom(n, k);
    for (int di : d) {
        std::vector<BigInt> out(horizon, 0);
        for (std::size_t a = 0; a < horizon; ++a)
            for (std::size_t j = 0; a + j * di < horizon; ++j)
                out[a + j * di] += (j % 2 ? -c[a] : c[a]);
        c = out;
    }
    return c;
}

// Pascal's rule; no factorials or multiprecision division involved.
std::vector<std::vector<BigInt>> pascal(int rows) {
    std::vector<std::vector<BigInt>> p(rows + 1);
    for (int n = 0; n <= rows; ++n) {
        p[n].assign(n + 1, 1);
        for (int k = 1; k < n; ++k)
            p[n][k] = p[n - 1][k - 1] + p[n - 1][k];
    }
    return p;
}

IntSeries random_series(std::mt19937_64& rng, std::size_t len, bool poly) {
    std::vector<BigInt> c(len);
    for (auto& x : c)
        x = static_cast<int>(rng() % 41) - 20;
    return poly ? IntSeries::polynomial(c) : IntSeries::truncated(c);
}

} // namespace

TEST_CASE("binomials against Pascal's triangle") {
    const auto p = pascal(80);
    for (int n = 0; n <= 80; ++n)
        for (int k = 0; k <= n; ++k)
            CHECK(binom(n, k) == p[n][k]);
    CHECK(binom(5, 7) == 0);
    CHECK(binom(5, -1) == 0);
}

TEST_CASE("binomial parity: halving, submask and direct agree") {
    const auto p = pascal(64);
    for (std::uint64_t n = 0; n <= 64; ++n)
        for (std::uint64_t k = 0; k <= 70; ++k) {
            const int direct = k <= n ? static_cast<int>(p[n][k] % 2) : 0;
            CHECK(binom_parity(n, k) == direct);
            CHECK(binom_parity_submask(n, k) == direct);
        }
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t n = rng() >> 1, k = rng() >> (1 + rng() % 60);
        CHECK(binom_parity(n, k) == binom_parity_submask(n, k));
    }
}

TEST_CASE("T series agrees with the multiplied-out expansion") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(rng() % 30);
        std::vector<int> d(1 + rng() % 4);
        for (auto& x : d)
            x = 1 + static_cast<int>(rng() % 6);
        const std::size_t horizon = n + 8;
        const IntSeries t = T_series(DegreeVector(d), n, horizon);
        const auto ref = expanded_T(d, n, horizon);
        REQUIRE(t.horizon() == horizon);
        for (std::size_t j = 0; j < horizon; ++j)
            CHECK(t.at(j) == ref[j]);
        // Multiplying back by each (1+z^d_i) recovers (1+z)^n.
        IntSeries back = t;
        for (int x : d)
            back = mul_one_plus_zd(back, x);
        for (std::size_t j = 0; j < horizon; ++j)
            CHECK(back.at(j) == binom(n, static_cast<std::int64_t>(j)));
    }
}

TEST_CASE("gamma is the single-degree T coefficient") {
    for (int n = 0; n <= 30; ++n)
        for (int d = 1; d <= 8; ++d) {
            const IntSeries t = T_series(DegreeVector({d}), n, n + 3);
            for (int k = 0; k <= n + 2; ++k)
                CHECK(gamma(n, k, d) == t.at(k));
        }
    CHECK(gamma(12, 8, 2) == 1);
    CHECK(gamma(4, 3, 2) == 0);
}

TEST_CASE("quadratic T series in twelve variables") {
    const IntSeries t = T_series(DegreeVector({2}), 12, 14);
    // c(j) = C(12, j) - c(j - 2), worked by hand.
    const std::vector<int> expected{1, 12, 65, 208, 430, 584, 494, 208, 1, 12, 65, 0, -64, 0};
    for (std::size_t j = 0; j < expected.size(); ++j)
        CHECK(t.at(j) == expected[j]);
    CHECK(series_index(t) == std::optional<std::size_t>(11));
    CHECK(truncate_at_index(t).horizon() == 11);
    CHECK(tau(DegreeVector({2}), 12) == 11);
}

TEST_CASE("tau for a single quadratic") {
    const std::vector<int> expected{1, 2, 2, 3, 3, 4, 5, 5, 6, 6, 7, 8, 11, 12, 13};
    for (int n = 0; n < static_cast<int>(expected.size()); ++n)
        CHECK(tau(DegreeVector({2}), n) == expected[n]);
}

TEST_CASE("tau is bounded by n + 1 and monotone in the degrees") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = static_cast<int>(rng() % 60);
        std::vector<int> d(1 + rng() % 4);
        for (auto& x : d)
            x = 1 + static_cast<int>(rng() % 8);
        const int t = tau(DegreeVector(d), n);
        CHECK(t >= 1);
        CHECK(t <= n + 1);
        // Adding a generator can only lower the index.
        auto more = d;
        more.push_back(1 + static_cast<int>(rng() % 8));
        CHECK(tau(DegreeVector(more), n) <= t);
        // The index is the first non-positive coefficient.
        const IntSeries s = T_series(DegreeVector(d), n, n + 2);
        for (int j = 0; j < t; ++j)
            CHECK(s.at(j) > 0);
        CHECK(s.at(t) <= 0);
    }
}

TEST_CASE("single-degree tau in the middle range") {
    for (int d = 2; d <= 12; ++d) {
        for (int n = d + 1; n < 3 * d; ++n)
            CHECK(tau(DegreeVector({d}), n) == (n + d + 1) / 2);
        CHECK(tau(DegreeVector({d}), 3 * d) == 2 * d + 1);
    }
}

TEST_CASE("series index and truncation") {
    const IntSeries p = IntSeries::polynomial({1, 3, 2});
    CHECK(series_index(p) == std::optional<std::size_t>(3));
    CHECK(p.at(10) == 0);
    const IntSeries q = IntSeries::truncated({1, 3, 2});
    CHECK_FALSE(series_index(q).has_value());
    CHECK_THROWS_AS(q.at(3), InconclusiveError);
    CHECK_THROWS_AS(truncate(q, 4), InconclusiveError);
    CHECK_THROWS_AS(truncate_at_index(q), InconclusiveError);
    const IntSeries r = IntSeries::truncated({1, 2, -1, 5});
    CHECK(truncate_at_index(r) == IntSeries::polynomial({1, 2}));
    CHECK(truncate(r, 3) == IntSeries::polynomial({1, 2, -1}));
}

TEST_CASE("division by 1 + z^d inverts multiplication") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const IntSeries s = random_series(rng, 1 + rng() % 30, false);
        const int d = 1 + static_cast<int>(rng() % 6);
        CHECK(div_one_plus_zd(mul_one_plus_zd(s, d), d) == s);
        CHECK(mul_one_plus_zd(div_one_plus_zd(s, d), d) == s);
    }
}

TEST_CASE("product matches a naive convolution") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const IntSeries u = random_series(rng, 1 + rng() % 20, false);
        const IntSeries v = random_series(rng, 1 + rng() % 20, false);
        const IntSeries w = multiply(u, v);
        CHECK(w.horizon() == std::min(u.horizon(), v.horizon()));
        for (std::size_t k = 0; k < w.horizon(); ++k) {
            BigInt sum = 0;
            for (std::size_t i = 0; i <= k; ++i)
                sum += u.at(i) * v.at(k - i);
            CHECK(w.at(k) == sum);
        }
    }
    const IntSeries a = IntSeries::polynomial({1, 1});
    const IntSeries b = IntSeries::polynomial({1, -1});
    const IntSeries ab = multiply(a, b);
    CHECK(ab.is_polynomial());
    CHECK(ab.at(2) == -1);
}

TEST_CASE("truncation laws on random series") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t len = 2 + rng() % 20;
        const IntSeries u = random_series(rng, len, rng() % 2);
        const IntSeries v = random_series(rng, len, rng() % 2);
        CHECK(truncation_algebra_check(u, v, rng() % (len + 1)));
    }
}

TEST_CASE("slope certificates") {
    const auto two = single_degree_slope_certificate(2);
    CHECK(two.N == 11);
    CHECK(two.tau_at_N == 8);
    CHECK(two.slope == Rational(6, 11));
    const auto one = single_degree_slope_certificate(1);
    CHECK(one.N == 3);
    CHECK(one.slope == Rational(2, 3));
    // Minimality: no smaller N already clears one half.
    for (int d = 1; d <= 6; ++d) {
        const auto c = single_degree_slope_certificate(d);
        CHECK(c.slope > Rational(1, 2));
        for (int N = 1; N < c.N; ++N)
            CHECK(Rational(tau(DegreeVector({d}), N) - d, N) <= Rational(1, 2));
    }
}

TEST_CASE("linear lower bounds hold and give the expected thresholds") {
    const auto c2 = single_degree_slope_certificate(2);
    const std::vector<SlopeCertificate> one{c2};
    const LinearBound b = linear_lower_bound(DegreeVector({2}), one);
    CHECK(b.slope == Rational(6, 11));
    CHECK(b.intercept == Rational(-50, 11));
    const std::vector<SlopeCertificate> two{c2, c2};
    const LinearBound bb = linear_lower_bound(DegreeVector({2, 2}), two);
    CHECK(bb.intercept == Rational(-182, 11));
    for (int n = 0; n <= 200; ++n) {
        CHECK(Rational(tau(DegreeVector({2}), n)) >= b.slope * n + b.intercept);
        CHECK(Rational(tau(DegreeVector({2, 2}), n)) >= bb.slope * n + bb.intercept);
    }
    CHECK(nonexistence_threshold(DegreeVector({2})).N == 145);
    CHECK(nonexistence_threshold(DegreeVector({2, 2})).N == 409);

    std::vector<SlopeCertificate> bad{c2};
    bad[0].slope = Rational(1, 2);
    CHECK_THROWS_AS(linear_lower_bound(DegreeVector({2}), bad), CertificateError);
    bad[0] = single_degree_slope_certificate(3);
    CHECK_THROWS_AS(linear_lower_bound(DegreeVector({2}), bad), CertificateError);
    CHECK_THROWS_AS(nonexistence_threshold(DegreeVector({1, 1})), InapplicableError);
}

TEST_CASE("mixed-degree bounds hold on a range") {
    for (const auto& d : {std::vector<int>{2, 3}, std::vector<int>{3, 3, 4}, std::vector<int>{1, 2}}) {
        const DegreeVector dv(d);
        std::vector<SlopeCertificate> certs;
        for (int x : d)
            certs.push_back(single_degree_slope_certificate(x));
        const LinearBound b = linear_lower_bound(dv, certs);
        for (int n = 0; n <= 150; ++n)
            CHECK(Rational(tau(dv, n)) >= b.slope * n + b.intercept);
        const auto th = nonexistence_threshold(dv);
        for (int n = th.N; n <= th.N + 100; ++n)
            CHECK(2 * tau(dv, n) > n + th.critical_degree + 2);
    }
}

TEST_CASE("gamma positivity scan reports small-n failures") {
    const PositivityReport r = gamma_positivity_check(40, 8);
    CHECK(r.violations.size() == 50);
    CHECK(r.holds_from_n == 12);
    bool saw_small = false;
    for (const auto& v : r.violations) {
        CHECK(v.value <= 0);
        CHECK(gamma(2 * v.n, v.k, v.d) == v.value);
        saw_small |= (v.n == 2 && v.d == 2 && v.k == 3);
    }
    CHECK(saw_small);
}

TEST_CASE("degree vector parsing") {
    CHECK(DegreeVector::parse("2,2,3").to_string() == "2,2,3");
    CHECK_THROWS_AS(DegreeVector::parse("2,0"), ParseError);
    CHECK_THROWS_AS(DegreeVector::parse("2,x"), ParseError);
    CHECK_THROWS_AS(DegreeVector::parse(""), std::exception);
    CHECK_THROWS_AS(DegreeVector({}), DomainError);
}
