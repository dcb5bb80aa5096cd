#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "semireg/boolean_ring.hpp"
#include "semireg/errors.hpp"

using namespace semireg;

namespace {

// Reference arithmetic: a polynomial is a set of monomials, each a sorted
// set of 1-based variable indices; multiplication expands term by term.
using RefMono = std::set<int>;
using RefPoly = std::set<RefMono>;

RefPoly to_ref(const Element& e) {
    RefPoly p;
    for (const auto& m : e.monomials()) {
        auto idx = m.indices();
        p.insert(RefMono(idx.begin(), idx.end()));
    }
    return p;
}

RefPoly ref_mul(const RefPoly& a, const RefPoly& b) {
    std::map<RefMono, int> count;
    for (const auto& x : a)
        for (const auto& y : b) {
            RefMono z = x;
            bool square = false;
            for (int v : y)
                square |= !z.insert(v).second;
            if (!square)
                ++count[z];
        }
    RefPoly out;
    for (const auto& [m, c] : count)
        if (c % 2)
            out.insert(m);
    return out;
}

Element random_mixed(int n, int d, std::mt19937_64& rng) {
    std::vector<Mask> support;
    for (Mask m : monomials_of_degree(n, d))
        if (rng() & 1U)
            support.push_back(m);
    return Element::from_support(n, d, support);
}

} // namespace

TEST_CASE("binomial table") {
    CHECK(binomial_u64(0, 0) == 1);
    CHECK(binomial_u64(12, 6) == 924);
    CHECK(binomial_u64(64, 32) == 1832624140942590534ULL);
    CHECK(binomial_u64(5, 6) == 0);
    CHECK(binomial_u64(5, -1) == 0);
}

TEST_CASE("monomial construction and product") {
    const int idx12[] = {1, 2};
    const int idx23[] = {2, 3};
    const int idx3[] = {3};
    auto a = Monomial::from_indices(4, idx12);
    auto b = Monomial::from_indices(4, idx23);
    auto c = Monomial::from_indices(4, idx3);
    CHECK(a.degree() == 2);
    CHECK(a.indices() == std::vector<int>{1, 2});
    CHECK_FALSE(monomial_mul(a, b).has_value()); // x2^2 = 0
    auto ac = monomial_mul(a, c);
    REQUIRE(ac.has_value());
    CHECK(ac->indices() == std::vector<int>{1, 2, 3});
    CHECK(monomial_mul(a, Monomial::one(4)) == a);
    CHECK_THROWS_AS(Monomial(3, 0b1000), DimensionError);
    CHECK_THROWS_AS(Monomial(0, 0), DimensionError);
    CHECK_THROWS_AS(monomial_mul(a, Monomial::one(5)), DimensionError);
}

TEST_CASE("element arithmetic agrees with the reference expansion") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const int da = 1 + static_cast<int>(rng() % n);
        const int db = 1 + static_cast<int>(rng() % n);
        const Element a = random_mixed(n, da, rng);
        const Element b = random_mixed(n, db, rng);
        const Element p = a * b;
        CHECK(to_ref(p) == ref_mul(to_ref(a), to_ref(b)));
        CHECK(a * b == b * a);
        if (!p.is_zero())
            CHECK(p.degree() == da + db);
    }
}

TEST_CASE("addition is symmetric difference and respects grading") {
    auto a = parse_element("2:4:{1.2,3.4}");
    auto b = parse_element("2:4:{1.2,1.3}");
    CHECK(to_text(a + b) == "2:4:{1.3,3.4}");
    CHECK((a + a).is_zero());
    CHECK_THROWS_AS(a + parse_element("1:4:{1}"), GradingError);
    // A zero summand of another degree is harmless.
    CHECK(a + Element::zero(4, 3) == a);
}

TEST_CASE("squares of homogeneous elements vanish") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 8);
        const Element a = random_mixed(n, 1 + static_cast<int>(rng() % n), rng);
        CHECK((a * a).is_zero());
    }
}

TEST_CASE("elementary symmetric polynomials") {
    for (int n = 1; n <= 10; ++n)
        for (int d = 0; d <= n; ++d)
            CHECK(sigma(d, n).size() == binomial_u64(n, d));
    CHECK(sigma(5, 4).is_zero());
    CHECK(to_text(sigma(0, 3)) == "0:3:{0}");
    // sigma_1 sigma_d = (d+1) sigma_{d+1}, which vanishes for odd d.
    for (int n = 2; n <= 10; ++n)
        for (int d = 1; d < n; ++d) {
            const Element p = sigma(1, n) * sigma(d, n);
            if (d % 2 == 1)
                CHECK(p.is_zero());
            else
                CHECK(p == sigma(d + 1, n));
        }
    for (int n = 1; n <= 9; ++n)
        for (int d = 0; d <= n; ++d)
            for (int k = 1; k <= n; ++k)
                CHECK(sigma_split_identity_check(d, n, k));
    CHECK_THROWS_AS(sigma_split_identity_check(2, 4, 0), DomainError);
}

TEST_CASE("sigma restricted to a variable subset") {
    const Element s = sigma_on(2, 5, 0b10101); // variables 1, 3, 5
    CHECK(to_text(s) == "2:5:{1.3,1.5,3.5}");
}

TEST_CASE("annihilator of a monomial") {
    const int idx[] = {2, 4};
    auto ann = monomial_annihilator_basis(Monomial::from_indices(5, idx));
    CHECK_FALSE(ann.whole_ring);
    REQUIRE(ann.variables.size() == 2);
    CHECK(ann.variables[0].indices() == std::vector<int>{2});
    CHECK(ann.variables[1].indices() == std::vector<int>{4});
    // Each generator kills the monomial.
    for (const auto& v : ann.variables)
        CHECK_FALSE(monomial_mul(v, Monomial::from_indices(5, idx)).has_value());
    CHECK(monomial_annihilator_basis(std::nullopt).whole_ring);
}

TEST_CASE("graded basis ranking matches sorted enumeration") {
    for (int n = 1; n <= 12; ++n)
        for (int k = 0; k <= n; ++k) {
            std::vector<Mask> brute;
            for (Mask m = 0; m < (Mask{1} << n); ++m)
                if (std::popcount(m) == k)
                    brute.push_back(m);
            CHECK(monomials_of_degree(n, k) == brute);
            GradedBasisIndex idx(n, k);
            REQUIRE(idx.size() == brute.size());
            for (std::size_t i = 0; i < brute.size(); ++i) {
                CHECK(idx.rank(brute[i]) == i);
                CHECK(idx.unrank(i).vars() == brute[i]);
            }
        }
}

TEST_CASE("ranking at 64 variables") {
    GradedBasisIndex idx(64, 3);
    CHECK(idx.size() == 41664);
    const Mask top = (Mask{1} << 63) | (Mask{1} << 62) | (Mask{1} << 61);
    CHECK(idx.rank(top) == idx.size() - 1);
    CHECK(idx.unrank(idx.size() - 1).vars() == top);
    CHECK_THROWS_AS(idx.rank(Mask{1}), DimensionError);
}

TEST_CASE("text format round trip and errors") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 12);
        const Element e = random_mixed(n, static_cast<int>(rng() % (n + 1)), rng);
        CHECK(parse_element(to_text(e)) == e);
        CHECK(element_from_json(to_json(e)) == e);
    }
    CHECK(parse_element("0:3:{0}") == Element::from_monomial(Monomial::one(3)));
    CHECK(parse_element("0:3:{}").is_zero());
    CHECK(parse_element(" 2:12:{1.2, 3.4} ").size() == 2);
    CHECK_THROWS_AS(parse_element("2:4:{1.2,1.2}"), ParseError);
    CHECK_THROWS_AS(parse_element("2:4:{1.2.3}"), ParseError);
    CHECK_THROWS_AS(parse_element("2:4:{1.5}"), ParseError);
    CHECK_THROWS_AS(parse_element("2:4:{1.1}"), ParseError);
    CHECK_THROWS_AS(parse_element("2:4:1.2"), ParseError);
    CHECK_THROWS_AS(parse_element("x:4:{1.2}"), ParseError);
    CHECK_THROWS_AS(element_from_json(nlohmann::json{{"n", 3}}), ParseError);
}

TEST_CASE("from_support validation") {
    CHECK_THROWS_AS(Element::from_support(4, 2, {0b11, 0b11}), DomainError);
    CHECK_THROWS_AS(Element::from_support(4, 2, {0b111}), DomainError);
    const Element e = Element::from_support(4, 2, {0b1100, 0b0011});
    CHECK(e.support()[0] == 0b0011); // sorted
}

TEST_CASE("random elements are nonzero, homogeneous and reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 50; ++i) {
        const Element x = random_element(8, 3, a);
        const Element y = random_element(8, 3, b);
        CHECK(x == y);
        CHECK_FALSE(x.is_zero());
        CHECK(x.degree() == 3);
    }
    Rng c(1);
    CHECK_THROWS_AS(random_element(4, 5, c), DomainError);
    CHECK_THROWS_AS(random_element(64, 32, c), ResourceError);
}

TEST_CASE("random elements hit every monomial with frequency near one half") {
    Rng rng(5);
    std::vector<int> hits(binomial_u64(6, 2), 0);
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) {
        const Element e = random_element(6, 2, rng);
        for (Mask m : e.support())
            ++hits[colex_rank(m)];
    }
    for (int h : hits) {
        // Binomial(4000, 1/2) has standard deviation ~31.6; allow 5 sigma.
        CHECK(h > draws / 2 - 160);
        CHECK(h < draws / 2 + 160);
    }
}
