#include "semireg/boolean_ring.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <iterator>

#include "semireg/errors.hpp"

namespace semireg {

namespace {

using BinomialTable = std::array<std::array<std::uint64_t, 65>, 65>;

const BinomialTable& pascal() {
    static const BinomialTable table = [] {
        BinomialTable t{};
        for (int n = 0; n <= 64; ++n) {
            t[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
        }
        return t;
    }();
    return table;
}

void check_ambient(int n) {
    if (n < 1 || n > kMaxVariables)
        throw DimensionError("ambient variable count must be in [1, 64], got " + std::to_string(n));
}

void require_same_ambient(int a, int b) {
    if (a != b)
        throw DimensionError("ring mismatch: B(" + std::to_string(a) + ") vs B(" + std::to_string(b) + ")");
}

// Gosper's hack: next mask with the same popcount. Only called while a
// successor below 2^n exists.
Mask next_same_popcount(Mask x) {
    const Mask t = x | (x - 1);
    return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(x) + 1));
}

} // namespace

std::uint64_t binomial_u64(int n, int k) {
    if (n < 0 || n > 64 || k < 0 || k > n)
        return 0;
    return pascal()[n][k];
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(int n, Mask vars) : n_(n), vars_(vars) {
    check_ambient(n);
    if ((vars & ~low_bits(n)) != 0)
        throw DimensionError("monomial uses a variable beyond x" + std::to_string(n));
}

Monomial Monomial::variable(int n, int index) {
    if (index < 0 || index >= n)
        throw DimensionError("variable index out of range");
    return Monomial(n, Mask{1} << index);
}

Monomial Monomial::from_indices(int n, std::span<const int> one_based) {
    Mask m = 0;
    for (int j : one_based) {
        if (j < 1 || j > n)
            throw DimensionError("variable x" + std::to_string(j) + " not in B(" + std::to_string(n) + ")");
        m |= Mask{1} << (j - 1);
    }
    return Monomial(n, m);
}

int Monomial::degree() const { return std::popcount(vars_); }

std::vector<int> Monomial::indices() const {
    std::vector<int> out;
    for (Mask v = vars_; v != 0; v &= v - 1)
        out.push_back(std::countr_zero(v) + 1);
    return out;
}

std::optional<Monomial> monomial_mul(const Monomial& a, const Monomial& b) {
    require_same_ambient(a.ambient(), b.ambient());
    if ((a.vars() & b.vars()) != 0)
        return std::nullopt;
    return Monomial(a.ambient(), a.vars() | b.vars());
}

// ---------------------------------------------------------------------------
// Element

Element Element::zero(int n, int degree) {
    check_ambient(n);
    return Element(n, degree, {});
}

Element Element::from_support(int n, int degree, std::vector<Mask> support) {
    check_ambient(n);
    for (Mask m : support) {
        if ((m & ~low_bits(n)) != 0)
            throw DimensionError("monomial uses a variable beyond x" + std::to_string(n));
        if (std::popcount(m) != degree)
            throw DomainError("monomial of degree " + std::to_string(std::popcount(m)) +
                              " in an element of degree " + std::to_string(degree));
    }
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
        throw DomainError("duplicate monomial in support");
    return Element(n, degree, std::move(support));
}

Element Element::from_monomial(const Monomial& m) {
    return Element(m.ambient(), m.degree(), {m.vars()});
}

std::vector<Monomial> Element::monomials() const {
    std::vector<Monomial> out;
    out.reserve(support_.size());
    for (Mask m : support_)
        out.emplace_back(n_, m);
    return out;
}

bool operator==(const Element& a, const Element& b) {
    if (a.n_ != b.n_)
        return false;
    if (a.is_zero() || b.is_zero())
        return a.is_zero() && b.is_zero();
    return a.degree_ == b.degree_ && a.support_ == b.support_;
}

Element element_add(const Element& a, const Element& b) {
    require_same_ambient(a.ambient(), b.ambient());
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    if (a.degree() != b.degree())
        throw GradingError("cannot add homogeneous elements of degrees " + std::to_string(a.degree()) +
                           " and " + std::to_string(b.degree()));
    std::vector<Mask> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.support().begin(), a.support().end(), b.support().begin(),
                                  b.support().end(), std::back_inserter(out));
    return Element::from_support(a.ambient(), a.degree(), std::move(out));
}

Element element_mul(const Element& a, const Element& b) {
    require_same_ambient(a.ambient(), b.ambient());
    const int degree = a.degree() + b.degree();
    std::vector<Mask> terms;
    for (Mask x : a.support())
        for (Mask y : b.support())
            if ((x & y) == 0)
                terms.push_back(x | y);
    std::sort(terms.begin(), terms.end());
    // Keep monomials that occur an odd number of times.
    std::vector<Mask> out;
    for (auto it = terms.begin(); it != terms.end();) {
        auto run_end = std::find_if(it, terms.end(), [&](Mask m) { return m != *it; });
        if (std::distance(it, run_end) % 2 == 1)
            out.push_back(*it);
        it = run_end;
    }
    return Element::from_support(a.ambient(), degree, std::move(out));
}

Element sigma_on(int d, int n, Mask vars) {
    check_ambient(n);
    if (d < 0)
        throw DomainError("sigma degree must be nonnegative");
    if ((vars & ~low_bits(n)) != 0)
        throw DimensionError("variable set exceeds B(n)");
    const int width = std::popcount(vars);
    if (d > width)
        return Element::zero(n, d);
    // Enumerate d-subsets of the positions in `vars` and scatter them.
    std::vector<int> positions;
    for (Mask v = vars; v != 0; v &= v - 1)
        positions.push_back(std::countr_zero(v));
    if (d == 0)
        return Element::from_support(n, 0, {0});
    std::vector<Mask> support;
    support.reserve(binomial_u64(width, d));
    for (Mask local : monomials_of_degree(width, d)) {
        Mask m = 0;
        for (Mask v = local; v != 0; v &= v - 1)
            m |= Mask{1} << positions[std::countr_zero(v)];
        support.push_back(m);
    }
    return Element::from_support(n, d, std::move(support));
}

Element sigma(int d, int n) { return sigma_on(d, n, low_bits(n)); }

bool sigma_split_identity_check(int d, int n, int k) {
    if (k < 1 || k > n)
        throw DomainError("split point must satisfy 1 <= k <= n");
    const Mask head = low_bits(k);
    const Mask tail = low_bits(n) & ~head;
    Element rhs = Element::zero(n, d);
    for (int i = 0; i <= d; ++i)
        rhs = rhs + sigma_on(d - i, n, head) * sigma_on(i, n, tail);
    return rhs == sigma(d, n);
}

AnnihilatorGenerators monomial_annihilator_basis(const std::optional<Monomial>& m) {
    AnnihilatorGenerators out;
    if (!m) {
        out.whole_ring = true;
        return out;
    }
    for (Mask v = m->vars(); v != 0; v &= v - 1)
        out.variables.push_back(Monomial::variable(m->ambient(), std::countr_zero(v)));
    return out;
}

Element random_element(int n, int d, Rng& rng) {
    check_ambient(n);
    if (d < 1 || d > n)
        throw DomainError("random_element needs 1 <= d <= n");
    const std::uint64_t count = binomial_u64(n, d);
    if (count > (std::uint64_t{1} << 26))
        throw ResourceError("C(" + std::to_string(n) + "," + std::to_string(d) + ") monomials is too many to sample");
    const std::vector<Mask> basis = monomials_of_degree(n, d);
    for (;;) {
        std::vector<Mask> support;
        std::uint64_t bits = 0;
        int left = 0;
        for (Mask m : basis) {
            if (left == 0) {
                bits = rng();
                left = 64;
            }
            if (bits & 1U)
                support.push_back(m);
            bits >>= 1;
            --left;
        }
        if (!support.empty())
            return Element::from_support(n, d, std::move(support));
    }
}

// ---------------------------------------------------------------------------
// Graded basis indexing

std::uint64_t colex_rank(Mask vars) {
    std::uint64_t r = 0;
    int i = 1;
    for (Mask v = vars; v != 0; v &= v - 1, ++i)
        r += pascal()[std::countr_zero(v)][i];
    return r;
}

GradedBasisIndex::GradedBasisIndex(int n, int k) : n_(n), k_(k), size_(binomial_u64(n, k)) {
    check_ambient(n);
    if (k < 0 || k > n)
        throw DimensionError("degree " + std::to_string(k) + " out of range for B(" + std::to_string(n) + ")");
}

std::uint64_t GradedBasisIndex::rank(Mask vars) const {
    if (std::popcount(vars) != k_ || (vars & ~low_bits(n_)) != 0)
        throw DimensionError("monomial not in the indexed graded component");
    return colex_rank(vars);
}

std::uint64_t GradedBasisIndex::rank(const Monomial& m) const {
    require_same_ambient(n_, m.ambient());
    return rank(m.vars());
}

Monomial GradedBasisIndex::unrank(std::uint64_t index) const {
    if (index >= size_)
        throw DimensionError("rank out of range");
    Mask m = 0;
    // Greedy: the largest position p with C(p, i) <= remaining index.
    int p = n_ - 1;
    for (int i = k_; i >= 1; --i) {
        while (binomial_u64(p, i) > index)
            --p;
        index -= binomial_u64(p, i);
        m |= Mask{1} << p;
        --p;
    }
    return Monomial(n_, m);
}

std::vector<Mask> monomials_of_degree(int n, int k) {
    check_ambient(n);
    if (k < 0 || k > n)
        return {};
    const std::uint64_t count = binomial_u64(n, k);
    std::vector<Mask> out;
    out.reserve(count);
    Mask m = low_bits(k);
    for (std::uint64_t i = 0; i < count; ++i) {
        out.push_back(m);
        if (i + 1 < count)
            m = next_same_popcount(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text and JSON

std::string to_text(const Element& e) {
    std::string out = std::to_string(e.degree()) + ":" + std::to_string(e.ambient()) + ":{";
    bool first = true;
    for (Mask m : e.support()) {
        if (!first)
            out += ',';
        first = false;
        if (m == 0) {
            out += '0';
            continue;
        }
        bool first_var = true;
        for (Mask v = m; v != 0; v &= v - 1) {
            if (!first_var)
                out += '.';
            first_var = false;
            out += std::to_string(std::countr_zero(v) + 1);
        }
    }
    out += '}';
    return out;
}

namespace {

int parse_int(std::string_view s, std::string_view what) {
    int value = 0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (s.empty() || ec != std::errc{} || ptr != end)
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

} // namespace

Element parse_element(std::string_view text) {
    text = trim(text);
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw ParseError("expected d:n:{...}, got '" + std::string(text) + "'");
    const int d = parse_int(trim(text.substr(0, c1)), "degree");
    const int n = parse_int(trim(text.substr(c1 + 1, c2 - c1 - 1)), "variable count");
    std::string_view body = trim(text.substr(c2 + 1));
    if (body.size() < 2 || body.front() != '{' || body.back() != '}')
        throw ParseError("support must be enclosed in braces");
    body = trim(body.substr(1, body.size() - 2));
    if (n < 1 || n > kMaxVariables)
        throw ParseError("variable count must be in [1, 64]");
    if (d < 0 || d > n)
        throw ParseError("degree out of range");

    std::vector<Mask> support;
    while (!body.empty()) {
        const auto comma = body.find(',');
        std::string_view token = trim(body.substr(0, comma));
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
        if (token.empty())
            throw ParseError("empty monomial");
        Mask m = 0;
        if (token != "0") {
            while (!token.empty()) {
                const auto dot = token.find('.');
                const int j = parse_int(trim(token.substr(0, dot)), "variable index");
                token = dot == std::string_view::npos ? std::string_view{} : token.substr(dot + 1);
                if (j < 1 || j > n)
                    throw ParseError("variable x" + std::to_string(j) + " not in B(" + std::to_string(n) + ")");
                const Mask bit = Mask{1} << (j - 1);
                if (m & bit)
                    throw ParseError("repeated variable x" + std::to_string(j) + " in a monomial");
                m |= bit;
            }
        }
        if (std::popcount(m) != d)
            throw ParseError("monomial degree does not match declared degree " + std::to_string(d));
        support.push_back(m);
    }
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
        throw ParseError("duplicate monomial in support");
    return Element::from_support(n, d, std::move(support));
}

nlohmann::json to_json(const Element& e) {
    nlohmann::json support = nlohmann::json::array();
    for (Mask m : e.support())
        support.push_back(Monomial(e.ambient(), m).indices());
    return {{"n", e.ambient()}, {"degree", e.degree()}, {"support", std::move(support)}};
}

Element element_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("n").get<int>();
        const int d = j.at("degree").get<int>();
        if (n < 1 || n > kMaxVariables)
            throw ParseError("variable count must be in [1, 64]");
        std::vector<Mask> support;
        for (const auto& mono : j.at("support")) {
            Mask m = 0;
            for (const auto& idx : mono) {
                const int v = idx.get<int>();
                if (v < 1 || v > n)
                    throw ParseError("variable index out of range");
                if (m & (Mask{1} << (v - 1)))
                    throw ParseError("repeated variable in a monomial");
                m |= Mask{1} << (v - 1);
            }
            support.push_back(m);
        }
        return Element::from_support(n, d, std::move(support));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed element JSON: ") + ex.what());
    } catch (const DomainError& ex) {
        throw ParseError(ex.what());
    }
}

} // namespace semireg
