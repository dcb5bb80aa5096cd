#include "semireg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "semireg/errors.hpp"
#include "semireg/semiregularity.hpp"

namespace semireg::experiments {

namespace {

series::DegreeVector repeated(int d, int m) { return series::DegreeVector(std::vector<int>(m, d)); }

BigInt population_of(int n, int m, int d) {
    if (binomial_u64(n, d) * static_cast<std::uint64_t>(m) > (std::uint64_t{1} << 20))
        throw ResourceError("population of B(" + std::to_string(n) + ") degree-" + std::to_string(d) +
                            " sequences is too large to represent");
    const BigInt per = (BigInt(1) << static_cast<unsigned>(binomial_u64(n, d))) - 1;
    return boost::multiprecision::pow(per, static_cast<unsigned>(m));
}

void fill_index(ProportionCell& cell) {
    const auto t = series::T_series(repeated(cell.d, cell.m), cell.n, static_cast<std::size_t>(cell.n) + 2);
    const auto idx = *series::series_index(t);
    cell.t_index = static_cast<int>(idx);
    cell.t_at_index = t.at(idx);
}

Element pairing_quadratic(int n, int r) {
    std::vector<Mask> support;
    for (int i = 0; i < r; ++i)
        support.push_back((Mask{1} << (2 * i)) | (Mask{1} << (2 * i + 1)));
    std::sort(support.begin(), support.end());
    return Element::from_support(n, 2, std::move(support));
}

RankClass representative_class(int n, int r) {
    RankClass c;
    c.rank = 2 * r;
    c.count = quadratic_rank_count(n, r);
    const IdealSpec ideal({pairing_quadratic(n, r)});
    c.semiregular = is_semiregular(ideal).semiregular;
    c.hilbert_dims = hilbert_series(ideal).dims;
    return c;
}

void report(const RunOptions& opts, const std::string& line) {
    if (opts.progress)
        *opts.progress << line << '\n' << std::flush;
}

// Round-half-up of 100 q, as a two-digit decimal string "0.xx" / "1".
std::string two_digits(const Rational& q) {
    const Rational scaled = q * 100 + Rational(1, 2);
    const BigInt num = boost::multiprecision::numerator(scaled);
    const BigInt den = boost::multiprecision::denominator(scaled);
    const int hundredths = static_cast<int>(BigInt(num / den));
    if (hundredths == 100)
        return "1";
    std::string s = std::to_string(hundredths);
    if (s.size() < 2)
        s = "0" + s;
    return "0." + s;
}

} // namespace

std::string to_string(CellMode mode) {
    switch (mode) {
    case CellMode::sampled:
        return "sampled";
    case CellMode::exhaustive:
        return "exhaustive";
    case CellMode::by_theorem:
        return "by-theorem";
    }
    return "?";
}

int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("SEMIREG_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

Rng substream(std::uint64_t seed, int n, int m, int d, std::uint64_t sample) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n),    static_cast<std::uint32_t>(m),
                      static_cast<std::uint32_t>(d),    static_cast<std::uint32_t>(sample),
                      static_cast<std::uint32_t>(sample >> 32)};
    return Rng(seq);
}

double ProportionCell::estimate() const {
    if (trials == 0)
        return 0.0;
    return Rational(successes, trials).convert_to<double>();
}

ProportionCell estimate_proportion(int n, int m, int d, int samples, std::uint64_t seed, const RunOptions& opts) {
    if (d < 1 || d > n)
        throw DomainError("proportion needs 1 <= d <= n");
    if (m < 1 || samples < 1)
        throw DomainError("proportion needs m >= 1 and samples >= 1");
    ProportionCell cell{n, m, d, CellMode::sampled, samples, 0};
    fill_index(cell);
    std::atomic<long> hits{0};
    parallel_for(static_cast<std::size_t>(samples), resolve_threads(opts.threads), [&](std::size_t s) {
        Rng rng = substream(seed, n, m, d, s);
        std::vector<Element> gens;
        for (int i = 0; i < m; ++i)
            gens.push_back(random_element(n, d, rng));
        if (is_semiregular(IdealSpec(std::move(gens))).semiregular)
            ++hits;
    });
    cell.successes = hits.load();
    report(opts, "cell n=" + std::to_string(n) + " m=" + std::to_string(m) + " d=" + std::to_string(d) + ": " +
                     cell.successes.str() + "/" + std::to_string(samples));
    return cell;
}

std::optional<bool> forced_verdict(int n, int m, int d) {
    if (d < 1 || d > n || m < 1)
        throw DomainError("forced_verdict needs 1 <= d <= n and m >= 1");
    if (d == 1) {
        // Linear sequences are semi-regular exactly when independent.
        if (m == 1)
            return true;
        if (m > n)
            return false;
        return std::nullopt;
    }
    if (m == 1 && d >= n - 1)
        return true;
    if (m == 1 && n > 3 * d)
        return false;
    // A semi-regular sequence has index tau; every generator has first fall
    // degree at most (n + d + 2) / 2, which must not lie below the index.
    if (2 * series::tau(repeated(d, m), n) > n + d + 2)
        return false;
    return std::nullopt;
}

BigInt quadratic_rank_count(int n, int r) {
    if (r < 0 || 2 * r > n)
        return 0;
    BigInt num = 1;
    BigInt den = 1;
    for (int i = 0; i < 2 * r; ++i)
        num *= (BigInt(1) << (n - i)) - 1;
    for (int i = 1; i <= r; ++i)
        den *= (BigInt(1) << (2 * i)) - 1;
    return num / den * (BigInt(1) << (r * (r - 1)));
}

Rational QuadraticCensus::proportion() const {
    if (population == 0)
        return 0;
    return Rational(semiregular, population);
}

QuadraticCensus quadratic_rank_classes(int n, const RunOptions& opts) {
    if (n < 2 || n > kMaxVariables)
        throw DomainError("quadratic census needs 2 <= n <= 64");
    QuadraticCensus census;
    census.n = n;
    census.mode = CellMode::by_theorem;
    census.population = (BigInt(1) << static_cast<unsigned>(binomial_u64(n, 2))) - 1;
    for (int r = 1; 2 * r <= n; ++r) {
        census.classes.push_back(representative_class(n, r));
        if (census.classes.back().semiregular)
            census.semiregular += census.classes.back().count;
        report(opts, "n=" + std::to_string(n) + " rank " + std::to_string(2 * r) + ": " +
                         census.classes.back().count.str() + " elements, " +
                         (census.classes.back().semiregular ? "semi-regular" : "not semi-regular"));
    }
    return census;
}

QuadraticCensus quadratic_census(int n, const RunOptions& opts, int representative_limit) {
    if (n < 2 || n > kMaxVariables)
        throw DomainError("quadratic census needs 2 <= n <= 64");
    if (n >= 7) {
        if (n <= representative_limit)
            return quadratic_rank_classes(n, opts);
        QuadraticCensus census;
        census.n = n;
        census.mode = CellMode::by_theorem;
        census.population = (BigInt(1) << static_cast<unsigned>(binomial_u64(n, 2))) - 1;
        for (int r = 1; 2 * r <= n; ++r) {
            RankClass c;
            c.rank = 2 * r;
            c.count = quadratic_rank_count(n, r);
            census.classes.push_back(std::move(c));
        }
        return census;
    }

    QuadraticCensus census;
    census.n = n;
    census.mode = CellMode::exhaustive;
    const std::vector<Mask> basis = monomials_of_degree(n, 2);
    const std::uint64_t total = (std::uint64_t{1} << basis.size()) - 1;
    census.population = total;

    std::vector<RankClass> classes;
    for (int r = 1; 2 * r <= n; ++r) {
        classes.push_back(representative_class(n, r));
        classes.back().count = 0;
    }
    std::vector<std::uint64_t> counts(classes.size(), 0);
    std::vector<std::uint8_t> mismatch(classes.size(), 0);
    std::mutex mu;

    constexpr std::uint64_t kChunk = 1024;
    const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
    parallel_for(chunks, resolve_threads(opts.threads), [&](std::size_t c) {
        std::vector<std::uint64_t> local(classes.size(), 0);
        std::vector<std::uint8_t> bad(classes.size(), 0);
        const std::uint64_t lo = 1 + c * kChunk;
        const std::uint64_t hi = std::min(total, lo + kChunk - 1);
        for (std::uint64_t pick = lo; pick <= hi; ++pick) {
            std::vector<Mask> support;
            for (std::size_t b = 0; b < basis.size(); ++b)
                if ((pick >> b) & 1U)
                    support.push_back(basis[b]);
            const Element q = Element::from_support(n, 2, std::move(support));
            const std::size_t cls = static_cast<std::size_t>(quadratic_rank(q) / 2 - 1);
            ++local[cls];
            const IdealSpec ideal({q});
            if (is_semiregular(ideal).semiregular != classes[cls].semiregular ||
                hilbert_series(ideal).dims != classes[cls].hilbert_dims)
                bad[cls] = 1;
        }
        std::lock_guard lock(mu);
        for (std::size_t i = 0; i < classes.size(); ++i) {
            counts[i] += local[i];
            mismatch[i] |= bad[i];
        }
    });

    for (std::size_t i = 0; i < classes.size(); ++i) {
        classes[i].count = counts[i];
        classes[i].uniform = mismatch[i] == 0;
        if (classes[i].semiregular)
            census.semiregular += counts[i];
    }
    census.classes = std::move(classes);
    report(opts, "census n=" + std::to_string(n) + ": " + census.semiregular.str() + "/" +
                     census.population.str() + " semi-regular");
    return census;
}

std::vector<CensusDiscrepancy> census_discrepancies(const RunOptions& opts) {
    // Two-digit proportions as printed: the summary table of the census
    // result and the derivation that accompanies it.
    struct Printed {
        int n;
        const char* table;
        const char* derivation;
    };
    static constexpr Printed kPrinted[] = {{4, "0.44", "0.44"}, {5, "0.85", "0.85"}, {6, "0.42", "0.43"}};

    std::vector<CensusDiscrepancy> out;
    for (const auto& p : kPrinted) {
        CensusDiscrepancy rec;
        rec.n = p.n;
        rec.exact = quadratic_census(p.n, opts).proportion();
        rec.published = {{"summary table", p.table}, {"census derivation", p.derivation}};
        const std::string rounded = two_digits(rec.exact);
        std::vector<std::string> off;
        for (const auto& v : rec.published)
            if (v.printed != rounded)
                off.push_back(v.source + " prints " + v.printed);
        const bool sources_disagree = std::string(p.table) != p.derivation;
        rec.flagged = sources_disagree || !off.empty();
        if (rec.flagged) {
            rec.note = "exact " + series::to_string(rec.exact) + " rounds to " + rounded;
            for (const auto& s : off)
                rec.note += "; " + s;
            if (sources_disagree)
                rec.note += "; published sources disagree with each other";
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<SigmaCell> sigma_table(int n_max, int d_max, const RunOptions& opts) {
    if (n_max < 1 || n_max > kMaxVariables || d_max < 1)
        throw DomainError("sigma table needs 1 <= n_max <= 64 and d_max >= 1");
    std::vector<SigmaCell> cells;
    for (int n = 1; n <= n_max; ++n)
        for (int d = 1; d <= std::min(n, d_max); ++d)
            cells.push_back({d, n, false, sigma_semiregular_predicted(d, n)});
    parallel_for(cells.size(), resolve_threads(opts.threads), [&](std::size_t i) {
        auto& c = cells[i];
        c.direct = is_semiregular(IdealSpec({sigma(c.d, c.n)})).semiregular;
    });
    report(opts, "sigma table: " + std::to_string(cells.size()) + " cells");
    return cells;
}

std::vector<ProportionCell> proportion_table(int n_min, int n_max, int m_min, int m_max, int d, int samples,
                                             std::uint64_t seed, const RunOptions& opts) {
    if (n_min > n_max || m_min > m_max || m_min < 1 || n_min < d)
        throw DomainError("proportion table needs nonempty ranges with n >= d and m >= 1");
    std::vector<ProportionCell> cells;
    for (int n = n_min; n <= n_max; ++n)
        for (int m = m_min; m <= m_max; ++m) {
            if (const auto forced = forced_verdict(n, m, d)) {
                ProportionCell cell{n, m, d, CellMode::by_theorem, population_of(n, m, d), 0};
                cell.successes = *forced ? cell.trials : BigInt(0);
                fill_index(cell);
                cells.push_back(std::move(cell));
            } else {
                cells.push_back(estimate_proportion(n, m, d, samples, seed, opts));
            }
        }
    return cells;
}

std::vector<ProportionCell> single_element_grid(int n_min, int n_max, int d_min, int d_max, int samples,
                                                std::uint64_t seed, const RunOptions& opts) {
    if (n_min > n_max || d_min > d_max || d_min < 1)
        throw DomainError("grid needs nonempty ranges with d >= 1");
    std::vector<ProportionCell> cells;
    for (int n = n_min; n <= n_max; ++n)
        for (int d = d_min; d <= std::min(n, d_max); ++d) {
            if (const auto forced = forced_verdict(n, 1, d)) {
                ProportionCell cell{n, 1, d, CellMode::by_theorem, population_of(n, 1, d), 0};
                cell.successes = *forced ? cell.trials : BigInt(0);
                fill_index(cell);
                cells.push_back(std::move(cell));
            } else {
                cells.push_back(estimate_proportion(n, 1, d, samples, seed, opts));
            }
        }
    return cells;
}

ThresholdReport threshold_scan(const series::DegreeVector& d, int n_min, int n_max, int empirical_limit,
                               int samples, std::uint64_t seed, const RunOptions& opts) {
    if (n_min < 0 || n_min > n_max)
        throw DomainError("threshold scan needs 0 <= n_min <= n_max");
    ThresholdReport rep;
    rep.degrees = d;
    rep.certificate = series::nonexistence_threshold(d);
    const int dj = rep.certificate.critical_degree;
    const auto& bound = rep.certificate.bound;
    const bool equal_degrees = std::all_of(d.begin(), d.end(), [&](int x) { return x == d[0]; });

    for (int n = n_min; n <= n_max; ++n) {
        ThresholdRow row;
        row.n = n;
        row.tau = series::tau(d, n);
        row.ffd_bound = Rational(n + dj + 2, 2);
        row.tau_exceeds = Rational(row.tau) > row.ffd_bound;
        row.above_certificate = n >= rep.certificate.N;
        row.linear_bound = bound.slope * n + bound.intercept;
        if ((row.above_certificate && !row.tau_exceeds) || Rational(row.tau) < row.linear_bound)
            rep.certificate_violations.push_back(n);
        if (n <= empirical_limit && n >= d[0] && n >= 2) {
            if (d.size() == 1 && d[0] == 2) {
                const auto census = quadratic_rank_classes(n, opts);
                ProportionCell cell{n, 1, 2, CellMode::by_theorem, census.population, census.semiregular};
                fill_index(cell);
                row.empirical = cell;
            } else if (equal_degrees) {
                row.empirical = estimate_proportion(n, static_cast<int>(d.size()), d[0], samples, seed, opts);
            }
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Output

nlohmann::json bigint_to_json(const BigInt& v) {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max())
        return v.convert_to<std::uint64_t>();
    if (v < 0 && v >= std::numeric_limits<std::int64_t>::min())
        return v.convert_to<std::int64_t>();
    return v.str();
}

nlohmann::json to_json(const ProportionCell& cell) {
    return {{"n", cell.n},
            {"m", cell.m},
            {"d", cell.d},
            {"mode", to_string(cell.mode)},
            {"trials", bigint_to_json(cell.trials)},
            {"successes", bigint_to_json(cell.successes)},
            {"estimate", cell.estimate()},
            {"t_index", cell.t_index},
            {"t_at_index", bigint_to_json(cell.t_at_index)}};
}

nlohmann::json to_json(const QuadraticCensus& census) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : census.classes) {
        nlohmann::json j{{"rank", c.rank},
                         {"count", bigint_to_json(c.count)},
                         {"semiregular", c.semiregular},
                         {"uniform", c.uniform}};
        if (!c.hilbert_dims.empty())
            j["hilbert_dims"] = c.hilbert_dims;
        classes.push_back(std::move(j));
    }
    const Rational p = census.proportion();
    return {{"n", census.n},
            {"mode", to_string(census.mode)},
            {"population", bigint_to_json(census.population)},
            {"semiregular", bigint_to_json(census.semiregular)},
            {"proportion", series::to_string(p)},
            {"proportion_decimal", p.convert_to<double>()},
            {"classes", classes}};
}

nlohmann::json to_json(const CensusDiscrepancy& record) {
    nlohmann::json published = nlohmann::json::array();
    for (const auto& p : record.published)
        published.push_back({{"source", p.source}, {"printed", p.printed}});
    return {{"n", record.n},
            {"exact", series::to_string(record.exact)},
            {"exact_decimal", record.exact.convert_to<double>()},
            {"published", published},
            {"flagged", record.flagged},
            {"note", record.note}};
}

nlohmann::json to_json(const SigmaCell& cell) {
    return {{"d", cell.d}, {"n", cell.n}, {"direct", cell.direct}, {"predicted", cell.predicted}};
}

nlohmann::json to_json(const ThresholdReport& report) {
    const auto& cert = report.certificate;
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& s : cert.bound.chain)
        chain.push_back({{"degree", s.degree}, {"N", s.N}, {"tau", s.tau_at_N}, {"slope", series::to_string(s.slope)}});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json j{{"n", r.n},
                         {"tau", r.tau},
                         {"ffd_bound", series::to_string(r.ffd_bound)},
                         {"tau_exceeds", r.tau_exceeds},
                         {"above_certificate", r.above_certificate},
                         {"linear_bound", series::to_string(r.linear_bound)}};
        if (r.empirical)
            j["empirical"] = to_json(*r.empirical);
        rows.push_back(std::move(j));
    }
    return {{"degrees", report.degrees.to_string()},
            {"certificate",
             {{"N", cert.N},
              {"critical_degree", cert.critical_degree},
              {"slope", series::to_string(cert.bound.slope)},
              {"intercept", series::to_string(cert.bound.intercept)},
              {"chain", chain}}},
            {"rows", rows},
            {"violations", report.certificate_violations}};
}

void write_csv(std::ostream& out, const std::vector<ProportionCell>& cells) {
    out << "n,m,d,mode,trials,successes,estimate\n";
    for (const auto& c : cells) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", c.estimate());
        out << c.n << ',' << c.m << ',' << c.d << ',' << to_string(c.mode) << ',' << c.trials.str() << ','
            << c.successes.str() << ',' << buf << '\n';
    }
}

} // namespace semireg::experiments
