#include "semireg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "semireg/boolean_ring.hpp"
#include "semireg/errors.hpp"
#include "semireg/experiments.hpp"
#include "semireg/semiregularity.hpp"
#include "semireg/series.hpp"

namespace semireg::cli {

namespace {

using nlohmann::json;
namespace ex = experiments;

struct Flags {
    std::optional<int> n;
    std::string d;
    int m = 1;
    std::vector<std::string> gens;
    std::string gens_file;
    int samples = 20;
    unsigned long long seed = kDefaultSeed;
    std::optional<int> horizon;
    std::string format = "json";
    std::string out_path;
    int threads = 0;
    int n_min = 0;
    int n_max = 0;
    int m_min = 0;
    int m_max = 0;
    int d_min = 0;
    int d_max = 0;
    int empirical_limit = 14;
    int verify_to = 200;
    bool audit = false;
};

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<Element> load_elements(const Flags& f) {
    std::vector<std::string> texts;
    for (const auto& g : f.gens) {
        std::stringstream ss(g);
        std::string piece;
        while (std::getline(ss, piece, ';'))
            if (!trim(piece).empty())
                texts.push_back(trim(piece));
    }
    if (!f.gens_file.empty()) {
        std::ifstream in(f.gens_file);
        if (!in)
            throw ParseError("cannot read generator file '" + f.gens_file + "'");
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (!line.empty() && line.front() != '#')
                texts.push_back(line);
        }
    }
    if (texts.empty())
        throw ParseError("no generators given (use --gens or --gens-file)");
    std::vector<Element> out;
    for (const auto& t : texts) {
        out.push_back(parse_element(t));
        if (f.n && out.back().ambient() != *f.n)
            throw DimensionError("generator '" + t + "' lives in B(" + std::to_string(out.back().ambient()) +
                                 "), but --n is " + std::to_string(*f.n));
    }
    return out;
}

int require_n(const Flags& f) {
    if (!f.n)
        throw ParseError("--n is required");
    return *f.n;
}

series::DegreeVector require_d(const Flags& f) {
    if (f.d.empty())
        throw ParseError("--d is required");
    return series::DegreeVector::parse(f.d);
}

int single_d(const Flags& f) {
    const auto d = require_d(f);
    if (d.size() != 1)
        throw ParseError("--d must be a single degree here");
    return d[0];
}

std::string join(const json& arr, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i)
            s += sep;
        s += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
    }
    return s;
}

std::string fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

// Renders an (n x column) grid of proportion cells.
std::string render_grid(const std::vector<ex::ProportionCell>& cells, bool by_m, const char* corner) {
    std::map<int, std::map<int, const ex::ProportionCell*>> grid;
    std::map<int, int> columns;
    for (const auto& c : cells) {
        const int col = by_m ? c.m : c.d;
        grid[c.n][col] = &c;
        columns[col] = 1;
    }
    std::ostringstream os;
    os << std::setw(5) << corner;
    for (const auto& [col, _] : columns)
        os << std::setw(6) << col;
    os << '\n';
    for (const auto& [n, row] : grid) {
        os << std::setw(5) << n;
        for (const auto& [col, _] : columns) {
            auto it = row.find(col);
            if (it == row.end()) {
                os << std::setw(6) << "";
                continue;
            }
            const auto* c = it->second;
            os << std::setw(5) << fixed2(c->estimate()) << (c->mode == ex::CellMode::by_theorem ? '*' : ' ');
        }
        os << '\n';
    }
    os << "(* forced by theorem)\n";
    return os.str();
}

struct Result {
    json data;
    std::string text;
    std::string csv;
};

Result cmd_hilbert(const Flags& f) {
    const IdealSpec ideal(load_elements(f));
    const auto hs = hilbert_series(ideal);
    Result r;
    r.data = {{"n", ideal.ambient()}, {"index", hs.index}, {"hilbert_dims", hs.dims}, {"ranks_used", hs.ranks}};
    r.text = "index: " + std::to_string(hs.index) + "\ndims: " + join(r.data["hilbert_dims"]) + "\n";
    return r;
}

Result cmd_check(const Flags& f) {
    const IdealSpec ideal(load_elements(f));
    Result r;
    r.data = decision_report(ideal);
    r.data["n"] = ideal.ambient();
    r.data["degrees"] = ideal.degrees().to_string();
    r.data["ffd_veto"] = ffd_vs_index_veto(ideal);
    r.data["trivially_semiregular"] = is_trivially_semiregular(ideal);
    if (ideal.size() == 1 && 3 * ideal[0].degree() >= ideal.ambient())
        r.data["via_maps"] = semiregular_via_maps(ideal[0]);
    std::ostringstream os;
    os << "verdict: " << (r.data["verdict"].get<bool>() ? "semi-regular" : "not semi-regular") << '\n'
       << "index: " << r.data["index"] << " (series index " << r.data["series_index"] << ")\n"
       << "hilbert: " << join(r.data["hilbert_dims"]) << '\n'
       << "[T]:     " << join(r.data["t_coeffs"]) << '\n';
    if (!r.data["first_divergence"].is_null())
        os << "first divergence at degree " << r.data["first_divergence"] << '\n';
    os << "ffd: " << join(r.data["ffd"]) << '\n';
    r.text = os.str();
    return r;
}

Result cmd_ffd(const Flags& f) {
    Result r;
    r.data = json::array();
    for (const auto& e : load_elements(f)) {
        const auto v = first_fall_degree(e);
        json row{{"element", to_text(e)}, {"ffd", v ? json(*v) : json("inf")}};
        if (e.degree() == 2)
            row["rank"] = quadratic_rank(e);
        r.text += to_text(e) + "  ffd=" + (v ? std::to_string(*v) : std::string("inf")) + "\n";
        r.data.push_back(std::move(row));
    }
    return r;
}

Result cmd_t_series(const Flags& f) {
    const int n = require_n(f);
    const auto d = require_d(f);
    const std::size_t horizon = f.horizon ? static_cast<std::size_t>(*f.horizon) : static_cast<std::size_t>(n) + 2;
    const auto t = series::T_series(d, n, horizon);
    const auto idx = series::series_index(t);
    Result r;
    r.data = {{"d", d.to_string()}, {"n", n}, {"horizon", horizon}, {"coefficients", series::to_json(t)}};
    r.data["index"] = idx ? json(*idx) : json();
    if (idx)
        r.data["truncated"] = series::to_json(series::truncate(t, *idx));
    r.text = "coefficients: " + join(r.data["coefficients"]) + "\n";
    r.text += idx ? "index: " + std::to_string(*idx) + "\n[T]: " + join(r.data["truncated"]) + "\n"
                  : "index: beyond horizon\n";
    return r;
}

Result cmd_tau(const Flags& f) {
    const auto d = require_d(f);
    int lo = f.n_min;
    int hi = f.n_max;
    if (f.n)
        lo = hi = *f.n;
    if (hi < lo)
        throw ParseError("give --n or a range --n-min..--n-max");
    Result r;
    r.data = {{"d", d.to_string()}, {"values", json::array()}};
    for (int n = lo; n <= hi; ++n) {
        const int t = series::tau(d, n);
        r.data["values"].push_back({{"n", n}, {"tau", t}});
        r.text += "tau(" + std::to_string(n) + ") = " + std::to_string(t) + "\n";
    }
    return r;
}

Result cmd_sigma(const Flags& f) {
    const int n = require_n(f);
    const int d = single_d(f);
    const Element s = sigma(d, n);
    Result r;
    r.data = {{"d", d}, {"n", n}, {"element", to_text(s)}};
    r.data["predicted"] = sigma_semiregular_predicted(d, n);
    const IdealSpec ideal({s});
    r.data["report"] = decision_report(ideal);
    r.data["direct"] = r.data["report"]["verdict"];
    if (3 * d >= n)
        r.data["via_maps"] = semiregular_via_maps(s);
    r.text = "sigma_" + std::to_string(d) + "," + std::to_string(n) + ": direct " +
             (r.data["direct"].get<bool>() ? "semi-regular" : "not semi-regular") + ", predicted " +
             (r.data["predicted"].get<bool>() ? "semi-regular" : "not semi-regular") + "\n";
    return r;
}

Result cmd_census(const Flags& f, const ex::RunOptions& opts) {
    const int n = require_n(f);
    const auto census = ex::quadratic_census(n, opts);
    Result r;
    r.data = ex::to_json(census);
    std::ostringstream os;
    os << "n=" << n << " (" << ex::to_string(census.mode) << "): " << census.semiregular << " / "
       << census.population << " semi-regular = " << series::to_string(census.proportion()) << '\n';
    for (const auto& c : census.classes) {
        os << "  rank " << c.rank << ": " << c.count << (c.semiregular ? " semi-regular" : " not semi-regular");
        if (!c.hilbert_dims.empty()) {
            os << ", hilbert";
            for (auto v : c.hilbert_dims)
                os << ' ' << v;
        }
        os << '\n';
    }
    if (f.audit) {
        r.data["discrepancies"] = json::array();
        for (const auto& rec : ex::census_discrepancies(opts)) {
            r.data["discrepancies"].push_back(ex::to_json(rec));
            if (rec.flagged)
                os << "FLAG n=" << rec.n << ": " << rec.note << '\n';
        }
    }
    r.text = os.str();
    return r;
}

Result cells_result(const std::vector<ex::ProportionCell>& cells, const Flags& f, bool by_m) {
    Result r;
    r.data = {{"seed", f.seed}, {"samples", f.samples}, {"cells", json::array()}};
    for (const auto& c : cells)
        r.data["cells"].push_back(ex::to_json(c));
    std::ostringstream csv;
    ex::write_csv(csv, cells);
    r.csv = csv.str();
    r.text = "seed " + std::to_string(f.seed) + ", " + std::to_string(f.samples) + " samples per cell\n" +
             render_grid(cells, by_m, by_m ? "n\\m" : "n\\d");
    return r;
}

Result cmd_table1(const Flags& f, const ex::RunOptions& opts) {
    const int d = f.d.empty() ? 2 : single_d(f);
    const int n_min = f.n_min ? f.n_min : 3;
    const int n_max = f.n_max ? f.n_max : 15;
    const int m_min = f.m_min ? f.m_min : 2;
    const int m_max = f.m_max ? f.m_max : 15;
    return cells_result(ex::proportion_table(n_min, n_max, m_min, m_max, d, f.samples, f.seed, opts), f, true);
}

Result cmd_table2(const Flags& f, const ex::RunOptions& opts) {
    const int n_min = f.n_min ? f.n_min : 4;
    const int n_max = f.n_max ? f.n_max : 10;
    const int d_min = f.d_min ? f.d_min : 2;
    const int d_max = f.d_max ? f.d_max : 10;
    return cells_result(ex::single_element_grid(n_min, n_max, d_min, d_max, f.samples, f.seed, opts), f, false);
}

Result cmd_sigma_table(const Flags& f, const ex::RunOptions& opts) {
    const int n_max = f.n_max ? f.n_max : 14;
    const int d_max = f.d_max ? f.d_max : 14;
    const auto cells = ex::sigma_table(n_max, d_max, opts);
    Result r;
    r.data = {{"n_max", n_max}, {"d_max", d_max}, {"cells", json::array()}};
    int mismatches = 0;
    std::map<int, std::map<int, bool>> grid;
    std::ostringstream csv;
    csv << "d,n,direct,predicted\n";
    for (const auto& c : cells) {
        r.data["cells"].push_back(ex::to_json(c));
        mismatches += c.direct != c.predicted;
        grid[c.n][c.d] = c.direct;
        csv << c.d << ',' << c.n << ',' << c.direct << ',' << c.predicted << '\n';
    }
    r.data["mismatches"] = mismatches;
    std::ostringstream os;
    os << "n\\d";
    for (int d = 1; d <= d_max; ++d)
        os << std::setw(3) << d;
    os << '\n';
    for (const auto& [n, row] : grid) {
        os << std::setw(3) << n;
        for (int d = 1; d <= d_max; ++d) {
            auto it = row.find(d);
            os << std::setw(3) << (it != row.end() && it->second ? "x" : "");
        }
        os << '\n';
    }
    os << "mismatches with the closed form: " << mismatches << '\n';
    r.text = os.str();
    r.csv = csv.str();
    return r;
}

Result cmd_certificate(const Flags& f) {
    const auto d = require_d(f);
    std::vector<series::SlopeCertificate> slopes;
    for (int di : d)
        slopes.push_back(series::single_degree_slope_certificate(di));
    const auto bound = series::linear_lower_bound(d, slopes);
    Result r;
    json chain = json::array();
    for (const auto& s : bound.chain)
        chain.push_back({{"degree", s.degree}, {"N", s.N}, {"tau", s.tau_at_N}, {"slope", series::to_string(s.slope)}});
    json constants = json::array();
    for (const auto& c : bound.constants)
        constants.push_back(series::to_string(c));
    r.data = {{"d", d.to_string()},
              {"slope", series::to_string(bound.slope)},
              {"intercept", series::to_string(bound.intercept)},
              {"chain", chain},
              {"constants", constants}};
    int failures = 0;
    for (int n = 0; n <= f.verify_to; ++n)
        failures += series::Rational(series::tau(d, n)) < bound.slope * n + bound.intercept;
    r.data["verified_to"] = f.verify_to;
    r.data["verification_failures"] = failures;
    std::ostringstream os;
    os << "tau_(" << d.to_string() << ")(n) >= " << series::to_string(bound.slope) << " n + "
       << series::to_string(bound.intercept) << "  (checked n <= " << f.verify_to << ", " << failures
       << " failures)\n";
    try {
        const auto th = series::nonexistence_threshold(d, bound);
        r.data["threshold"] = th.N;
        r.data["critical_degree"] = th.critical_degree;
        os << "no semi-regular sequence of this type for n >= " << th.N << '\n';
    } catch (const InapplicableError& e) {
        r.data["threshold"] = json();
        os << "threshold: " << e.what() << '\n';
    }
    r.text = os.str();
    return r;
}

Result cmd_threshold_scan(const Flags& f, const ex::RunOptions& opts) {
    const auto d = require_d(f);
    const int n_min = f.n_min ? f.n_min : 1;
    const int n_max = f.n_max ? f.n_max : 200;
    const auto rep = ex::threshold_scan(d, n_min, n_max, f.empirical_limit, f.samples, f.seed, opts);
    Result r;
    r.data = ex::to_json(rep);
    r.data["seed"] = f.seed;
    std::ostringstream os;
    os << "certificate: tau >= " << series::to_string(rep.certificate.bound.slope) << " n + "
       << series::to_string(rep.certificate.bound.intercept) << ", threshold N = " << rep.certificate.N << '\n';
    for (const auto& row : rep.rows) {
        os << "n=" << std::setw(4) << row.n << " tau=" << std::setw(4) << row.tau << " bound "
           << series::to_string(row.ffd_bound) << (row.tau_exceeds ? "  excluded" : "");
        if (row.empirical)
            os << "  found " << row.empirical->successes << "/" << row.empirical->trials << " ("
               << ex::to_string(row.empirical->mode) << ")";
        os << '\n';
    }
    os << "violations: " << rep.certificate_violations.size() << '\n';
    r.text = os.str();
    return r;
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--format", f.format, "json (default), text or csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    sub->add_option("--out", f.out_path, "write the result to this file");
    sub->add_option("--threads", f.threads, "worker threads (default: SEMIREG_THREADS or all cores)");
}

void add_gens(CLI::App* sub, Flags& f) {
    sub->add_option("--n", f.n, "number of variables (checked against the generators)");
    sub->add_option("--gens", f.gens, "generators in d:n:{i.j,...} form; repeat or separate with ';'");
    sub->add_option("--gens-file", f.gens_file, "file with one generator per line");
}

void add_sampling(CLI::App* sub, Flags& f) {
    sub->add_option("--samples", f.samples, "samples per cell")->check(CLI::PositiveNumber);
    sub->add_option("--seed", f.seed, "master seed (default " + std::to_string(kDefaultSeed) + ")");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semi-regular sequences in the Boolean ring B(n)"};
    app.require_subcommand(1);
    Flags f;

    auto* hilbert = app.add_subcommand("hilbert", "Hilbert function of B/I");
    add_gens(hilbert, f);
    auto* check = app.add_subcommand("check", "semi-regularity decision report");
    add_gens(check, f);
    auto* ffd = app.add_subcommand("ffd", "first fall degree of each element");
    add_gens(ffd, f);
    auto* tser = app.add_subcommand("t-series", "coefficients of (1+z)^n / prod (1+z^d_i)");
    tser->add_option("--n", f.n, "number of variables")->required();
    tser->add_option("--d", f.d, "degrees, e.g. 2 or 2,2,3")->required();
    tser->add_option("--horizon", f.horizon, "number of coefficients (default n+2)")->check(CLI::PositiveNumber);
    auto* tau = app.add_subcommand("tau", "index of the T series");
    tau->add_option("--d", f.d, "degrees")->required();
    tau->add_option("--n", f.n, "number of variables");
    tau->add_option("--n-min", f.n_min, "range start");
    tau->add_option("--n-max", f.n_max, "range end");
    auto* sig = app.add_subcommand("sigma", "test the elementary symmetric polynomial sigma_{d,n}");
    sig->add_option("--n", f.n, "number of variables")->required();
    sig->add_option("--d", f.d, "degree")->required();
    auto* census = app.add_subcommand("census", "census of quadratics in B(n) by rank");
    census->add_option("--n", f.n, "number of variables")->required();
    census->add_flag("--audit", f.audit, "compare n = 4..6 with the published two-digit proportions");
    auto* table1 = app.add_subcommand("table1", "proportions pi(n, m, d) of semi-regular sequences");
    table1->add_option("--d", f.d, "degree (default 2)");
    table1->add_option("--n-min", f.n_min, "default 3");
    table1->add_option("--n-max", f.n_max, "default 15");
    table1->add_option("--m-min", f.m_min, "default 2");
    table1->add_option("--m-max", f.m_max, "default 15");
    add_sampling(table1, f);
    auto* table2 = app.add_subcommand("table2", "proportions pi(n, 1, d) of semi-regular elements");
    table2->add_option("--n-min", f.n_min, "default 4");
    table2->add_option("--n-max", f.n_max, "default 10");
    table2->add_option("--d-min", f.d_min, "default 2");
    table2->add_option("--d-max", f.d_max, "default 10");
    add_sampling(table2, f);
    auto* sigtab = app.add_subcommand("sigma-table", "semi-regularity of sigma_{d,n}, direct vs closed form");
    sigtab->add_option("--n-max", f.n_max, "default 14");
    sigtab->add_option("--d-max", f.d_max, "default 14");
    auto* cert = app.add_subcommand("certificate", "linear lower bound for tau and the non-existence threshold");
    cert->add_option("--d", f.d, "degrees")->required();
    cert->add_option("--verify-to", f.verify_to, "check the bound for n up to this value");
    auto* scan = app.add_subcommand("threshold-scan", "tau against the first-fall-degree bound, with counts");
    scan->add_option("--d", f.d, "degrees")->required();
    scan->add_option("--n-min", f.n_min, "default 1");
    scan->add_option("--n-max", f.n_max, "default 200");
    scan->add_option("--empirical-limit", f.empirical_limit, "largest n with direct counts (default 14)");
    add_sampling(scan, f);

    for (auto* sub : {hilbert, check, ffd, tser, tau, sig, census, table1, table2, sigtab, cert, scan})
        add_common(sub, f);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    ex::RunOptions opts;
    opts.threads = ex::resolve_threads(f.threads);
    opts.progress = &err;

    try {
        Result r;
        if (hilbert->parsed())
            r = cmd_hilbert(f);
        else if (check->parsed())
            r = cmd_check(f);
        else if (ffd->parsed())
            r = cmd_ffd(f);
        else if (tser->parsed())
            r = cmd_t_series(f);
        else if (tau->parsed())
            r = cmd_tau(f);
        else if (sig->parsed())
            r = cmd_sigma(f);
        else if (census->parsed())
            r = cmd_census(f, opts);
        else if (table1->parsed())
            r = cmd_table1(f, opts);
        else if (table2->parsed())
            r = cmd_table2(f, opts);
        else if (sigtab->parsed())
            r = cmd_sigma_table(f, opts);
        else if (cert->parsed())
            r = cmd_certificate(f);
        else
            r = cmd_threshold_scan(f, opts);

        std::string payload;
        if (f.format == "json")
            payload = r.data.dump(2) + "\n";
        else if (f.format == "text")
            payload = r.text;
        else if (!r.csv.empty())
            payload = r.csv;
        else
            throw ParseError("csv output is only available for table1, table2 and sigma-table");

        if (f.out_path.empty()) {
            out << payload;
        } else {
            std::ofstream file(f.out_path);
            if (!file)
                throw ParseError("cannot write '" + f.out_path + "'");
            file << payload;
            err << "wrote " << f.out_path << '\n';
        }
        return kExitOk;
    } catch (const InapplicableError& e) {
        err << "inapplicable: " << e.what() << '\n';
        return kExitInapplicable;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const InconclusiveError& e) {
        err << "inconclusive: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace semireg::cli
