#include "qri/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include "qri/coverage.hpp"
#include "qri/distribution.hpp"
#include "qri/error.hpp"
#include "qri/estimation.hpp"
#include "qri/grouped.hpp"
#include "qri/partition.hpp"
#include "qri/theory.hpp"
#include "qri/version.hpp"

namespace qri::cli {

namespace {

using nlohmann::json;

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what), "cannot parse number '" + tok + "'");
        }
    }
    return out;
}

// --partition / --equi flags shared by several subcommands.
struct PartitionOpt {
    std::string cuts_text;
    std::size_t equi = 0;

    void attach(CLI::App* cmd) {
        auto* a = cmd->add_option("--partition", cuts_text,
                                  "interior cuts of a symmetric partition, e.g. 0.2,0.4");
        auto* b = cmd->add_option("--equi", equi, "equi-K partition with K members");
        a->excludes(b);
    }

    bool given() const { return !cuts_text.empty() || equi > 0; }

    SymmetricPartition resolve() const {
        if (equi > 0) return equi_partition(equi);
        return make_partition(parse_number_list(cuts_text, "--partition"));
    }
};

std::vector<double> read_incomes(std::istream& in) {
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(line, &used);
            while (used < line.size() && std::isspace(static_cast<unsigned char>(line[used]))) {
                ++used;
            }
            if (used != line.size()) throw std::invalid_argument(line);
            out.push_back(v);
        } catch (const std::exception&) {
            if (first) {  // header
                first = false;
                continue;
            }
            throw Error("BadIncomeRow", "unparseable income row: " + line);
        }
        first = false;
    }
    return out;
}

std::vector<double> read_incomes_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("FileNotFound", "cannot open " + path);
    return read_incomes(in);
}

std::string fmt4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

json estimate_json(const QriEstimate& e) {
    json j;
    j["value"] = e.value;
    if (e.se) j["se"] = *e.se;
    if (e.ci_low) {
        j["ci_low"] = *e.ci_low;
        j["ci_high"] = *e.ci_high;
        j["ci_low_clipped"] = e.ci_low_clipped();
        j["ci_high_clipped"] = e.ci_high_clipped();
    }
    j["alpha"] = e.alpha;
    if (e.grid_j) {
        j["grid_j"] = *e.grid_j;
    } else {
        j["grid_j"] = "exact";
    }
    if (e.se_borrowed_from_grid) j["se_borrowed_from_grid"] = true;
    j["variance_clamps"] = e.variance_clamps;
    return j;
}

json partition_json(const SymmetricPartition& p) {
    return json{{"cuts", p.cuts}, {"weights", p.weights}};
}

json envelope(const std::string& command, json config) {
    json j;
    j["tool"] = "qri";
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

void print_config_line(std::ostream& out, const json& config) {
    out << "# config " << config.dump() << "\n";
}

void print_estimate_row(std::ostream& out, const std::string& label, const QriEstimate& e) {
    out << std::left << std::setw(10) << label << " " << fmt4(e.value);
    if (e.se) {
        out << "  se " << fmt4(*e.se) << "  ci [" << fmt4(e.ci_low_clipped()) << ", "
            << fmt4(e.ci_high_clipped()) << "]";
        if (e.se_borrowed_from_grid) out << "  (se from J=100 grid)";
    }
    if (e.variance_clamps > 0) out << "  [variance clamped]";
    out << "\n";
}

struct OutputOpt {
    std::string format = "table";

    void attach(CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"table", "json"}))
            ->capture_default_str();
    }
    bool table() const { return format == "table"; }
};

// ---- estimate / decompose-exact ------------------------------------------

struct EstimateArgs {
    std::string in_path;
    PartitionOpt partition;
    std::size_t grid_j = 100;
    double alpha = 0.05;
    std::string method = "grid";
    std::optional<double> bandwidth;
    OutputOpt output;
};

int run_estimate(const EstimateArgs& a, std::ostream& out, bool force_exact) {
    SortedSample s = ingest(read_incomes_file(a.in_path));
    BandwidthPolicy policy{a.bandwidth};
    const bool exact = force_exact || a.method == "exact";

    json config{{"in", a.in_path},       {"grid_j", a.grid_j},
                {"alpha", a.alpha},      {"method", exact ? "exact" : "grid"},
                {"n", s.n()},            {"zero_fraction", s.zero_fraction},
                {"bandwidth", policy.resolve(s.n())}};

    std::optional<SymmetricPartition> part;
    if (a.partition.given()) part = a.partition.resolve();
    if (part) config["partition"] = partition_json(*part);

    json results;
    std::ostringstream table;
    if (part) {
        DecompositionEstimate d =
            exact ? exact_ik(s, *part, /*with_grid_se=*/true, a.alpha, policy)
                  : ik_hat_grid(s, *part, a.grid_j, a.alpha, policy);
        results["components"] = json::array();
        for (std::size_t k = 0; k < d.components.size(); ++k) {
            results["components"].push_back(estimate_json(d.components[k]));
            print_estimate_row(table, "I_" + std::to_string(k + 1), d.components[k]);
        }
        results["total"] = estimate_json(d.total);
        print_estimate_row(table, "I", d.total);
    } else {
        QriEstimate e = exact ? exact_i(s, /*with_grid_se=*/true, a.alpha, policy)
                              : i_hat_grid(s, a.grid_j, a.alpha, policy);
        results["total"] = estimate_json(e);
        print_estimate_row(table, "I", e);
    }

    if (a.output.table()) {
        print_config_line(out, config);
        out << table.str();
    } else {
        json j = envelope(force_exact ? "decompose-exact" : "estimate", config);
        j["results"] = std::move(results);
        out << j.dump(2) << "\n";
    }
    return 0;
}

// ---- theory ----------------------------------------------------------------

struct TheoryArgs {
    std::string dist_text;
    PartitionOpt partition;
    double abs_tol = 1e-8;
    std::string curve_path;
    std::size_t curve_points = 200;
    OutputOpt output;
};

int run_theory(const TheoryArgs& a, std::ostream& out) {
    const DistributionSpec d = parse_distribution(a.dist_text);
    QuadratureConfig cfg;
    cfg.abs_tol = a.abs_tol;

    json config{{"dist", d.label()}, {"abs_tol", cfg.abs_tol}, {"quadrature", cfg.method}};
    std::optional<SymmetricPartition> part;
    if (a.partition.given()) part = a.partition.resolve();
    if (part) config["partition"] = partition_json(*part);

    const double total = true_i(d, cfg);
    json results{{"I", total}};
    std::ostringstream table;
    table << "I          " << fmt4(total) << "\n";
    if (part) {
        const auto comps = true_ik(d, *part, cfg);
        results["I_k"] = comps;
        results["weights"] = part->weights;
        for (std::size_t k = 0; k < comps.size(); ++k) {
            table << "I_" << (k + 1) << "        " << fmt4(comps[k]) << "  (weight "
                  << fmt4(part->weights[k]) << ")\n";
        }
    }
    if (!a.curve_path.empty()) {
        std::ofstream curve(a.curve_path);
        if (!curve) throw Error("FileNotFound", "cannot write " + a.curve_path);
        curve << "p,R\n";
        curve << std::setprecision(17);
        for (std::size_t i = 1; i <= a.curve_points; ++i) {
            const double p = static_cast<double>(i) / static_cast<double>(a.curve_points);
            curve << p << "," << true_r(d, p) << "\n";
        }
        config["curve"] = a.curve_path;
        config["curve_points"] = a.curve_points;
    }

    if (a.output.table()) {
        print_config_line(out, config);
        out << table.str();
    } else {
        json j = envelope("theory", config);
        j["results"] = std::move(results);
        out << j.dump(2) << "\n";
    }
    return 0;
}

// ---- synth / percentiles / kde ---------------------------------------------

struct SynthArgs {
    std::string bins_path;
    double tail_shape = 4.0;
    double scale = 10.0;
    std::uint64_t seed = 0;
    std::string out_path;
    OutputOpt output;
};

int run_synth(const SynthArgs& a, std::ostream& out) {
    GroupedBins bins = parse_bins_file(a.bins_path);
    SynthConfig cfg;
    cfg.tail_shape = a.tail_shape;
    cfg.count_scale = a.scale;
    cfg.rng = SeededRng(a.seed);
    SortedSample pop = synth_population(bins, cfg);

    std::ofstream f(a.out_path);
    if (!f) throw Error("FileNotFound", "cannot write " + a.out_path);
    f << "income\n" << std::setprecision(17);
    for (double v : pop.values) f << v << "\n";

    json config{{"bins", a.bins_path}, {"tail_shape", a.tail_shape},
                {"scale", a.scale},    {"seed", a.seed},
                {"rng", SeededRng::algorithm()}, {"out", a.out_path}};
    json results{{"population_size", pop.n()},
                 {"zero_fraction", pop.zero_fraction},
                 {"table_total", bins.total}};
    if (bins.has_open()) results["tail_scale_lambda"] = tail_scale(bins, a.tail_shape);

    if (a.output.table()) {
        print_config_line(out, config);
        out << "population " << pop.n() << " values -> " << a.out_path << "\n";
    } else {
        json j = envelope("synth", config);
        j["results"] = std::move(results);
        out << j.dump(2) << "\n";
    }
    return 0;
}

struct PercentilesArgs {
    std::string in_path;
    std::string probs_text = "0.05,0.1,0.2,0.25,0.5,0.75,0.8,0.9,0.95";
    OutputOpt output;
};

int run_percentiles(const PercentilesArgs& a, std::ostream& out) {
    SortedSample s = ingest(read_incomes_file(a.in_path));
    const auto probs = parse_number_list(a.probs_text, "--probs");
    PercentileTable t = percentile_table(s, probs);

    json config{{"in", a.in_path}, {"probs", probs}, {"n", s.n()}};
    if (a.output.table()) {
        print_config_line(out, config);
        for (const auto& [p, v] : t.rows) {
            out << "P" << std::setw(2) << std::setfill('0')
                << static_cast<int>(std::lround(p * 100)) << std::setfill(' ') << "   "
                << fmt4(v) << "\n";
        }
        out << "max   " << fmt4(t.max) << "\n";
    } else {
        json rows = json::array();
        for (const auto& [p, v] : t.rows) rows.push_back(json{{"p", p}, {"value", v}});
        json j = envelope("percentiles", config);
        j["results"] = json{{"rows", rows}, {"max", t.max}};
        out << j.dump(2) << "\n";
    }
    return 0;
}

struct KdeArgs {
    std::string in_path;
    double truncate = 2500.0;
    std::size_t grid_points = 512;
    std::string out_path;
    OutputOpt output;
};

int run_kde(const KdeArgs& a, std::ostream& out) {
    SortedSample s = ingest(read_incomes_file(a.in_path));
    const auto curve = kde_export(s, a.truncate, a.grid_points);

    std::ofstream f(a.out_path);
    if (!f) throw Error("FileNotFound", "cannot write " + a.out_path);
    f << "x,density\n" << std::setprecision(17);
    for (const auto& [x, dens] : curve) f << x << "," << dens << "\n";

    json config{{"in", a.in_path},
                {"truncate", a.truncate},
                {"grid_points", a.grid_points},
                {"out", a.out_path},
                {"n", s.n()}};
    if (a.output.table()) {
        print_config_line(out, config);
        out << "kde curve with " << curve.size() << " points -> " << a.out_path << "\n";
    } else {
        json j = envelope("kde", config);
        j["results"] = json{{"points", curve.size()}, {"out", a.out_path}};
        out << j.dump(2) << "\n";
    }
    return 0;
}

// ---- coverage ----------------------------------------------------------------

struct CoverageArgs {
    std::string dist_text;
    std::size_t n = 1000;
    PartitionOpt partition;
    std::size_t trials = 1000;
    std::size_t grid_j = 100;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::optional<double> bandwidth;
    std::string out_path;
    OutputOpt output;
};

int run_coverage(const CoverageArgs& a, std::ostream& out) {
    CoverageConfig cfg{parse_distribution(a.dist_text),
                       a.n,
                       a.partition.given() ? a.partition.resolve()
                                           : make_partition({0.25}),
                       a.trials,
                       a.grid_j,
                       a.alpha,
                       a.seed,
                       BandwidthPolicy{a.bandwidth},
                       a.threads};
    CoverageReport rep = coverage_experiment(cfg);

    json config{{"dist", cfg.dist.label()},
                {"n", cfg.n},
                {"partition", partition_json(cfg.partition)},
                {"trials", cfg.trials},
                {"grid_j", cfg.grid_j},
                {"alpha", cfg.alpha},
                {"nominal", 1.0 - cfg.alpha},
                {"seed", cfg.seed},
                {"rng", SeededRng::algorithm()},
                {"bandwidth", cfg.bandwidth.resolve(cfg.n)}};
    json comps = json::array();
    for (const auto& c : rep.per_component) {
        comps.push_back(json{{"true_value", c.true_value},
                             {"hits", c.hits},
                             {"coverage", c.coverage},
                             {"mean_ci_width", c.mean_ci_width},
                             {"mean_estimate", c.mean_estimate}});
    }
    json j = envelope("coverage", config);
    j["results"] = json{{"per_component", comps}, {"failed_trials", rep.failed_trials}};

    if (!a.out_path.empty()) {
        std::ofstream f(a.out_path);
        if (!f) throw Error("FileNotFound", "cannot write " + a.out_path);
        f << j.dump(2) << "\n";
    }
    if (a.output.table()) {
        print_config_line(out, config);
        for (std::size_t k = 0; k < rep.per_component.size(); ++k) {
            const auto& c = rep.per_component[k];
            out << "I_" << (k + 1) << "  true " << fmt4(c.true_value) << "  coverage "
                << fmt4(c.coverage) << "  mean width " << fmt4(c.mean_ci_width) << "\n";
        }
        if (rep.failed_trials > 0) out << "failed trials: " << rep.failed_trials << "\n";
    } else {
        out << j.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quantile ratio index toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    EstimateArgs est;
    auto* c_est = app.add_subcommand("estimate", "estimate the QRI (and decomposition) from incomes");
    c_est->add_option("--in", est.in_path, "single-column income CSV")->required();
    est.partition.attach(c_est);
    c_est->add_option("--grid", est.grid_j, "grid size J")->capture_default_str();
    c_est->add_option("--alpha", est.alpha, "nominal error rate")->capture_default_str();
    c_est->add_option("--method", est.method, "grid|exact")
        ->check(CLI::IsMember({"grid", "exact"}))
        ->capture_default_str();
    c_est->add_option("--bandwidth", est.bandwidth, "quantile-density bandwidth override");
    est.output.attach(c_est);

    EstimateArgs dex;
    auto* c_dex = app.add_subcommand("decompose-exact", "exact order-statistic decomposition");
    c_dex->add_option("--in", dex.in_path, "single-column income CSV")->required();
    dex.partition.attach(c_dex);
    c_dex->add_option("--alpha", dex.alpha, "nominal error rate")->capture_default_str();
    c_dex->add_option("--bandwidth", dex.bandwidth, "bandwidth for the borrowed grid SEs");
    dex.output.attach(c_dex);

    TheoryArgs th;
    auto* c_th = app.add_subcommand("theory", "distribution-level QRI via quadrature");
    c_th->add_option("--dist", th.dist_text, "distribution literal, e.g. lognormal:0,1")->required();
    th.partition.attach(c_th);
    c_th->add_option("--abs-tol", th.abs_tol, "quadrature tolerance")->capture_default_str();
    c_th->add_option("--curve", th.curve_path, "write (p, R(p)) CSV here");
    c_th->add_option("--curve-points", th.curve_points, "curve resolution")->capture_default_str();
    th.output.attach(c_th);

    SynthArgs sy;
    auto* c_sy = app.add_subcommand("synth", "synthesize a population from a grouped table");
    c_sy->add_option("--bins", sy.bins_path, "lower,upper,count CSV")->required();
    c_sy->add_option("--tail-shape", sy.tail_shape, "Pareto tail shape a")->capture_default_str();
    c_sy->add_option("--scale", sy.scale, "persons per table count unit")->capture_default_str();
    c_sy->add_option("--seed", sy.seed, "RNG seed")->capture_default_str();
    c_sy->add_option("--out", sy.out_path, "output income CSV")->required();
    sy.output.attach(c_sy);

    PercentilesArgs pc;
    auto* c_pc = app.add_subcommand("percentiles", "Type-8 percentile table");
    c_pc->add_option("--in", pc.in_path, "single-column income CSV")->required();
    c_pc->add_option("--probs", pc.probs_text, "comma-separated probabilities")
        ->capture_default_str();
    pc.output.attach(c_pc);

    KdeArgs kd;
    auto* c_kd = app.add_subcommand("kde", "kernel density curve export");
    c_kd->add_option("--in", kd.in_path, "single-column income CSV")->required();
    c_kd->add_option("--truncate", kd.truncate, "truncate the grid at this income")
        ->capture_default_str();
    c_kd->add_option("--grid-points", kd.grid_points, "grid resolution")->capture_default_str();
    c_kd->add_option("--out", kd.out_path, "output x,density CSV")->required();
    kd.output.attach(c_kd);

    CoverageArgs cv;
    auto* c_cv = app.add_subcommand("coverage", "Monte-Carlo CI coverage experiment");
    c_cv->add_option("--dist", cv.dist_text, "distribution literal")->required();
    c_cv->add_option("--n", cv.n, "sample size per trial")->capture_default_str();
    cv.partition.attach(c_cv);
    c_cv->add_option("--trials", cv.trials, "Monte-Carlo trials")->capture_default_str();
    c_cv->add_option("--grid", cv.grid_j, "grid size J")->capture_default_str();
    c_cv->add_option("--alpha", cv.alpha, "nominal error rate")->capture_default_str();
    c_cv->add_option("--seed", cv.seed, "base RNG seed")->capture_default_str();
    c_cv->add_option("--threads", cv.threads, "worker threads (0 = auto)");
    c_cv->add_option("--bandwidth", cv.bandwidth, "quantile-density bandwidth override");
    c_cv->add_option("--out", cv.out_path, "write the JSON report here");
    cv.output.attach(c_cv);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        (void)e;
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_est->parsed()) return run_estimate(est, out, /*force_exact=*/false);
        if (c_dex->parsed()) return run_estimate(dex, out, /*force_exact=*/true);
        if (c_th->parsed()) return run_theory(th, out);
        if (c_sy->parsed()) return run_synth(sy, out);
        if (c_pc->parsed()) return run_percentiles(pc, out);
        if (c_kd->parsed()) return run_kde(kd, out);
        if (c_cv->parsed()) return run_coverage(cv, out);
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << e.what() << "\n";
        // Bad option literals are usage mistakes, everything else is a data error.
        static const std::set<std::string> usage_names{
            "BadDistributionLiteral", "CutOutOfRange", "NonIncreasingCuts",
            "ZeroK",                  "PartitionTooFine", "InvalidParameter"};
        return usage_names.count(e.name()) ? 2 : 1;
    }
    return 2;
}

}  // namespace qri::cli
