// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qri/coverage.hpp"
#include "qri/distribution.hpp"
#include "qri/error.hpp"
#include "qri/estimation.hpp"
#include "qri/grouped.hpp"
#include "qri/partition.hpp"
#include "qri/rng.hpp"
#include "qri/theory.hpp"

using namespace qri;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "    FAILED: " << what << "\n";
        }
    }

    void expect_near(double got, double want, double tol, const std::string& what) {
        if (!(std::fabs(got - want) <= tol)) {
            ok = false;
            detail << "    FAILED: " << what << ": got " << got << ", want " << want << " +/- "
                   << tol << "\n";
        }
    }
};

std::string data_file(const std::string& name) {
    return std::string(QRI_DATA_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// 1. closed-form lognormal values
void criterion1(Check& c) {
    c.expect_near(lognormal_I(1.0), 0.6638, 1e-4, "I(sigma=1)");

    const auto quintile = make_partition({0.2, 0.4});
    const auto q = lognormal_Ik(1.0, quintile);
    const double want_q[] = {0.9171, 0.6352, 0.2144};
    for (int k = 0; k < 3; ++k) {
        c.expect_near(q[k], want_q[k], 1e-4, "quintile I_" + std::to_string(k + 1));
    }

    const auto thirds = equi_partition(3);
    const auto t = lognormal_Ik(1.0, thirds);
    const double want_t[] = {0.9334, 0.7325, 0.3254};
    for (int k = 0; k < 3; ++k) {
        c.expect_near(t[k], want_t[k], 1e-4, "equi-third I_" + std::to_string(k + 1));
    }

    const auto deciles = equi_partition(5);
    const auto d = lognormal_Ik(1.0, deciles);
    const double want_d[] = {0.9619, 0.8723, 0.7376, 0.5327, 0.2144};
    for (int k = 0; k < 5; ++k) {
        c.expect_near(d[k], want_d[k], 1e-4, "decile I_" + std::to_string(k + 1));
    }
}

// ---------------------------------------------------------------------------
// 2. quadrature agreement with closed forms and exponential limits
void criterion2(Check& c) {
    const auto quintile = make_partition({0.2, 0.4});
    for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
        const auto d = DistributionSpec::lognormal(0, sigma);
        c.expect_near(true_i(d), lognormal_I(sigma), 1e-6,
                      "true_i lognormal sigma=" + std::to_string(sigma));
        const auto got = true_ik(d, quintile);
        const auto want = lognormal_Ik(sigma, quintile);
        for (int k = 0; k < 3; ++k) {
            c.expect_near(got[k], want[k], 1e-6,
                          "true_ik sigma=" + std::to_string(sigma) + " k=" + std::to_string(k + 1));
        }
    }
    const auto exp1 = DistributionSpec::exponential(1);
    c.expect_near(true_i(exp1), 0.7016, 1e-3, "exponential true_i");
    const auto quartile = make_partition({0.25});
    const auto comps = true_ik(exp1, quartile);
    c.expect_near(comps[0], 0.9230, 2e-3, "exponential quartile I_1");
    c.expect_near(comps[1], 0.4802, 2e-3, "exponential quartile I_2");
}

// ---------------------------------------------------------------------------
// 3. exact-estimator identity / invariance property suite
void criterion3(Check& c) {
    SeededRng rng(8675309);
    int checked = 0;
    while (checked < 200) {
        const std::size_t n = 4 + 2 * (rng.next_u64() % 199);
        DistributionSpec d = DistributionSpec::exponential(1);
        switch (rng.next_u64() % 3) {
            case 0: d = DistributionSpec::lognormal(0, 0.4 + rng.next_double()); break;
            case 1: d = DistributionSpec::pareto2(0.7 + 3.0 * rng.next_double(), 1.0); break;
            default: break;
        }
        std::vector<double> raw;
        raw.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            raw.push_back(rng.next_double() < 0.04 ? 0.0 : quantile(d, rng.next_double()));
        }
        SortedSample s;
        try {
            s = ingest(raw);
        } catch (const Error&) {
            continue;
        }

        // random distinct integer boundaries below n/2
        std::vector<double> cuts;
        std::size_t prev = 0;
        while (cuts.size() < 5) {
            const std::size_t next = prev + 1 + rng.next_u64() % (n / 4 + 1);
            if (next >= n / 2) break;
            cuts.push_back(static_cast<double>(next) / static_cast<double>(n));
            prev = next;
        }
        const auto part = make_partition(cuts);

        const auto dec = exact_ik(s, part);
        const double total = exact_i(s).value;
        double weighted = 0.0;
        double prev_comp = 1.0 + 1e-12;
        bool monotone = true;
        for (std::size_t k = 0; k < part.members(); ++k) {
            weighted += part.weights[k] * dec.components[k].value;
            if (dec.components[k].value > prev_comp + 1e-12) monotone = false;
            prev_comp = dec.components[k].value;
        }
        c.expect(std::fabs(weighted - total) <= 1e-12,
                 "decomposition identity at n=" + std::to_string(n));
        c.expect(monotone, "component monotonicity at n=" + std::to_string(n));

        const double scale = std::exp((rng.next_double() * 2.0 - 1.0) * std::log(1e3));
        std::vector<double> scaled = s.values;
        for (double& v : scaled) v *= scale;
        c.expect(std::fabs(exact_i(ingest(scaled)).value - total) <= 1e-12,
                 "scale invariance at n=" + std::to_string(n));

        std::vector<double> bumped = s.values;
        bumped.back() *= 1.0 + 1000.0 * rng.next_double();
        c.expect(std::fabs(exact_i(ingest(bumped)).value - total) <=
                     2.0 / static_cast<double>(n),
                 "bounded influence at n=" + std::to_string(n));

        if (!c.ok) return;  // one detailed failure is enough
        ++checked;
    }
}

// ---------------------------------------------------------------------------
// 4. Monte-Carlo coverage vs the published tables, desk scale
struct CoverageRow {
    const char* dist;
    std::size_t n;
    std::vector<double> table;  // published per-component coverage
};

void criterion4(Check& c) {
    const auto quartile = make_partition({0.25});
    const auto quintile = make_partition({0.2, 0.4});
    const std::vector<CoverageRow> quartile_rows{
        {"lognormal:0,1", 100, {0.966, 0.960}}, {"lognormal:0,1", 1000, {0.955, 0.957}},
        {"beta:1,1", 100, {0.943, 0.935}},      {"beta:1,1", 1000, {0.957, 0.952}},
        {"chisq:4", 100, {0.966, 0.959}},       {"chisq:4", 1000, {0.960, 0.958}},
        {"pareto2:2,1", 100, {0.965, 0.976}},   {"pareto2:2,1", 1000, {0.954, 0.958}},
        {"exp:1", 100, {0.956, 0.963}},         {"exp:1", 1000, {0.949, 0.962}},
        {"weibull:2", 100, {0.959, 0.961}},     {"weibull:2", 1000, {0.960, 0.957}},
    };
    const std::vector<CoverageRow> quintile_rows{
        {"lognormal:0,1", 500, {0.966, 0.958, 0.959}}, {"beta:1,1", 500, {0.957, 0.954, 0.953}},
        {"chisq:4", 500, {0.953, 0.945, 0.943}},       {"pareto2:2,1", 500, {0.950, 0.948, 0.955}},
        {"exp:1", 500, {0.960, 0.952, 0.947}},         {"weibull:2", 500, {0.971, 0.940, 0.940}},
    };

    auto run_rows = [&](const std::vector<CoverageRow>& rows, const SymmetricPartition& part,
                        const char* label) {
        for (const auto& row : rows) {
            CoverageConfig cfg{parse_distribution(row.dist), row.n, part, 1000, 100, 0.05,
                               20250810, {}, 0};
            const auto rep = coverage_experiment(cfg);
            for (std::size_t k = 0; k < row.table.size(); ++k) {
                const double got = rep.per_component[k].coverage;
                std::ostringstream what;
                what << label << " " << row.dist << " n=" << row.n << " I_" << (k + 1);
                c.expect_near(got, row.table[k], 0.025, what.str());
            }
            c.expect(rep.failed_trials == 0,
                     std::string(row.dist) + ": estimator failures in coverage trials");
        }
    };
    run_rows(quartile_rows, quartile, "quartile");
    run_rows(quintile_rows, quintile, "quintile");
}

// ---------------------------------------------------------------------------
// 5. grouped-data pipeline vs published percentiles and index values
void criterion5(Check& c) {
    struct Row {
        const char* file;
        std::vector<std::pair<double, double>> percentiles;
        double exact;
    };
    const std::vector<Row> dwi_rows{
        {"dwi_2004.csv",
         {{0.05, 269}, {0.10, 320}, {0.20, 394}, {0.25, 433}, {0.50, 658}, {0.75, 928},
          {0.80, 1008}, {0.90, 1255}, {0.95, 1521}},
         0.51},
        {"dwi_2014.csv",
         {{0.05, 321}, {0.10, 411}, {0.20, 509}, {0.25, 558}, {0.50, 843}, {0.75, 1196},
          {0.80, 1309}, {0.90, 1688}, {0.95, 2179}},
         0.52},
    };
    for (const auto& row : dwi_rows) {
        SynthConfig cfg;
        cfg.tail_shape = 4.0;
        cfg.count_scale = 10.0;
        cfg.rng = SeededRng(42);
        const auto pop = synth_population(parse_bins_file(data_file(row.file)), cfg);
        for (const auto& [p, want] : row.percentiles) {
            const double got = quantile_type8(pop, p);
            if (std::fabs(got - want) / want > 0.03) {
                c.expect(false, std::string(row.file) + " P" +
                                    std::to_string(static_cast<int>(p * 100)) + ": got " +
                                    std::to_string(got) + " want " + std::to_string(want));
            }
        }
        c.expect_near(exact_i(pop).value, row.exact, 0.01, std::string(row.file) + " exact index");
    }
    for (const auto& [file, want] : std::vector<std::pair<const char*, double>>{
             {"nhw_2004.csv", 0.71}, {"nhw_2014.csv", 0.73}}) {
        SynthConfig cfg;
        cfg.tail_shape = 4.0;
        cfg.count_scale = 10.0;
        cfg.rng = SeededRng(42);
        const auto pop = synth_population(parse_bins_file(data_file(file)), cfg);
        c.expect_near(exact_i(pop).value, want, 0.01, std::string(file) + " exact index");
    }
}

// ---------------------------------------------------------------------------
// 6. quartile decomposition of a 10k subsample of the 2004 income population
void criterion6(Check& c) {
    SynthConfig cfg;
    cfg.tail_shape = 4.0;
    cfg.count_scale = 10.0;
    cfg.rng = SeededRng(42);
    const auto pop = synth_population(parse_bins_file(data_file("dwi_2004.csv")), cfg);

    SeededRng rng(1234);
    std::vector<double> sub;
    sub.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        sub.push_back(pop.values[rng.next_u64() % pop.n()]);
    }
    const auto s = ingest(std::move(sub));
    const auto dec = ik_hat_grid(s, make_partition({0.25}), 100);
    c.expect_near(dec.components[0].value, 0.721, 0.03, "subsample I_1");
    c.expect_near(dec.components[1].value, 0.285, 0.03, "subsample I_2");
    c.expect_near(dec.total.value, 0.503, 0.03, "subsample I");
}

// ---------------------------------------------------------------------------
// 7. grid-size stability
void criterion7(Check& c) {
    const auto ln = DistributionSpec::lognormal(0, 1);
    for (std::uint64_t seed = 500; seed < 505; ++seed) {
        SeededRng rng(seed);
        const auto s = ingest(sample(ln, 1000, rng));
        const double i50 = i_hat_grid(s, 50).value;
        const double i200 = i_hat_grid(s, 200).value;
        c.expect(std::fabs(i50 - i200) <= 0.005,
                 "grid stability at seed " + std::to_string(seed) + ": |" + std::to_string(i50) +
                     " - " + std::to_string(i200) + "| > 0.005");
    }
}

// ---------------------------------------------------------------------------
// 8. equi-K identification error halves per doubling of K
void criterion8(Check& c) {
    const auto ln = DistributionSpec::lognormal(0, 1);
    auto max_err = [&](std::size_t k_members) {
        double worst = 0.0;
        for (int i = 1; i <= 9; ++i) {
            const double p = static_cast<double>(i) / 10.0;
            const auto [ik, target] = equi_limit_check(ln, k_members, p);
            worst = std::max(worst, std::fabs(ik - target));
        }
        return worst;
    };
    const double e100 = max_err(100);
    const double e200 = max_err(200);
    const double e400 = max_err(400);
    const double r1 = e200 / e100;
    const double r2 = e400 / e200;
    c.detail << "    max errors: K=100 " << e100 << ", K=200 " << e200 << ", K=400 " << e400
             << " (per-doubling ratios " << r1 << ", " << r2 << "; 100->400 "
             << e400 / e100 << ")\n";
    c.expect(r1 >= 0.375 && r1 <= 0.625, "halving ratio 100->200 outside [0.375, 0.625]");
    c.expect(r2 >= 0.375 && r2 <= 0.625, "halving ratio 200->400 outside [0.375, 0.625]");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> fn;
    };
    const std::vector<Criterion> criteria{
        {1, "closed-form lognormal decomposition values", criterion1},
        {2, "quadrature agreement with closed forms", criterion2},
        {3, "exact-estimator identities and invariances", criterion3},
        {4, "Monte-Carlo CI coverage vs published tables", criterion4},
        {5, "grouped-data synthesis pipeline", criterion5},
        {6, "subsample quartile decomposition", criterion6},
        {7, "grid-size stability", criterion7},
        {8, "equi-K limit identification rate", criterion8},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        Check c;
        const auto start = std::chrono::steady_clock::now();
        try {
            crit.fn(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << "    exception: " << e.what() << "\n";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (c.ok ? "PASS" : "FAIL") << "  criterion " << crit.id << ": " << crit.name
                  << "  (" << std::fixed << std::setprecision(2) << secs << " s)\n"
                  << std::defaultfloat;
        if (!c.detail.str().empty()) std::cout << c.detail.str();
        if (!c.ok) ++failures;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
