// acceptance.cpp
//
// End-to-end checks run against the built CLI and the library, one printed
// line per criterion. Numerical results are compared with independent
// reimplementations (normal equations, Boost distributions, pair counting)
// rather than with the code under test. Exits nonzero if anything fails.

#include "dlab/backtest.hpp"
#include "dlab/csv.hpp"
#include "dlab/drawdown.hpp"
#include "dlab/errors.hpp"
#include "dlab/models.hpp"
#include "dlab/numerics.hpp"
#include "dlab/tables.hpp"

#include "oracles.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace dlab;

namespace {

std::string g_dlab;
fs::path g_fixtures;
fs::path g_scratch;
int g_failures = 0;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        "'" + g_dlab + "' " + args + " >'" + log.string() + "' 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = g_scratch / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void run_criterion(const std::string& name,
                   const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (ok) {
        std::printf("PASS  %-28s (%lld ms)\n", name.c_str(),
                    static_cast<long long>(ms));
    } else {
        std::printf("FAIL  %-28s (%lld ms)%s%s\n", name.c_str(),
                    static_cast<long long>(ms), detail.empty() ? "" : ": ",
                    detail.c_str());
        ++g_failures;
    }
    std::fflush(stdout);
}

// ==========================================================================
// criterion bodies
// ==========================================================================

bool check_aic_identity(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const double worked = 2.0 * 27 - 2.0 * (-143.841);
    const bool close = std::fabs(worked - 341.683) <= 0.01;
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (!close) {
        detail = "closed form gives " + std::to_string(worked);
        return false;
    }
    if (ns >= 1000000) {
        detail = "closed form took " + std::to_string(ns) + " ns";
        return false;
    }
    Matrix X(40, 2);
    std::vector<double> y;
    SeededRng rng(11);
    for (std::size_t i = 0; i < 40; ++i) {
        X.at(i, 0) = 1.0;
        X.at(i, 1) = rng.normal();
        y.push_back(rng.uniform() < sigmoid(0.4 * X.at(i, 1)) ? 1.0 : 0.0);
    }
    const LogisticFit fit = fit_logistic(X, y, {"Constant", "x"});
    const double identity =
        2.0 * static_cast<double>(fit.terms.size()) - 2.0 * fit.log_likelihood;
    if (fit.aic != identity) {
        detail = "fit AIC deviates from 2k - 2logL";
        return false;
    }
    return true;
}

bool check_ols_oracle(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    SeededRng rng(20250817);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t p = 1 + rng.uniform_int(8);
        const std::size_t n = p + 2 + rng.uniform_int(50 - p - 1);
        const bool with_intercept = trial % 2 == 0;
        Matrix X(n, p);
        std::vector<double> beta_true;
        for (std::size_t j = 0; j < p; ++j)
            beta_true.push_back(4.0 * rng.uniform() - 2.0);
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0;
            for (std::size_t j = 0; j < p; ++j) {
                X.at(i, j) =
                    (j == 0 && with_intercept) ? 1.0 : rng.normal();
                acc += X.at(i, j) * beta_true[j];
            }
            y.push_back(acc + 0.5 * rng.normal());
        }
        std::vector<std::string> names;
        for (std::size_t j = 0; j < p; ++j)
            names.push_back("c" + std::to_string(j));

        const RegressionFit fit = fit_ols(X, y, names);
        const auto oracle = oracles::solve_by_normal_equations(X, y);
        const double dof = static_cast<double>(n - p);
        const double sigma2 = oracle.rss / dof;
        for (std::size_t j = 0; j < p; ++j) {
            const double se = std::sqrt(sigma2 * oracle.xtx_inverse_diag[j]);
            const double t = oracle.beta[j] / se;
            const double pv = 2.0 * oracles::t_cdf(-std::fabs(t), dof);
            if (!oracles::close_rel(fit.coefficients[j], oracle.beta[j], 1e-6) ||
                !oracles::close_rel(fit.standard_errors[j], se, 1e-6) ||
                !oracles::close_rel(fit.t_statistics[j], t, 1e-6) ||
                !oracles::close_rel(fit.p_values[j], pv, 1e-6)) {
                detail = "trial " + std::to_string(trial) + " term " +
                         std::to_string(j) + " disagrees with the oracle";
                return false;
            }
        }
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (ms > 5000) {
        detail = "took " + std::to_string(ms) + " ms";
        return false;
    }
    return true;
}

bool check_logistic_recovery(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> truth = {-1.0, 0.8, -0.5};
    const std::size_t n = 5000;
    int covered = 0;
    for (int seed = 1; seed <= 100; ++seed) {
        SeededRng rng(9000 + static_cast<std::uint64_t>(seed));
        Matrix X(n, 3);
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            X.at(i, 0) = 1.0;
            X.at(i, 1) = rng.normal();
            X.at(i, 2) = rng.normal();
            const double eta = truth[0] + truth[1] * X.at(i, 1) +
                               truth[2] * X.at(i, 2);
            y.push_back(rng.uniform() < sigmoid(eta) ? 1.0 : 0.0);
        }
        const LogisticFit fit = fit_logistic(X, y, {"Constant", "a", "b"});
        if (!fit.converged) {
            detail = "seed " + std::to_string(seed) + " did not converge";
            return false;
        }
        double grad_inf = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            double g = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double eta = 0;
                for (std::size_t c = 0; c < 3; ++c)
                    eta += X.at(i, c) * fit.coefficients[c];
                g += X.at(i, j) * (y[i] - sigmoid(eta));
            }
            grad_inf = std::max(grad_inf, std::fabs(g));
        }
        if (grad_inf > 1e-6 * static_cast<double>(n)) {
            detail = "seed " + std::to_string(seed) +
                     " stalled away from the optimum";
            return false;
        }
        bool inside = true;
        for (std::size_t j = 0; j < 3; ++j)
            inside = inside && std::fabs(fit.coefficients[j] - truth[j]) <=
                                   3.0 * fit.standard_errors[j];
        if (inside) ++covered;
    }
    if (covered < 95) {
        detail = "3-sigma coverage only " + std::to_string(covered) + "/100";
        return false;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (ms > 30000) {
        detail = "took " + std::to_string(ms) + " ms";
        return false;
    }
    return true;
}

bool check_stepwise(std::string& detail) {
    const std::vector<std::string> names = {"Constant", "s1", "s2", "s3",
                                            "n1", "n2", "n3"};
    const std::vector<double> truth = {0.3, 1.5, -1.2, 0.9, 0, 0, 0};
    int clean = 0;
    for (int seed = 1; seed <= 100; ++seed) {
        SeededRng rng(3000 + static_cast<std::uint64_t>(seed));
        const std::size_t n = 600;
        Matrix X(n, 7);
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            X.at(i, 0) = 1.0;
            double eta = truth[0];
            for (std::size_t j = 1; j < 7; ++j) {
                X.at(i, j) = rng.normal();
                eta += truth[j] * X.at(i, j);
            }
            y.push_back(rng.uniform() < sigmoid(eta) ? 1.0 : 0.0);
        }
        const StepwiseResult step = backward_stepwise_aic(X, y, names);
        for (const auto& r : step.removals) {
            if (!(r.aic_after < r.aic_before)) {
                detail = "seed " + std::to_string(seed) +
                         " recorded a non-improving removal";
                return false;
            }
        }
        const std::set<std::string> kept(step.terms.begin(), step.terms.end());
        const bool signals_kept = kept.count("Constant") && kept.count("s1") &&
                                  kept.count("s2") && kept.count("s3");
        bool noise_only = true;
        for (const auto& r : step.removals)
            noise_only = noise_only && r.term[0] == 'n';
        if (signals_kept && noise_only) ++clean;
    }
    if (clean < 95) {
        detail = "kept the planted signal in only " + std::to_string(clean) +
                 "/100 runs";
        return false;
    }
    return true;
}

bool check_resample(std::string& detail) {
    const std::size_t minority = 12, majority = 5555;
    const std::size_t n = minority + majority;
    Matrix X(n, 1);
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) {
        X.at(i, 0) = static_cast<double>(i);
        y.push_back(i < minority ? 1.0 : 0.0);
    }

    SeededRng up_rng(4242);
    const ResampleResult up = resample(X, y, ResampleMode::up, up_rng);
    std::size_t up_pos = 0;
    std::set<double> seen;
    for (std::size_t i = 0; i < up.y.size(); ++i) {
        if (up.y[i] == 1.0) ++up_pos;
        seen.insert(up.X.at(i, 0));
    }
    if (up.y.size() != 2 * majority || up_pos != majority) {
        detail = "upsampling did not balance to " + std::to_string(majority);
        return false;
    }
    if (seen.size() != n) {
        detail = "upsampling dropped original rows";
        return false;
    }
    SeededRng up_rng2(4242);
    const ResampleResult up2 = resample(X, y, ResampleMode::up, up_rng2);
    if (up2.y != up.y) {
        detail = "upsampling is not reproducible for a fixed seed";
        return false;
    }

    SeededRng down_rng(99);
    const ResampleResult down = resample(X, y, ResampleMode::down, down_rng);
    std::size_t down_pos = 0;
    std::set<double> down_majority;
    for (std::size_t i = 0; i < down.y.size(); ++i) {
        if (down.y[i] == 1.0)
            ++down_pos;
        else
            down_majority.insert(down.X.at(i, 0));
    }
    if (down.y.size() != 2 * minority || down_pos != minority ||
        down_majority.size() != minority) {
        detail = "downsampling did not draw distinct majority rows";
        return false;
    }
    SeededRng down_rng2(99);
    const ResampleResult down2 = resample(X, y, ResampleMode::down, down_rng2);
    if (down2.y != down.y || down2.X.data != down.X.data) {
        detail = "downsampling is not reproducible for a fixed seed";
        return false;
    }
    return true;
}

bool check_drawdown(std::string& detail) {
    const std::vector<double> prices = {100, 95, 89, 94, 101};
    const std::vector<Date> dates = {
        Date::parse("2020-01-02"), Date::parse("2020-01-03"),
        Date::parse("2020-01-06"), Date::parse("2020-01-07"),
        Date::parse("2020-01-08")};
    const auto episodes = detect_episodes(prices, 0.05);
    if (episodes.size() != 1 || episodes[0].peak_index != 0 ||
        episodes[0].onset_index != 1 || episodes[0].trough_index != 2 ||
        !episodes[0].recovery_index || *episodes[0].recovery_index != 4 ||
        episodes[0].depth != 0.11 ||
        episodes[0].cls != DepthClass::correction) {
        detail = "five-point worked example decomposed wrong";
        return false;
    }
    const std::string golden =
        "peak_date,trough_date,recovery_date,depth,class\n"
        "2020-01-02,2020-01-06,2020-01-08,0.11,correction\n";
    if (serialize_episodes_csv(episodes, dates) != golden) {
        detail = "episode csv differs from the worked example";
        return false;
    }
    if (label_target(prices, 0.10, 0) != std::vector<int>{0, 0, 1, 0, 0} ||
        label_target(prices, 0.05, 0) != std::vector<int>{0, 1, 0, 0, 0} ||
        label_target(prices, 0.10, 2) != std::vector<int>{1, 1, 1, 0, 0}) {
        detail = "onset labeling differs from the worked example";
        return false;
    }
    const auto crash = detect_episodes({100, 79, 100}, 0.05);
    if (crash.size() != 1 || crash[0].depth != 0.21 ||
        crash[0].cls != DepthClass::crash || crash[0].trough_index != 1) {
        detail = "three-point crash example decomposed wrong";
        return false;
    }

    const fs::path out = fresh_dir("drawdown_cli");
    const fs::path config = g_fixtures / "config_fixture.json";
    if (run_cli("ingest --config '" + config.string() + "' --output-dir '" +
                    out.string() + "'",
                out / "ingest.log") != 0) {
        detail = "ingest exited nonzero: " + read_file(out / "ingest.log");
        return false;
    }
    if (run_cli("label --config '" + config.string() + "' --output-dir '" +
                    out.string() + "'",
                out / "label.log") != 0) {
        detail = "label exited nonzero: " + read_file(out / "label.log");
        return false;
    }
    if (read_file(out / "episodes_FIXTURE.csv") != golden) {
        detail = "cli episode table differs from the worked example";
        return false;
    }
    if (read_file(out / "panel_labeled.csv").find("FIXTURE.target") ==
        std::string::npos) {
        detail = "labeled panel lacks the target column";
        return false;
    }
    if (run_cli("label --config '" + config.string() + "' --output-dir '" +
                    out.string() + "' --target-depth 0.05",
                out / "label_rerun.log") != 0) {
        detail =
            "label re-run into the same output dir exited nonzero: " +
            read_file(out / "label_rerun.log");
        return false;
    }
    return true;
}

bool check_kmeans(std::string& detail) {
    const CsvDocument doc = read_csv((g_fixtures / "blobs.csv").string());
    const std::size_t rows = doc.rows.size();
    const std::size_t dims = doc.header.size() - 1;
    Matrix m(rows, dims);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < dims; ++c)
            m.at(r, c) = parse_double_field(doc.rows[r][c + 1], "blobs.csv");
    const Matrix scaled = zscore_columns(m).scaled;

    std::vector<std::vector<std::size_t>> expected;
    expected.push_back({});
    for (std::size_t r = 0; r < 10; ++r) expected.back().push_back(r);
    expected.push_back({});
    for (std::size_t r = 10; r < 20; ++r) expected.back().push_back(r);
    expected.push_back({});
    for (std::size_t r = 20; r < 29; ++r) expected.back().push_back(r);

    for (int seed = 1; seed <= 100; ++seed) {
        const ElbowReport report =
            kmeans_sweep(scaled, 2, 10, 10, static_cast<std::uint64_t>(seed));
        if (report.selected_k != 3 || report.low_confidence) {
            detail = "seed " + std::to_string(seed) + " selected k=" +
                     std::to_string(report.selected_k);
            return false;
        }
        for (const auto& run : report.best_runs)
            for (std::size_t i = 1; i < run.wcss_history.size(); ++i)
                if (run.wcss_history[i] > run.wcss_history[i - 1] + 1e-9) {
                    detail = "a Lloyd iteration increased wcss";
                    return false;
                }
        const KMeansResult* best = nullptr;
        for (std::size_t i = 0; i < report.ks.size(); ++i)
            if (report.ks[i] == 3) best = &report.best_runs[i];
        std::vector<std::vector<std::size_t>> groups(3);
        for (std::size_t r = 0; r < rows; ++r)
            groups[best->assignments[r]].push_back(r);
        std::sort(groups.begin(), groups.end());
        if (groups != expected) {
            detail = "seed " + std::to_string(seed) +
                     " split the planted groups";
            return false;
        }
    }
    return true;
}

bool check_roc(std::string& detail) {
    const RocCurve worked = roc_auc({1, 1, 0, 0}, {0.9, 0.4, 0.6, 0.2});
    if (worked.auc != 0.75) {
        detail = "worked example gave " + format_double(worked.auc);
        return false;
    }
    if (!std::isinf(worked.thresholds.front())) {
        detail = "curve does not open at +infinity";
        return false;
    }
    SeededRng rng(606);
    for (std::size_t n = 2; n <= 12; ++n) {
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<int> labels;
            std::vector<double> scores;
            bool pos = false, neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                labels.push_back(static_cast<int>(rng.uniform_int(2)));
                scores.push_back(
                    static_cast<double>(rng.uniform_int(5)) / 4.0);
                (labels.back() ? pos : neg) = true;
            }
            if (!pos || !neg) continue;
            const double trapezoid = roc_auc(labels, scores).auc;
            const double pairs = oracles::auc_by_pair_count(labels, scores);
            if (std::fabs(trapezoid - pairs) > 1e-12) {
                detail = "n=" + std::to_string(n) + " trial " +
                         std::to_string(trial) + ": trapezoid " +
                         format_double(trapezoid) + " vs pairs " +
                         format_double(pairs);
                return false;
            }
        }
    }
    return true;
}

bool check_backtest(std::string& detail) {
    SeededRng walk(505);
    std::vector<double> prices{100.0};
    while (prices.size() < 300)
        prices.push_back(prices.back() *
                         (1.0 + 0.02 * (walk.uniform() - 0.5)));
    const std::vector<double> quiet(prices.size(), 0.0);
    const BacktestReport hold = run_buy_and_hold(prices);
    const BacktestReport silent = run_signal_strategy(prices, quiet, {});
    if (backtest_report_json(silent) != backtest_report_json(hold) ||
        equity_csv(silent) != equity_csv(hold)) {
        detail = "an all-clear signal did not reproduce buy-and-hold bytes";
        return false;
    }
    SeededRng never(1);
    const BacktestReport still = run_random_trader(prices, 0.0, never);
    if (backtest_report_json(still) != backtest_report_json(hold)) {
        detail = "a never-trading random walker drifted from buy-and-hold";
        return false;
    }
    const BacktestReport foresight =
        run_signal_strategy({100, 90, 81, 100}, {1, 1, 0, 0}, {});
    if (std::fabs(foresight.total_return - (100.0 / 81.0 - 1.0)) > 1e-10) {
        detail = "perfect foresight returned " +
                 format_double(foresight.total_return);
        return false;
    }
    return true;
}

bool check_cli_determinism(std::string& detail) {
    const fs::path a = fresh_dir("report_a");
    const fs::path b = fresh_dir("report_b");
    const fs::path config = g_fixtures / "config.json";
    for (const fs::path& out : {a, b}) {
        if (run_cli("report --config '" + config.string() +
                        "' --output-dir '" + out.string() + "'",
                    g_scratch / "report.log") != 0) {
            detail =
                "report exited nonzero: " + read_file(g_scratch / "report.log");
            return false;
        }
    }
    const auto rel_files = [](const fs::path& root) {
        std::vector<fs::path> out;
        for (const auto& e : fs::recursive_directory_iterator(root))
            if (e.is_regular_file())
                out.push_back(fs::relative(e.path(), root));
        std::sort(out.begin(), out.end());
        return out;
    };
    const auto files_a = rel_files(a);
    if (files_a != rel_files(b)) {
        detail = "the two runs produced different file sets";
        return false;
    }
    if (files_a.size() < 15) {
        detail = "report produced only " + std::to_string(files_a.size()) +
                 " files";
        return false;
    }
    for (const auto& rel : files_a) {
        if (read_file(a / rel) != read_file(b / rel)) {
            detail = rel.string() + " differs between identical runs";
            return false;
        }
    }
    const std::string note = "Note: *p<0.1; **p<0.05; ***p<0.01";
    for (const char* table : {"logistic.txt", "regression.txt"}) {
        const std::string text = read_file(a / table);
        if (text.find(note) == std::string::npos ||
            text.find("====") == std::string::npos ||
            text.find("Observations") == std::string::npos) {
            detail = std::string(table) + " lacks the summary table layout";
            return false;
        }
    }
    const std::string reg = read_file(a / "regression.txt");
    if (reg.find("R-squared") == std::string::npos ||
        reg.find("Adjusted R-squared") == std::string::npos ||
        reg.find("(") == std::string::npos) {
        detail = "regression.txt lacks the estimate/error/fit footer layout";
        return false;
    }
    const std::string logi = read_file(a / "logistic.txt");
    if (logi.find("Log Likelihood") == std::string::npos ||
        logi.find("Akaike Inf. Crit.") == std::string::npos ||
        logi.find("*") == std::string::npos) {
        detail = "logistic.txt lacks the stars/likelihood footer layout";
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: acceptance <dlab-binary> <fixtures-dir>\n");
        return 2;
    }
    g_dlab = argv[1];
    g_fixtures = fs::absolute(argv[2]);
    g_scratch = fs::temp_directory_path() / "dlab_acceptance";
    fs::remove_all(g_scratch);
    fs::create_directories(g_scratch);

    const auto t0 = std::chrono::steady_clock::now();
    run_criterion("aic-identity", check_aic_identity);
    run_criterion("ols-inference-oracle", check_ols_oracle);
    run_criterion("logistic-recovery", check_logistic_recovery);
    run_criterion("stepwise-selection", check_stepwise);
    run_criterion("class-rebalancing", check_resample);
    run_criterion("drawdown-worked-example", check_drawdown);
    run_criterion("kmeans-elbow", check_kmeans);
    run_criterion("roc-pair-equivalence", check_roc);
    run_criterion("backtest-baselines", check_backtest);
    run_criterion("pipeline-determinism", check_cli_determinism);
    run_criterion("suite-runtime", [&](std::string& detail) {
        const auto s = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        if (s >= 120) {
            detail = "suite took " + std::to_string(s) + " s";
            return false;
        }
        return true;
    });

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
