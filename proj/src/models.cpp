#include "dlab/models.hpp"

#include "dlab/data.hpp"
#include "dlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace dlab {

namespace {

// z-quantile for the 95% Wald interval.
constexpr double kZ975 = 1.959963984540054;

// Coefficient magnitude treated as evidence of separation in IRLS.
constexpr double kSeparationBound = 30.0;

// IRLS weight floor keeping the weighted solve full-rank near p in {0,1}.
constexpr double kWeightFloor = 1e-10;

// Elbow signal below this fraction of the curve's total drop is treated as
// inconclusive.
constexpr double kElbowConfidenceRatio = 0.25;

void check_binary(const std::vector<double>& y, const char* what) {
    bool has0 = false;
    bool has1 = false;
    for (double v : y) {
        if (v == 0.0)
            has0 = true;
        else if (v == 1.0)
            has1 = true;
        else
            throw ModelError(std::string(what) + " must be 0/1, got " +
                             std::to_string(v));
    }
    if (!has0 || !has1)
        throw ModelError(std::string(what) + " contains a single class");
}

Matrix subset_columns(const Matrix& X, const std::vector<std::size_t>& keep) {
    Matrix out(X.rows, keep.size());
    for (std::size_t r = 0; r < X.rows; ++r)
        for (std::size_t j = 0; j < keep.size(); ++j)
            out.at(r, j) = X.at(r, keep[j]);
    return out;
}

std::vector<std::string>
subset_terms(const std::vector<std::string>& terms,
             const std::vector<std::size_t>& keep) {
    std::vector<std::string> out;
    out.reserve(keep.size());
    for (std::size_t j : keep) out.push_back(terms[j]);
    return out;
}

bool has_constant_column(const Matrix& X) {
    for (std::size_t c = 0; c < X.cols; ++c) {
        bool constant = true;
        for (std::size_t r = 1; r < X.rows && constant; ++r)
            constant = X.at(r, c) == X.at(0, c);
        if (constant) return true;
    }
    return false;
}

double log_likelihood_at(const Matrix& X, const std::vector<double>& y,
                         const std::vector<double>& beta) {
    double ll = 0;
    for (std::size_t i = 0; i < X.rows; ++i) {
        double eta = 0;
        for (std::size_t j = 0; j < X.cols; ++j)
            eta += X.at(i, j) * beta[j];
        const double softplus = eta > 0 ? eta + std::log1p(std::exp(-eta))
                                        : std::log1p(std::exp(eta));
        ll += y[i] * eta - softplus;
    }
    return ll;
}

} // namespace

// ==========================================================================
// Feature matrix
// ==========================================================================

FeatureMatrix build_feature_matrix(const AlignedPanel& panel,
                                   const FeatureSpec& spec) {
    std::vector<std::string> referenced = spec.bases;
    for (const auto& [a, b] : spec.interactions) {
        referenced.push_back(a);
        referenced.push_back(b);
    }
    std::vector<const std::vector<double>*> source;
    for (const auto& name : referenced)
        source.push_back(&panel.column(name)); // throws on missing column

    FeatureMatrix out;
    if (spec.intercept) out.terms.push_back("Constant");
    for (const auto& name : spec.bases) out.terms.push_back(name);
    for (const auto& [a, b] : spec.interactions)
        out.terms.push_back(a + ":" + b);
    {
        std::set<std::string> seen;
        for (const auto& term : out.terms)
            if (!seen.insert(term).second)
                throw ValidationError("duplicate term name '" + term + "'");
    }

    for (std::size_t r = 0; r < panel.n_rows(); ++r) {
        bool ok = true;
        for (const auto* col : source)
            if (!is_defined((*col)[r])) {
                ok = false;
                break;
            }
        if (ok)
            out.rows.push_back(r);
        else
            ++out.excluded;
    }

    out.X = Matrix(out.rows.size(), out.terms.size());
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const std::size_t r = out.rows[i];
        std::size_t j = 0;
        if (spec.intercept) out.X.at(i, j++) = 1.0;
        for (const auto& name : spec.bases)
            out.X.at(i, j++) = panel.column(name)[r];
        for (const auto& [a, b] : spec.interactions)
            out.X.at(i, j++) = panel.column(a)[r] * panel.column(b)[r];
    }
    return out;
}

// ==========================================================================
// OLS
// ==========================================================================

std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

RegressionFit fit_ols(const Matrix& X, const std::vector<double>& y,
                      const std::vector<std::string>& terms) {
    const std::size_t n = X.rows;
    const std::size_t p = X.cols;
    if (terms.size() != p)
        throw ValidationError("fit_ols: " + std::to_string(terms.size()) +
                              " term names for " + std::to_string(p) +
                              " columns");
    if (n <= p)
        throw ModelError("fit_ols needs more observations (" +
                         std::to_string(n) + ") than parameters (" +
                         std::to_string(p) + ")");
    validate_finite(X, "ols design matrix");
    for (double v : y)
        if (!std::isfinite(v)) throw NumericError("ols response is non-finite");

    const LeastSquaresResult ls = solve_least_squares(X, y, terms);
    const double dof = static_cast<double>(n - p);
    const double sigma2 = ls.residual_ss / dof;

    RegressionFit fit;
    fit.terms = terms;
    fit.coefficients = ls.beta;
    fit.n_obs = n;
    for (std::size_t j = 0; j < p; ++j) {
        const double se = std::sqrt(sigma2 * ls.xtx_inverse_diag[j]);
        fit.standard_errors.push_back(se);
        const double t = se > 0 ? ls.beta[j] / se
                                : (ls.beta[j] == 0
                                       ? 0.0
                                       : std::copysign(
                                             std::numeric_limits<double>::infinity(),
                                             ls.beta[j]));
        fit.t_statistics.push_back(t);
        const double pv = 2.0 * student_t_cdf(-std::abs(t), dof);
        fit.p_values.push_back(pv);
        fit.stars.push_back(significance_stars(pv));
    }

    double tss = 0;
    if (has_constant_column(X)) {
        const double ybar = mean_of(y);
        for (double v : y) tss += (v - ybar) * (v - ybar);
    } else {
        for (double v : y) tss += v * v;
    }
    fit.r_squared = tss > 0 ? 1.0 - ls.residual_ss / tss : 0.0;
    if (fit.r_squared < 0) fit.r_squared = 0.0;
    fit.adj_r_squared =
        1.0 - (1.0 - fit.r_squared) * (static_cast<double>(n) - 1.0) / dof;
    return fit;
}

// ==========================================================================
// Logistic regression
// ==========================================================================

double sigmoid(double eta) {
    if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

std::vector<double> logistic_predict(const Matrix& X,
                                     const std::vector<double>& beta) {
    if (beta.size() != X.cols)
        throw ModelError("logistic_predict: coefficient count " +
                         std::to_string(beta.size()) + " does not match " +
                         std::to_string(X.cols) + " columns");
    std::vector<double> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        double eta = 0;
        for (std::size_t j = 0; j < X.cols; ++j)
            eta += X.at(i, j) * beta[j];
        out[i] = sigmoid(eta);
    }
    return out;
}

LogisticFit fit_logistic(const Matrix& X, const std::vector<double>& y,
                         const std::vector<std::string>& terms, int max_iter,
                         double tol) {
    const std::size_t n = X.rows;
    const std::size_t p = X.cols;
    if (terms.size() != p)
        throw ValidationError("fit_logistic: " + std::to_string(terms.size()) +
                              " term names for " + std::to_string(p) +
                              " columns");
    if (y.size() != n)
        throw ModelError("fit_logistic: response length mismatch");
    if (p == 0) throw ModelError("fit_logistic: empty design matrix");
    check_binary(y, "logistic response");
    validate_finite(X, "logistic design matrix");

    std::vector<double> beta(p, 0.0);
    double ll = log_likelihood_at(X, y, beta);

    LogisticFit fit;
    fit.terms = terms;
    fit.n_obs = n;

    Matrix xw(n, p);
    std::vector<double> zw(n);
    std::vector<double> weights(n);

    const auto weigh = [&](const std::vector<double>& b) {
        for (std::size_t i = 0; i < n; ++i) {
            double eta = 0;
            for (std::size_t j = 0; j < p; ++j) eta += X.at(i, j) * b[j];
            const double mu = sigmoid(eta);
            const double w = std::max(mu * (1.0 - mu), kWeightFloor);
            weights[i] = w;
            const double sqw = std::sqrt(w);
            for (std::size_t j = 0; j < p; ++j)
                xw.at(i, j) = X.at(i, j) * sqw;
            zw[i] = (eta + (y[i] - mu) / w) * sqw;
        }
    };

    for (int iter = 1; iter <= max_iter; ++iter) {
        weigh(beta);
        std::vector<double> candidate =
            solve_least_squares(xw, zw, terms).beta;
        double ll_new = log_likelihood_at(X, y, candidate);
        for (int halving = 0; ll_new < ll && halving < 30; ++halving) {
            for (std::size_t j = 0; j < p; ++j)
                candidate[j] = 0.5 * (candidate[j] + beta[j]);
            ll_new = log_likelihood_at(X, y, candidate);
        }
        const double delta = std::abs(ll_new - ll);
        beta = candidate;
        ll = ll_new;
        fit.iterations = iter;
        if (delta < tol) {
            fit.converged = true;
            break;
        }
    }

    for (double b : beta)
        if (std::abs(b) > kSeparationBound) fit.separation = true;

    weigh(beta);
    const LeastSquaresResult info = solve_least_squares(xw, zw, terms);
    fit.coefficients = beta;
    fit.log_likelihood = ll;
    fit.aic = 2.0 * static_cast<double>(p) - 2.0 * ll;
    for (std::size_t j = 0; j < p; ++j) {
        const double se = std::sqrt(info.xtx_inverse_diag[j]);
        fit.standard_errors.push_back(se);
        const double z = se > 0 ? beta[j] / se
                                : (beta[j] == 0
                                       ? 0.0
                                       : std::copysign(
                                             std::numeric_limits<double>::infinity(),
                                             beta[j]));
        fit.z_statistics.push_back(z);
        const double pv = std::erfc(std::abs(z) / std::sqrt(2.0));
        fit.p_values.push_back(pv);
        fit.stars.push_back(significance_stars(pv));
        fit.ci_low.push_back(beta[j] - kZ975 * se);
        fit.ci_high.push_back(beta[j] + kZ975 * se);
    }
    return fit;
}

// ==========================================================================
// Model selection
// ==========================================================================

StepwiseResult
backward_stepwise_aic(const Matrix& X, const std::vector<double>& y,
                      const std::vector<std::string>& terms,
                      const std::vector<std::string>& protected_terms) {
    StepwiseResult result;
    Matrix current = X;
    std::vector<std::string> current_terms = terms;
    LogisticFit fit = fit_logistic(current, y, current_terms);

    while (current.cols > 1) {
        double best_aic = fit.aic;
        std::size_t best_j = current.cols;
        LogisticFit best_fit;
        Matrix best_x;
        for (std::size_t j = 0; j < current.cols; ++j) {
            if (std::find(protected_terms.begin(), protected_terms.end(),
                          current_terms[j]) != protected_terms.end())
                continue;
            std::vector<std::size_t> sub;
            for (std::size_t c = 0; c < current.cols; ++c)
                if (c != j) sub.push_back(c);
            Matrix xr = subset_columns(current, sub);
            LogisticFit candidate =
                fit_logistic(xr, y, subset_terms(current_terms, sub));
            if (candidate.aic < best_aic) {
                best_aic = candidate.aic;
                best_j = j;
                best_fit = candidate;
                best_x = xr;
            }
        }
        if (best_j == current.cols) break;
        result.removals.push_back(
            {current_terms[best_j], fit.aic, best_aic});
        current_terms.erase(current_terms.begin() +
                            static_cast<std::ptrdiff_t>(best_j));
        current = best_x;
        fit = best_fit;
    }

    result.fit = fit;
    result.X = current;
    result.terms = current_terms;
    return result;
}

PruneResult pvalue_prune(const Matrix& X, const std::vector<double>& y,
                         const std::vector<std::string>& terms, double alpha,
                         const std::vector<std::string>& protected_terms) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ValidationError("alpha must lie in (0, 1]");
    PruneResult result;
    Matrix current = X;
    std::vector<std::string> current_terms = terms;
    LogisticFit fit = fit_logistic(current, y, current_terms);

    while (current.cols > 1) {
        double worst_p = alpha;
        std::size_t worst_j = current.cols;
        for (std::size_t j = 0; j < current.cols; ++j) {
            if (std::find(protected_terms.begin(), protected_terms.end(),
                          current_terms[j]) != protected_terms.end())
                continue;
            if (fit.p_values[j] > worst_p) {
                worst_p = fit.p_values[j];
                worst_j = j;
            }
        }
        if (worst_j == current.cols) break;
        result.removed.push_back(current_terms[worst_j]);
        std::vector<std::size_t> sub;
        for (std::size_t c = 0; c < current.cols; ++c)
            if (c != worst_j) sub.push_back(c);
        current = subset_columns(current, sub);
        current_terms = subset_terms(current_terms, sub);
        fit = fit_logistic(current, y, current_terms);
    }

    result.fit = fit;
    result.X = current;
    result.terms = current_terms;
    return result;
}

// ==========================================================================
// Resampling
// ==========================================================================

ResampleResult resample(const Matrix& X, const std::vector<double>& y,
                        ResampleMode mode, SeededRng& rng) {
    if (y.size() != X.rows) throw ModelError("resample: response length mismatch");
    check_binary(y, "resample response");

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < y.size(); ++i)
        (y[i] == 1.0 ? pos : neg).push_back(i);
    const bool pos_minority = pos.size() <= neg.size();
    const auto& minority = pos_minority ? pos : neg;
    const auto& majority = pos_minority ? neg : pos;

    std::vector<std::size_t> rows;
    if (mode == ResampleMode::up) {
        rows.reserve(2 * majority.size());
        for (std::size_t i = 0; i < y.size(); ++i) rows.push_back(i);
        const std::size_t extra = majority.size() - minority.size();
        for (std::size_t i = 0; i < extra; ++i)
            rows.push_back(minority[rng.uniform_int(minority.size())]);
    } else {
        rows = minority;
        std::vector<std::size_t> pool = majority;
        for (std::size_t i = 0; i < minority.size(); ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(rng.uniform_int(pool.size() - i));
            std::swap(pool[i], pool[j]);
            rows.push_back(pool[i]);
        }
    }

    for (std::size_t i = rows.size(); i > 1; --i)
        std::swap(rows[i - 1], rows[rng.uniform_int(i)]);

    ResampleResult out;
    out.X = Matrix(rows.size(), X.cols);
    out.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < X.cols; ++j)
            out.X.at(i, j) = X.at(rows[i], j);
        out.y.push_back(y[rows[i]]);
    }
    return out;
}

// ==========================================================================
// k-means
// ==========================================================================

namespace {

double squared_distance(const Matrix& rows, std::size_t r,
                        const Matrix& centroids, std::size_t c) {
    double s = 0;
    for (std::size_t j = 0; j < rows.cols; ++j) {
        const double d = rows.at(r, j) - centroids.at(c, j);
        s += d * d;
    }
    return s;
}

} // namespace

KMeansResult kmeans(const Matrix& rows, std::size_t k, SeededRng& rng,
                    int max_iter, double tol) {
    const std::size_t n = rows.rows;
    const std::size_t d = rows.cols;
    if (k < 1) throw ValidationError("kmeans requires k >= 1");
    if (k > n)
        throw ValidationError("kmeans requires k <= rows, got k=" +
                              std::to_string(k) + " with " +
                              std::to_string(n) + " rows");
    validate_finite(rows, "kmeans input");

    KMeansResult result;
    result.k = k;
    result.centroids = Matrix(k, d);

    // k-means++ seeding.
    std::size_t first = static_cast<std::size_t>(rng.uniform_int(n));
    for (std::size_t j = 0; j < d; ++j)
        result.centroids.at(0, j) = rows.at(first, j);
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i],
                                squared_distance(rows, i, result.centroids,
                                                 c - 1));
            total += dist2[i];
        }
        std::size_t chosen;
        if (total <= 0) {
            chosen = static_cast<std::size_t>(rng.uniform_int(n));
        } else {
            const double target = rng.uniform() * total;
            double cum = 0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += dist2[i];
                if (cum > target) {
                    chosen = i;
                    break;
                }
            }
        }
        for (std::size_t j = 0; j < d; ++j)
            result.centroids.at(c, j) = rows.at(chosen, j);
    }

    std::vector<std::size_t> assignments(n, 0);
    std::vector<std::size_t> previous;
    bool force_stop = false;

    const auto assign_all = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(rows, i, result.centroids, 0);
            for (std::size_t c = 1; c < k; ++c) {
                const double dd = squared_distance(rows, i, result.centroids, c);
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            assignments[i] = best;
        }
        // Reseed any emptied cluster to the point farthest from its centroid.
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t a : assignments) ++counts[a];
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assignments[i]] <= 1) continue;
                const double dd =
                    squared_distance(rows, i, result.centroids, assignments[i]);
                if (dd > far_d) {
                    far_d = dd;
                    far = i;
                }
            }
            if (far_d < 0) continue;
            for (std::size_t j = 0; j < d; ++j)
                result.centroids.at(c, j) = rows.at(far, j);
            --counts[assignments[far]];
            assignments[far] = c;
            ++counts[c];
        }
    };

    const auto compute_wcss = [&]() {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += squared_distance(rows, i, result.centroids, assignments[i]);
        return s;
    };

    for (int iter = 0; iter < max_iter; ++iter) {
        assign_all();
        result.wcss_history.push_back(compute_wcss());
        if ((!previous.empty() && assignments == previous) || force_stop)
            break;
        previous = assignments;

        Matrix sums(k, d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assignments[i]];
            for (std::size_t j = 0; j < d; ++j)
                sums.at(assignments[i], j) += rows.at(i, j);
        }
        double shift = 0;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            double move = 0;
            for (std::size_t j = 0; j < d; ++j) {
                const double mean = sums.at(c, j) / static_cast<double>(counts[c]);
                const double delta = mean - result.centroids.at(c, j);
                move += delta * delta;
                result.centroids.at(c, j) = mean;
            }
            shift = std::max(shift, std::sqrt(move));
        }
        if (shift < tol) force_stop = true;
    }

    result.assignments = assignments;
    result.wcss = result.wcss_history.back();
    return result;
}

ElbowReport kmeans_sweep(const Matrix& rows, std::size_t k_min,
                         std::size_t k_max, int restarts, std::uint64_t seed,
                         std::optional<std::size_t> explicit_k) {
    if (k_min < 1 || k_min > k_max)
        throw ValidationError("invalid k range");
    if (k_max > rows.rows)
        throw ValidationError("k range exceeds the number of rows");
    if (restarts < 1) throw ValidationError("restarts must be >= 1");

    ElbowReport report;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        std::optional<KMeansResult> best;
        for (int r = 0; r < restarts; ++r) {
            SeededRng rng(mix_seed(mix_seed(seed, k),
                                   static_cast<std::uint64_t>(r)));
            KMeansResult run = kmeans(rows, k, rng);
            run.restart_index = static_cast<std::size_t>(r);
            if (!best || run.wcss < best->wcss) best = std::move(run);
        }
        report.ks.push_back(k);
        report.wcss.push_back(best->wcss);
        report.best_runs.push_back(std::move(*best));
    }

    if (explicit_k) {
        if (*explicit_k < k_min || *explicit_k > k_max)
            throw ValidationError("explicit k outside the sweep range");
        report.selected_k = *explicit_k;
        report.rule = "explicit";
        return report;
    }

    if (report.ks.size() < 3) {
        report.selected_k = k_min;
        report.rule = "min_k";
        report.low_confidence = true;
        return report;
    }

    double best_d2 = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 1;
    for (std::size_t j = 1; j + 1 < report.wcss.size(); ++j) {
        const double d2 = report.wcss[j - 1] - 2.0 * report.wcss[j] +
                          report.wcss[j + 1];
        if (d2 > best_d2) {
            best_d2 = d2;
            best_idx = j;
        }
    }
    const double total_drop = report.wcss.front() - report.wcss.back();
    if (total_drop <= 0 || best_d2 < kElbowConfidenceRatio * total_drop) {
        report.selected_k = k_min;
        report.rule = "min_k";
        report.low_confidence = true;
    } else {
        report.selected_k = report.ks[best_idx];
        report.rule = "second_difference";
    }
    return report;
}

// ==========================================================================
// Classification metrics
// ==========================================================================

ClassificationMetrics
classification_metrics(const std::vector<int>& labels,
                       const std::vector<int>& predictions) {
    if (labels.size() != predictions.size())
        throw ValidationError("metrics need equal-length label/prediction vectors");
    if (labels.empty()) throw ValidationError("metrics need at least one pair");
    ClassificationMetrics m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if ((labels[i] != 0 && labels[i] != 1) ||
            (predictions[i] != 0 && predictions[i] != 1))
            throw ValidationError("metrics require binary labels/predictions");
        if (labels[i] == 1 && predictions[i] == 1)
            ++m.confusion.tp;
        else if (labels[i] == 0 && predictions[i] == 1)
            ++m.confusion.fp;
        else if (labels[i] == 1)
            ++m.confusion.fn;
        else
            ++m.confusion.tn;
    }
    const auto& c = m.confusion;
    if (c.tp + c.fp > 0)
        m.precision = static_cast<double>(c.tp) /
                      static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0)
        m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (m.precision && m.recall && *m.precision + *m.recall > 0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    m.accuracy = static_cast<double>(c.tp + c.tn) /
                 static_cast<double>(labels.size());
    return m;
}

RocCurve roc_auc(const std::vector<int>& labels,
                 const std::vector<double>& scores) {
    if (labels.size() != scores.size())
        throw ValidationError("roc needs equal-length labels and scores");
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    for (int v : labels) {
        if (v != 0 && v != 1)
            throw ValidationError("roc requires binary labels");
        (v == 1 ? n_pos : n_neg)++;
    }
    if (n_pos == 0 || n_neg == 0)
        throw ModelError("roc requires both classes present");

    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    RocCurve curve;
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);

    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            if (labels[order[i]] == 1)
                ++tp;
            else
                ++fp;
            ++i;
        }
        curve.thresholds.push_back(threshold);
        curve.fpr.push_back(static_cast<double>(fp) /
                            static_cast<double>(n_neg));
        curve.tpr.push_back(static_cast<double>(tp) /
                            static_cast<double>(n_pos));
    }

    double auc = 0;
    for (std::size_t j = 1; j < curve.fpr.size(); ++j)
        auc += (curve.fpr[j] - curve.fpr[j - 1]) *
               (curve.tpr[j] + curve.tpr[j - 1]) / 2.0;
    curve.auc = auc;
    return curve;
}

} // namespace dlab
