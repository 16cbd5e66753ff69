// models.hpp
//
// Statistical modeling suite: feature-matrix assembly, OLS with inference,
// logistic regression (IRLS) with AIC-based backward stepwise selection and
// p-value pruning, class-imbalance resampling, k-means with elbow selection,
// and classification metrics.
#pragma once

#include "dlab/numerics.hpp"
#include "dlab/panel.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dlab {

// ==========================================================================
// Feature matrix
// ==========================================================================

struct FeatureSpec {
    std::vector<std::string> bases; // panel column names
    std::vector<std::pair<std::string, std::string>> interactions;
    bool intercept = true;
};

struct FeatureMatrix {
    Matrix X;
    std::vector<std::string> terms; // "Constant", bases, then "a:b" products
    std::vector<std::size_t> rows;  // panel row indices kept
    std::size_t excluded = 0;       // rows dropped for undefined values
};

// Rows containing any undefined value among the referenced columns are
// dropped and counted in `excluded`.
FeatureMatrix build_feature_matrix(const AlignedPanel& panel,
                                   const FeatureSpec& spec);

// ==========================================================================
// OLS
// ==========================================================================

struct RegressionFit {
    std::vector<std::string> terms;
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<double> t_statistics;
    std::vector<double> p_values;
    std::vector<std::string> stars; // "***" p<0.01, "**" p<0.05, "*" p<0.1
    std::size_t n_obs = 0;
    double r_squared = 0;
    double adj_r_squared = 0;
};

std::string significance_stars(double p);

// Standard errors from sigma^2 (X'X)^-1 with sigma^2 = RSS/(n-p); two-sided
// p-values from Student's t with n-p dof. R^2 uses TSS about the mean when
// the design contains a constant column, otherwise the uncentered TSS.
RegressionFit fit_ols(const Matrix& X, const std::vector<double>& y,
                      const std::vector<std::string>& terms);

// ==========================================================================
// Logistic regression
// ==========================================================================

struct LogisticFit {
    std::vector<std::string> terms;
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<double> z_statistics;
    std::vector<double> p_values;
    std::vector<std::string> stars;
    std::vector<double> ci_low;  // 95% Wald
    std::vector<double> ci_high;
    double log_likelihood = 0;
    double aic = 0; // 2*#terms - 2*log_likelihood exactly
    std::size_t n_obs = 0;
    bool converged = false;
    int iterations = 0;
    bool separation = false; // any |coefficient| > 30 at convergence check
};

double sigmoid(double eta);

// Bernoulli MLE by iteratively reweighted least squares with step halving;
// converged when |delta logL| < tol. Non-convergence returns a fit flagged
// converged=false rather than throwing.
LogisticFit fit_logistic(const Matrix& X, const std::vector<double>& y,
                         const std::vector<std::string>& terms,
                         int max_iter = 100, double tol = 1e-8);

std::vector<double> logistic_predict(const Matrix& X,
                                     const std::vector<double>& beta);

// ==========================================================================
// Model selection
// ==========================================================================

struct StepwiseRemoval {
    std::string term;
    double aic_before = 0;
    double aic_after = 0;
};

struct StepwiseResult {
    LogisticFit fit;
    Matrix X; // design matrix of the surviving terms
    std::vector<std::string> terms;
    std::vector<StepwiseRemoval> removals;
};

// Repeatedly drops the single removal with the lowest refit AIC while that
// AIC is below the current one. `protected_terms` (default the intercept)
// are never candidates.
StepwiseResult backward_stepwise_aic(
    const Matrix& X, const std::vector<double>& y,
    const std::vector<std::string>& terms,
    const std::vector<std::string>& protected_terms = {"Constant"});

struct PruneResult {
    LogisticFit fit;
    Matrix X;
    std::vector<std::string> terms;
    std::vector<std::string> removed;
};

// Iteratively removes the highest-p term exceeding alpha and refits.
PruneResult
pvalue_prune(const Matrix& X, const std::vector<double>& y,
             const std::vector<std::string>& terms, double alpha = 0.05,
             const std::vector<std::string>& protected_terms = {"Constant"});

// ==========================================================================
// Resampling
// ==========================================================================

enum class ResampleMode { up, down };

struct ResampleResult {
    Matrix X;
    std::vector<double> y;
};

// up: keeps every row and appends minority rows drawn with replacement until
// the classes balance. down: keeps the minority and draws majority rows
// without replacement down to its count. Row order is then shuffled by rng.
ResampleResult resample(const Matrix& X, const std::vector<double>& y,
                        ResampleMode mode, SeededRng& rng);

// ==========================================================================
// k-means
// ==========================================================================

struct KMeansResult {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;
    Matrix centroids;
    double wcss = 0;
    std::vector<double> wcss_history; // one entry per Lloyd iteration
    std::size_t restart_index = 0;
};

// k-means++ seeding from rng, then Lloyd iterations until assignments are
// stable or the largest centroid shift falls below tol. An emptied cluster
// is reseeded to the point farthest from its assigned centroid.
KMeansResult kmeans(const Matrix& rows, std::size_t k, SeededRng& rng,
                    int max_iter = 300, double tol = 1e-6);

struct ElbowReport {
    std::vector<std::size_t> ks;
    std::vector<double> wcss;           // best of the restarts per k
    std::vector<KMeansResult> best_runs; // parallel to ks
    std::size_t selected_k = 0;
    std::string rule;     // "second_difference", "explicit", or "min_k"
    bool low_confidence = false;
};

// Runs `restarts` seeded attempts per k (restart r of any sweep uses the
// same derived seed, so widening the restart budget can only improve wcss)
// and keeps the minimum-wcss run, ties to the lowest restart index.
// selected_k maximizes the discrete second difference of the wcss curve;
// when that signal is weak relative to the curve's total drop the report is
// flagged low-confidence and falls back to the smallest k. `explicit_k`
// overrides the rule.
ElbowReport kmeans_sweep(const Matrix& rows, std::size_t k_min = 2,
                         std::size_t k_max = 10, int restarts = 10,
                         std::uint64_t seed = 0,
                         std::optional<std::size_t> explicit_k = {});

// ==========================================================================
// Classification metrics
// ==========================================================================

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
};

struct ClassificationMetrics {
    ConfusionMatrix confusion;
    std::optional<double> precision; // unset when no predicted positives
    std::optional<double> recall;    // unset when no actual positives
    std::optional<double> f1;
    std::optional<double> accuracy;
};

ClassificationMetrics classification_metrics(const std::vector<int>& labels,
                                             const std::vector<int>& predictions);

struct RocCurve {
    std::vector<double> thresholds; // descending; first is +infinity
    std::vector<double> fpr;
    std::vector<double> tpr;
    double auc = 0;
};

// Threshold sweep over the distinct scores; trapezoid AUC, which equals the
// Mann-Whitney statistic with ties counted half.
RocCurve roc_auc(const std::vector<int>& labels,
                 const std::vector<double>& scores);

} // namespace dlab
