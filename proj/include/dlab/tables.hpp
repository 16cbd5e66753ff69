// tables.hpp
//
// Plain-text summary tables and JSON/CSV serializations of fit results,
// clustering reports, and classification metrics. Every emitter here is
// deterministic: sorted JSON keys, fixed layouts, shortest round-trip
// numbers in machine formats and 3-decimal display in text tables.
#pragma once

#include "dlab/models.hpp"

#include <string>
#include <vector>

namespace dlab {

// Fixed 3-decimal display used in the text tables.
std::string fmt3(double v);

// Layout: estimate with significance stars, standard error parenthesized on
// the following line, Observations / R-squared / Adjusted R-squared footer,
// and the star-threshold note.
std::string ols_table_text(const RegressionFit& fit,
                           const std::string& dependent);

// Layout: estimate with stars and the 95% interval parenthesized beside it,
// Observations / Log Likelihood / Akaike Inf. Crit. footer, and the note.
std::string logistic_table_text(const LogisticFit& fit,
                                const std::string& dependent);

std::string ols_fit_json(const RegressionFit& fit,
                         const std::string& dependent);
std::string logistic_fit_json(const LogisticFit& fit,
                              const std::string& dependent);
std::string stepwise_log_json(const std::vector<StepwiseRemoval>& removals,
                              const std::vector<std::string>& pruned);

// Correlation matrix CSV: leading `name` column, one column per input name.
std::string correlation_csv(const Matrix& corr,
                            const std::vector<std::string>& names);

// Elbow CSV: k,wcss,selected (selected marks the chosen k with 1).
std::string elbow_csv(const ElbowReport& report);

// Cluster assignments CSV for the selected k: label,cluster.
std::string assignments_csv(const ElbowReport& report,
                            const std::vector<std::string>& row_labels);

std::string roc_csv(const RocCurve& curve);
std::string metrics_json(const ClassificationMetrics& metrics);

} // namespace dlab
