#include "dlab/tables.hpp"

#include "dlab/csv.hpp"
#include "dlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dlab {

namespace {

using nlohmann::json;

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

const char* const kStarNote = "Note: *p<0.1; **p<0.05; ***p<0.01";

std::string pad_right(const std::string& s, std::size_t width) {
    std::string out = s;
    if (out.size() < width) out.append(width - out.size(), ' ');
    return out;
}

json term_rows(const std::vector<std::string>& terms,
               const std::vector<double>& est, const std::vector<double>& se,
               const std::vector<double>& stat, const std::vector<double>& p,
               const std::vector<std::string>& stars,
               const std::vector<double>* ci_low,
               const std::vector<double>* ci_high) {
    json rows = json::array();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        json row;
        row["term"] = terms[j];
        row["estimate"] = finite_or_null(est[j]);
        row["std_error"] = finite_or_null(se[j]);
        row["statistic"] = finite_or_null(stat[j]);
        row["p_value"] = finite_or_null(p[j]);
        row["stars"] = stars[j];
        if (ci_low) row["ci_low"] = finite_or_null((*ci_low)[j]);
        if (ci_high) row["ci_high"] = finite_or_null((*ci_high)[j]);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

std::string fmt3(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string ols_table_text(const RegressionFit& fit,
                           const std::string& dependent) {
    std::size_t label_w = std::string("Adjusted R-squared").size();
    for (const auto& t : fit.terms) label_w = std::max(label_w, t.size());
    label_w += 2;

    std::vector<std::string> values;
    for (std::size_t j = 0; j < fit.terms.size(); ++j)
        values.push_back(fmt3(fit.coefficients[j]) + fit.stars[j]);

    std::size_t value_w = dependent.size();
    for (const auto& v : values) value_w = std::max(value_w, v.size());
    const std::size_t width = label_w + value_w;

    std::string out;
    out += std::string(width, '=') + "\n";
    out += pad_right("", label_w) + dependent + "\n";
    out += std::string(width, '-') + "\n";
    for (std::size_t j = 0; j < fit.terms.size(); ++j) {
        out += pad_right(fit.terms[j], label_w) + values[j] + "\n";
        out += pad_right("", label_w) + "(" + fmt3(fit.standard_errors[j]) +
               ")\n";
    }
    out += std::string(width, '-') + "\n";
    out += pad_right("Observations", label_w) + std::to_string(fit.n_obs) +
           "\n";
    out += pad_right("R-squared", label_w) + fmt3(fit.r_squared) + "\n";
    out += pad_right("Adjusted R-squared", label_w) +
           fmt3(fit.adj_r_squared) + "\n";
    out += std::string(width, '=') + "\n";
    out += kStarNote;
    out += "\n";
    return out;
}

std::string logistic_table_text(const LogisticFit& fit,
                                const std::string& dependent) {
    std::size_t label_w = std::string("Akaike Inf. Crit.").size();
    for (const auto& t : fit.terms) label_w = std::max(label_w, t.size());
    label_w += 2;

    std::vector<std::string> values;
    for (std::size_t j = 0; j < fit.terms.size(); ++j)
        values.push_back(fmt3(fit.coefficients[j]) + fit.stars[j] + " (" +
                         fmt3(fit.ci_low[j]) + ", " + fmt3(fit.ci_high[j]) +
                         ")");

    std::string header = "Dependent variable: " + dependent;
    std::size_t value_w = header.size();
    for (const auto& v : values) value_w = std::max(value_w, v.size());
    const std::size_t width = label_w + value_w;

    std::string out;
    out += std::string(width, '=') + "\n";
    out += pad_right("", label_w) + header + "\n";
    out += std::string(width, '-') + "\n";
    for (std::size_t j = 0; j < fit.terms.size(); ++j)
        out += pad_right(fit.terms[j], label_w) + values[j] + "\n";
    out += std::string(width, '-') + "\n";
    out += pad_right("Observations", label_w) + std::to_string(fit.n_obs) +
           "\n";
    out += pad_right("Log Likelihood", label_w) + fmt3(fit.log_likelihood) +
           "\n";
    out += pad_right("Akaike Inf. Crit.", label_w) + fmt3(fit.aic) + "\n";
    out += std::string(width, '=') + "\n";
    out += kStarNote;
    out += "\n";
    if (!fit.converged)
        out += "Warning: fit did not converge\n";
    if (fit.separation)
        out += "Warning: coefficients suggest separated classes\n";
    return out;
}

std::string ols_fit_json(const RegressionFit& fit,
                         const std::string& dependent) {
    json j;
    j["dependent"] = dependent;
    j["terms"] = term_rows(fit.terms, fit.coefficients, fit.standard_errors,
                           fit.t_statistics, fit.p_values, fit.stars, nullptr,
                           nullptr);
    j["n_obs"] = fit.n_obs;
    j["r_squared"] = finite_or_null(fit.r_squared);
    j["adj_r_squared"] = finite_or_null(fit.adj_r_squared);
    return j.dump(2) + "\n";
}

std::string logistic_fit_json(const LogisticFit& fit,
                              const std::string& dependent) {
    json j;
    j["dependent"] = dependent;
    j["terms"] = term_rows(fit.terms, fit.coefficients, fit.standard_errors,
                           fit.z_statistics, fit.p_values, fit.stars,
                           &fit.ci_low, &fit.ci_high);
    j["n_obs"] = fit.n_obs;
    j["log_likelihood"] = finite_or_null(fit.log_likelihood);
    j["aic"] = finite_or_null(fit.aic);
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["separation"] = fit.separation;
    return j.dump(2) + "\n";
}

std::string stepwise_log_json(const std::vector<StepwiseRemoval>& removals,
                              const std::vector<std::string>& pruned) {
    json j;
    json steps = json::array();
    for (const auto& r : removals) {
        json step;
        step["term"] = r.term;
        step["aic_before"] = finite_or_null(r.aic_before);
        step["aic_after"] = finite_or_null(r.aic_after);
        steps.push_back(step);
    }
    j["stepwise_removals"] = steps;
    j["pvalue_pruned"] = pruned;
    return j.dump(2) + "\n";
}

std::string correlation_csv(const Matrix& corr,
                            const std::vector<std::string>& names) {
    std::string out = "name";
    for (const auto& n : names) {
        out += ',';
        out += n;
    }
    out += '\n';
    for (std::size_t r = 0; r < corr.rows; ++r) {
        out += names[r];
        for (std::size_t c = 0; c < corr.cols; ++c) {
            out += ',';
            out += format_double(corr.at(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string elbow_csv(const ElbowReport& report) {
    std::string out = "k,wcss,selected\n";
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
        out += std::to_string(report.ks[i]);
        out += ',';
        out += format_double(report.wcss[i]);
        out += ',';
        out += report.ks[i] == report.selected_k ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string assignments_csv(const ElbowReport& report,
                            const std::vector<std::string>& row_labels) {
    const KMeansResult* selected = nullptr;
    for (std::size_t i = 0; i < report.ks.size(); ++i)
        if (report.ks[i] == report.selected_k) selected = &report.best_runs[i];
    if (!selected)
        throw ValidationError("elbow report does not contain the selected k");
    if (row_labels.size() != selected->assignments.size())
        throw ValidationError("row label count does not match assignments");
    std::string out = "label,cluster\n";
    for (std::size_t i = 0; i < row_labels.size(); ++i) {
        out += row_labels[i];
        out += ',';
        out += std::to_string(selected->assignments[i]);
        out += '\n';
    }
    return out;
}

std::string roc_csv(const RocCurve& curve) {
    std::string out = "threshold,false_positive_rate,true_positive_rate\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out += std::isinf(curve.thresholds[i])
                   ? "inf"
                   : format_double(curve.thresholds[i]);
        out += ',';
        out += format_double(curve.fpr[i]);
        out += ',';
        out += format_double(curve.tpr[i]);
        out += '\n';
    }
    return out;
}

std::string metrics_json(const ClassificationMetrics& metrics) {
    json j;
    j["confusion"] = {{"tp", metrics.confusion.tp},
                      {"fp", metrics.confusion.fp},
                      {"tn", metrics.confusion.tn},
                      {"fn", metrics.confusion.fn}};
    const auto opt = [](const std::optional<double>& v) -> json {
        if (v) return *v;
        return nullptr;
    };
    j["precision"] = opt(metrics.precision);
    j["recall"] = opt(metrics.recall);
    j["f1"] = opt(metrics.f1);
    j["accuracy"] = opt(metrics.accuracy);
    return j.dump(2) + "\n";
}

} // namespace dlab
