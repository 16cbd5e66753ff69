#include "dlab/numerics.hpp"

#include "dlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dlab {

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
    return out;
}

std::vector<double> Matrix::row(std::size_t r) const {
    return std::vector<double>(data.begin() + static_cast<std::ptrdiff_t>(r * cols),
                               data.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
}

void validate_finite(const Matrix& m, const std::string& context) {
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            if (!std::isfinite(m.at(r, c)))
                throw NumericError(context + ": non-finite entry at (" +
                                   std::to_string(r) + ", " +
                                   std::to_string(c) + ")");
}

// ==========================================================================
// Least squares
// ==========================================================================

namespace {

std::string column_label(std::size_t j, const std::vector<std::string>& names) {
    if (j < names.size()) return "'" + names[j] + "'";
    return std::to_string(j);
}

} // namespace

LeastSquaresResult
solve_least_squares(const Matrix& X, const std::vector<double>& y,
                    const std::vector<std::string>& column_names) {
    const std::size_t n = X.rows;
    const std::size_t p = X.cols;
    if (y.size() != n)
        throw NumericError("least squares: y length " +
                           std::to_string(y.size()) + " does not match " +
                           std::to_string(n) + " rows");
    if (p == 0) throw NumericError("least squares: empty design matrix");
    if (n < p)
        throw NumericError("least squares: fewer rows (" + std::to_string(n) +
                           ") than columns (" + std::to_string(p) + ")");
    validate_finite(X, "least squares design");
    for (double v : y)
        if (!std::isfinite(v))
            throw NumericError("least squares: non-finite response value");

    // Householder QR, factoring in place; R accumulates in the upper
    // triangle, the reflectors in the lower part plus `tau`.
    Matrix A = X;
    std::vector<double> rhs = y;
    std::vector<double> tau(p, 0.0);

    for (std::size_t k = 0; k < p; ++k) {
        double norm = 0;
        for (std::size_t i = k; i < n; ++i) norm += A.at(i, k) * A.at(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            tau[k] = 0.0;
            continue;
        }
        const double alpha = A.at(k, k) >= 0 ? -norm : norm;
        const double v0 = A.at(k, k) - alpha;
        A.at(k, k) = alpha;
        double vnorm2 = v0 * v0;
        for (std::size_t i = k + 1; i < n; ++i)
            vnorm2 += A.at(i, k) * A.at(i, k);
        tau[k] = v0;
        if (vnorm2 == 0.0) continue;
        // Apply the reflector H = I - 2 v v^T / |v|^2 to the trailing block
        // and the right-hand side, with v = (v0, A[k+1..n-1, k]).
        for (std::size_t j = k + 1; j < p; ++j) {
            double dot = v0 * A.at(k, j);
            for (std::size_t i = k + 1; i < n; ++i)
                dot += A.at(i, k) * A.at(i, j);
            const double scale = 2.0 * dot / vnorm2;
            A.at(k, j) -= scale * v0;
            for (std::size_t i = k + 1; i < n; ++i)
                A.at(i, j) -= scale * A.at(i, k);
        }
        double dot = v0 * rhs[k];
        for (std::size_t i = k + 1; i < n; ++i) dot += A.at(i, k) * rhs[i];
        const double scale = 2.0 * dot / vnorm2;
        rhs[k] -= scale * v0;
        for (std::size_t i = k + 1; i < n; ++i)
            rhs[i] -= scale * A.at(i, k);
    }

    double max_diag = 0;
    for (std::size_t k = 0; k < p; ++k)
        max_diag = std::max(max_diag, std::abs(A.at(k, k)));
    for (std::size_t k = 0; k < p; ++k)
        if (std::abs(A.at(k, k)) < 1e-10 * max_diag || max_diag == 0.0)
            throw NumericError(
                "rank-deficient design matrix: column " +
                column_label(k, column_names) +
                " is linearly dependent on earlier columns");

    LeastSquaresResult result;
    result.beta.assign(p, 0.0);
    for (std::size_t k = p; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t j = k + 1; j < p; ++j)
            s -= A.at(k, j) * result.beta[j];
        result.beta[k] = s / A.at(k, k);
    }

    result.residual_ss = 0;
    for (std::size_t i = p; i < n; ++i)
        result.residual_ss += rhs[i] * rhs[i];

    // (X'X)^-1 = R^-1 R^-T; its diagonal is the squared row norms of R^-1.
    Matrix rinv(p, p, 0.0);
    for (std::size_t j = p; j-- > 0;) {
        rinv.at(j, j) = 1.0 / A.at(j, j);
        for (std::size_t i = j; i-- > 0;) {
            double s = 0;
            for (std::size_t k = i + 1; k <= j; ++k)
                s += A.at(i, k) * rinv.at(k, j);
            rinv.at(i, j) = -s / A.at(i, i);
        }
    }
    result.xtx_inverse_diag.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        double s = 0;
        for (std::size_t j = i; j < p; ++j) s += rinv.at(i, j) * rinv.at(i, j);
        result.xtx_inverse_diag[i] = s;
    }
    return result;
}

// ==========================================================================
// Distributions
// ==========================================================================

namespace {

// Continued-fraction core of the incomplete beta (Lentz's method).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 500;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0) || !(b > 0))
        throw NumericError("incomplete beta requires positive parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                            std::lgamma(b) + a * std::log(x) +
                            b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (!(dof >= 1))
        throw NumericError("student_t_cdf requires dof >= 1, got " +
                           std::to_string(dof));
    if (std::isnan(t)) throw NumericError("student_t_cdf: t is NaN");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    if (t == 0.0) return 0.5;
    const double x = dof / (dof + t * t);
    const double half_tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x);
    return t > 0 ? 1.0 - half_tail : half_tail;
}

// ==========================================================================
// Correlation and scaling
// ==========================================================================

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Matrix correlation_matrix(const std::vector<std::vector<double>>& columns,
                          const std::vector<std::string>& names) {
    const std::size_t p = columns.size();
    if (p < 2)
        throw ValidationError("correlation needs at least 2 columns");
    const std::size_t n = columns[0].size();
    if (n < 2) throw ValidationError("correlation needs at least 2 rows");
    for (std::size_t j = 0; j < p; ++j)
        if (columns[j].size() != n)
            throw ValidationError("correlation column " +
                                  column_label(j, names) +
                                  " has mismatched length");

    std::vector<double> means(p), norms(p);
    for (std::size_t j = 0; j < p; ++j) {
        means[j] = mean_of(columns[j]);
        double ss = 0;
        for (double x : columns[j]) ss += (x - means[j]) * (x - means[j]);
        if (ss == 0.0)
            throw ValidationError("constant column " + column_label(j, names) +
                                  " has undefined correlation");
        norms[j] = std::sqrt(ss);
    }

    Matrix r(p, p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        r.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            double s = 0;
            for (std::size_t k = 0; k < n; ++k)
                s += (columns[i][k] - means[i]) * (columns[j][k] - means[j]);
            const double rij = s / (norms[i] * norms[j]);
            r.at(i, j) = rij;
            r.at(j, i) = rij;
        }
    }
    return r;
}

ZScoreResult zscore_columns(const Matrix& m,
                            const std::vector<std::string>& names) {
    if (m.rows < 2) throw ValidationError("zscore needs at least 2 rows");
    ZScoreResult out;
    out.scaled = Matrix(m.rows, m.cols);
    out.means.resize(m.cols);
    out.stds.resize(m.cols);
    for (std::size_t c = 0; c < m.cols; ++c) {
        const auto col = m.column(c);
        const double mu = mean_of(col);
        const double sd = sample_std(col);
        if (sd == 0.0)
            throw ValidationError("constant column " + column_label(c, names) +
                                  " cannot be scaled");
        out.means[c] = mu;
        out.stds[c] = sd;
        for (std::size_t r = 0; r < m.rows; ++r)
            out.scaled.at(r, c) = (m.at(r, c) - mu) / sd;
    }
    return out;
}

// ==========================================================================
// Seeded randomness
// ==========================================================================

namespace {

std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t SeededRng::next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_finalize(state_);
}

double SeededRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform_positive() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t SeededRng::uniform_int(std::uint64_t n) {
    if (n == 0) throw NumericError("uniform_int requires n > 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return draw % n;
}

double SeededRng::normal() {
    if (cached_normal_) {
        const double v = *cached_normal_;
        cached_normal_.reset();
        return v;
    }
    const double u1 = uniform_positive();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    cached_normal_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64_finalize(seed + 0x9E3779B97F4A7C15ULL * (salt + 1));
}

std::vector<std::size_t> choose_with_replacement(SeededRng& rng, std::size_t n,
                                                 std::size_t k) {
    if (n == 0) throw NumericError("choose_with_replacement requires n > 0");
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.push_back(static_cast<std::size_t>(rng.uniform_int(n)));
    return out;
}

} // namespace dlab
