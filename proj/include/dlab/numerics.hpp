// numerics.hpp
//
// Dense least squares, the Student-t distribution used for inference,
// correlation and scaling kernels, and the seeded generator behind every
// random choice in the artifact.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dlab {

// ==========================================================================
// Matrix
// ==========================================================================

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::vector<double> column(std::size_t c) const;
    std::vector<double> row(std::size_t r) const;
};

// Throws NumericError when any entry is non-finite.
void validate_finite(const Matrix& m, const std::string& context);

// ==========================================================================
// Least squares
// ==========================================================================

struct LeastSquaresResult {
    std::vector<double> beta;
    double residual_ss = 0;
    // diag((X'X)^-1), the ingredient for coefficient standard errors.
    std::vector<double> xtx_inverse_diag;
};

// Minimizes |y - X beta| by Householder QR. Rank deficiency (a factor
// diagonal below 1e-10 of the largest) raises NumericError naming the
// offending column, by `column_names[j]` when provided, else by index.
// Non-finite entries in X or y raise NumericError up front.
LeastSquaresResult
solve_least_squares(const Matrix& X, const std::vector<double>& y,
                    const std::vector<std::string>& column_names = {});

// ==========================================================================
// Distributions
// ==========================================================================

// CDF of Student's t with `dof` degrees of freedom, via the regularized
// incomplete beta function; absolute error below 1e-10.
double student_t_cdf(double t, double dof);

// Regularized incomplete beta I_x(a, b), exposed for tests.
double regularized_incomplete_beta(double a, double b, double x);

// ==========================================================================
// Correlation and scaling
// ==========================================================================

// Pearson correlation matrix of equal-length columns. Diagonal exactly 1.
// A constant column raises ValidationError naming it.
Matrix correlation_matrix(const std::vector<std::vector<double>>& columns,
                          const std::vector<std::string>& names);

struct ZScoreResult {
    Matrix scaled;
    std::vector<double> means;
    std::vector<double> stds; // sample standard deviation per column
};

// Centers and scales each column to mean 0, sample std 1. Constant columns
// raise ValidationError naming the column.
ZScoreResult zscore_columns(const Matrix& m,
                            const std::vector<std::string>& names = {});

double mean_of(const std::vector<double>& v);
double sample_std(const std::vector<double>& v);

// ==========================================================================
// Seeded randomness
// ==========================================================================

// splitmix64: state advances by the golden-gamma constant 0x9E3779B97F4A7C15
// and each output is the finalizer (shift-xor-multiply with 0xBF58476D1CE4E5B9
// and 0x94D049BB133111EB). Identical seeds give identical streams.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();                    // [0, 1)
    double uniform_positive();           // (0, 1]
    std::uint64_t uniform_int(std::uint64_t n); // [0, n), unbiased
    double normal();                     // standard normal, Box-Muller

  private:
    std::uint64_t state_;
    std::optional<double> cached_normal_;
};

// Deterministically combines a seed with a salt to derive sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

std::vector<std::size_t> choose_with_replacement(SeededRng& rng, std::size_t n,
                                                 std::size_t k);

} // namespace dlab
