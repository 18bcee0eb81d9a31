#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pot/matrix.hpp"

namespace pot {

enum class Chi2Denominator {
    Sum,     ///< x_i + y_i, for nonnegative features
    AbsSum,  ///< |x_i| + |y_i|, for features with signed entries (IFV)
};

/// D(x, y) = 1/2 sum_i (x_i - y_i)^2 / (x_i + y_i); terms with a zero
/// denominator contribute nothing.
double chi2_distance(std::span<const double> x, std::span<const double> y,
                     Chi2Denominator denominator = Chi2Denominator::Sum);

/// K(x, y) = exp(-sum_c D_c(x_c, y_c) / gamma_c) over per-channel vectors.
double multichannel_kernel(std::span<const std::span<const double>> xs, std::span<const std::span<const double>> ys,
                           std::span<const double> gammas,
                           std::span<const Chi2Denominator> denominators = {});

/// Pairwise chi-squared distances between the rows of `features` (N x N, symmetric).
Matrix pairwise_chi2(const Matrix& features, Chi2Denominator denominator, unsigned jobs = 1);

/// Denominator to use for a channel: AbsSum when any value is negative.
Chi2Denominator choose_denominator(const Matrix& features) noexcept;

/// Mean distance over all unordered pairs of `rows`. Returns 1 when every pair
/// has distance 0, so the channel contributes a constant factor.
double mean_pair_distance(const Matrix& distances, std::span<const std::size_t> rows);

/// Gram matrix between `rows` and `cols` of the multi-channel kernel, given
/// precomputed per-channel distance matrices.
Matrix kernel_from_distances(std::span<const Matrix> distances, std::span<const double> gammas,
                             std::span<const std::size_t> rows, std::span<const std::size_t> cols);

/// Kernel matrix over training samples together with the parameters that produced it.
struct KernelMatrix {
    Matrix values;
    std::vector<double> gammas;
};

struct SvmOptions {
    double c = 100.0;
    /// Stop when the maximal KKT violation m(alpha) - M(alpha) drops below this.
    double tolerance = 1e-3;
    std::size_t max_iterations = 1'000'000;
    /// Keep the dual objective after every SMO step.
    bool record_objective = false;
    unsigned jobs = 1;
};

/// Binary machine: f(x) = sum_i coef_i K(x_i, x) + bias with coef_i = y_i alpha_i.
struct BinarySvm {
    std::vector<double> coef;
    double bias = 0.0;
    std::size_t iterations = 0;
    /// Dual objective sum(alpha) - 1/2 alpha' Q alpha after each step, when recorded.
    std::vector<double> objective;

    double decision(std::span<const double> kernel_row) const;
};

/// SMO on the dual with maximal-violating-pair working set selection.
/// `y` holds +1/-1 labels. Throws ConvergenceError at the iteration cap.
BinarySvm solve_binary_svm(const Matrix& kernel, std::span<const int> y, const SvmOptions& options);

/// One-vs-rest multiclass SVM.
struct SvmModel {
    std::vector<int> classes;  ///< ascending class ids
    std::vector<BinarySvm> machines;
    double c = 0.0;

    /// Training indices with a nonzero coefficient in any machine.
    std::vector<std::size_t> support_indices() const;
};

SvmModel train_svm(const Matrix& kernel, std::span<const int> labels, const SvmOptions& options = {});

struct Prediction {
    int label = 0;
    std::vector<double> scores;  ///< one decision value per class, in model.classes order
};

/// Class with the largest decision value; ties go to the lowest class id.
Prediction predict(const SvmModel& model, std::span<const double> kernel_row);

}  // namespace pot
