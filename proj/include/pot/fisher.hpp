#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pot/core.hpp"
#include "pot/matrix.hpp"

namespace pot {

/// Posterior probabilities below this are raised to it.
inline constexpr double kPosteriorFloor = 1e-10;

/// Diagonal-covariance Gaussian mixture.
struct GaussianMixture {
    std::vector<double> weights;  ///< K entries, sum 1
    Matrix means;                 ///< K x n
    Matrix variances;             ///< K x n, diagonal sigma^2
    /// Average log-likelihood of the training data at each EM iteration.
    std::vector<double> log_likelihood_history;

    std::size_t size() const noexcept { return weights.size(); }
    std::size_t dim() const noexcept { return means.cols(); }

    /// log p(x) under the mixture.
    double log_likelihood(std::span<const double> x) const;
    /// Soft assignments gamma_k(x), computed in the log domain and floored at kPosteriorFloor.
    void posteriors(std::span<const double> x, std::span<double> out) const;
};

struct GmmOptions {
    std::size_t max_iterations = 100;
    /// Stop once the relative change of the average log-likelihood falls below this.
    double relative_tolerance = 1e-5;
    /// Variance floor as a fraction of the per-dimension data variance.
    double variance_floor_ratio = 1e-4;
    /// Absolute lower bound on the floor, for dimensions with zero variance.
    double min_variance = 1e-10;
    /// Component weight below which a component counts as degenerate.
    double degenerate_weight = 1e-8;
};

/// EM with k-means initialization. Needs at least 10*K samples. A degenerate
/// component is re-initialized once; a second collapse throws ConvergenceError.
GaussianMixture train_gmm(const Matrix& points, std::size_t k, std::uint64_t seed, const GmmOptions& options = {});

struct IfvOptions {
    /// Signed square root followed by L2 normalization of each filter block.
    bool improved = true;
};

/// Fisher vector of the frames in each filter. Per filter block the layout is
/// the K x n mean gradients followed by the K x n variance gradients:
///   G_mu    = 1/(T sqrt(w_k))   sum_t gamma_t(k) (x_t - mu_k)/sigma_k
///   G_sigma = 1/(T sqrt(2 w_k)) sum_t gamma_t(k) [((x_t - mu_k)/sigma_k)^2 - 1]
/// Output length 2*K*n*filters.size().
std::vector<double> encode_ifv(const DescriptorSequence& seq, const GaussianMixture& gmm,
                               std::span<const TemporalFilter> filters, const IfvOptions& options = {});

inline std::size_t ifv_dimension(std::size_t k, std::size_t n, std::size_t filters) noexcept {
    return 2 * k * n * filters;
}

}  // namespace pot
