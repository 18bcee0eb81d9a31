#include "pot/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "pot/codebook.hpp"
#include "pot/error.hpp"
#include "pot/random.hpp"

namespace pot {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

// log(w_k) + log N(x; mu_k, diag(var_k)) for every component.
void component_log_densities(const GaussianMixture& gmm, std::span<const double> x, std::span<double> out) {
    const std::size_t n = gmm.dim();
    for (std::size_t k = 0; k < gmm.size(); ++k) {
        double acc = 0.0;
        const auto mu = gmm.means.row(k);
        const auto var = gmm.variances.row(k);
        for (std::size_t d = 0; d < n; ++d) {
            const double diff = x[d] - mu[d];
            acc += kLog2Pi + std::log(var[d]) + diff * diff / var[d];
        }
        out[k] = std::log(gmm.weights[k]) - 0.5 * acc;
    }
}

double log_sum_exp(std::span<const double> v) {
    const double top = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(top)) return top;
    double s = 0.0;
    for (double x : v) s += std::exp(x - top);
    return top + std::log(s);
}

void check_dim(const GaussianMixture& gmm, std::size_t n) {
    if (n != gmm.dim())
        throw InvalidArgument(fmt::format("descriptor dimension {} does not match mixture dimension {}", n, gmm.dim()));
}

}  // namespace

double GaussianMixture::log_likelihood(std::span<const double> x) const {
    check_dim(*this, x.size());
    std::vector<double> lp(size());
    component_log_densities(*this, x, lp);
    return log_sum_exp(lp);
}

void GaussianMixture::posteriors(std::span<const double> x, std::span<double> out) const {
    check_dim(*this, x.size());
    component_log_densities(*this, x, out);
    const double lse = log_sum_exp(out);
    for (double& v : out) v = std::max(std::exp(v - lse), kPosteriorFloor);
}

GaussianMixture train_gmm(const Matrix& points, std::size_t k, std::uint64_t seed, const GmmOptions& options) {
    if (k == 0) throw InvalidArgument("mixture needs K >= 1");
    const std::size_t n_points = points.rows(), dim = points.cols();
    if (n_points < 10 * k)
        throw InvalidArgument(fmt::format("mixture with K={} needs at least {} samples, got {}", k, 10 * k, n_points));

    std::vector<double> data_mean(dim, 0.0), data_var(dim, 0.0), floor(dim);
    for (std::size_t i = 0; i < n_points; ++i)
        for (std::size_t d = 0; d < dim; ++d) data_mean[d] += points(i, d);
    for (double& m : data_mean) m /= static_cast<double>(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = points(i, d) - data_mean[d];
            data_var[d] += diff * diff;
        }
    for (std::size_t d = 0; d < dim; ++d) {
        data_var[d] /= static_cast<double>(n_points);
        floor[d] = std::max(options.variance_floor_ratio * data_var[d], options.min_variance);
    }

    const KMeansResult init = kmeans(points, k, derive_seed(seed, "gmm-init"));
    GaussianMixture gmm;
    gmm.means = init.codebook.centers;
    gmm.variances = Matrix(k, dim);
    gmm.weights.assign(k, 0.0);
    for (std::size_t i = 0; i < n_points; ++i) {
        const std::size_t c = init.assignment[i];
        gmm.weights[c] += 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = points(i, d) - gmm.means(c, d);
            gmm.variances(c, d) += diff * diff;
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < dim; ++d)
            gmm.variances(c, d) = std::max(gmm.variances(c, d) / gmm.weights[c], floor[d]);
        gmm.weights[c] /= static_cast<double>(n_points);
    }

    Rng rng(derive_seed(seed, "gmm-reinit"));
    std::vector<bool> reinitialized(k, false);
    std::vector<double> gamma(k);
    Matrix resp(n_points, k);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        // E-step
        double total_ll = 0.0;
        for (std::size_t i = 0; i < n_points; ++i) {
            auto r = resp.row(i);
            component_log_densities(gmm, points.row(i), r);
            const double lse = log_sum_exp(r);
            total_ll += lse;
            for (double& v : r) v = std::max(std::exp(v - lse), kPosteriorFloor);
        }
        const double avg_ll = total_ll / static_cast<double>(n_points);
        const bool converged = !gmm.log_likelihood_history.empty() &&
                               std::abs(avg_ll - gmm.log_likelihood_history.back()) <
                                   options.relative_tolerance * std::abs(gmm.log_likelihood_history.back());
        gmm.log_likelihood_history.push_back(avg_ll);
        if (converged) break;

        // M-step
        std::vector<double> mass(k, 0.0);
        for (std::size_t i = 0; i < n_points; ++i)
            for (std::size_t c = 0; c < k; ++c) mass[c] += resp(i, c);
        const double total_mass = std::accumulate(mass.begin(), mass.end(), 0.0);

        bool reset = false;
        for (std::size_t c = 0; c < k; ++c) {
            gmm.weights[c] = mass[c] / total_mass;
            if (gmm.weights[c] < options.degenerate_weight) {
                if (reinitialized[c])
                    throw ConvergenceError(fmt::format("mixture component {} collapsed twice (weight {})", c,
                                                       gmm.weights[c]));
                reinitialized[c] = true;
                reset = true;
                const std::size_t pick = uniform_index(rng, n_points);
                for (std::size_t d = 0; d < dim; ++d) {
                    gmm.means(c, d) = points(pick, d);
                    gmm.variances(c, d) = std::max(data_var[d], floor[d]);
                }
                gmm.weights[c] = 1.0 / static_cast<double>(k);
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                double s = 0.0;
                for (std::size_t i = 0; i < n_points; ++i) s += resp(i, c) * points(i, d);
                gmm.means(c, d) = s / mass[c];
            }
            for (std::size_t d = 0; d < dim; ++d) {
                double s = 0.0;
                for (std::size_t i = 0; i < n_points; ++i) {
                    const double diff = points(i, d) - gmm.means(c, d);
                    s += resp(i, c) * diff * diff;
                }
                gmm.variances(c, d) = std::max(s / mass[c], floor[d]);
            }
        }
        if (reset) {
            const double w = std::accumulate(gmm.weights.begin(), gmm.weights.end(), 0.0);
            for (double& x : gmm.weights) x /= w;
            // The likelihood is not comparable across a reset; restart the convergence test.
            gmm.log_likelihood_history.clear();
        }
    }
    return gmm;
}

std::vector<double> encode_ifv(const DescriptorSequence& seq, const GaussianMixture& gmm,
                               std::span<const TemporalFilter> filters, const IfvOptions& options) {
    check_dim(gmm, seq.dim());
    for (const auto& f : filters) f.check(seq.frame_count());

    const std::size_t k = gmm.size(), n = gmm.dim();
    const std::size_t block = 2 * k * n;
    std::vector<double> out(block * filters.size(), 0.0);

    Matrix gamma(seq.frame_count(), k);
    for (std::size_t t = 0; t < seq.frame_count(); ++t) gmm.posteriors(seq.frame(t), gamma.row(t));

    Matrix inv_sigma(k, n);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d < n; ++d) inv_sigma(c, d) = 1.0 / std::sqrt(gmm.variances(c, d));

    for (std::size_t f = 0; f < filters.size(); ++f) {
        const std::span<double> fv(out.data() + f * block, block);
        const std::size_t count = filters[f].length();
        if (count == 0) continue;
        for (std::size_t t = filters[f].start - 1; t < filters[f].end; ++t) {
            const auto x = seq.frame(t);
            for (std::size_t c = 0; c < k; ++c) {
                const double g = gamma(t, c);
                for (std::size_t d = 0; d < n; ++d) {
                    const double z = (x[d] - gmm.means(c, d)) * inv_sigma(c, d);
                    fv[c * n + d] += g * z;
                    fv[k * n + c * n + d] += g * (z * z - 1.0);
                }
            }
        }
        const double T = static_cast<double>(count);
        for (std::size_t c = 0; c < k; ++c) {
            const double mu_scale = 1.0 / (T * std::sqrt(gmm.weights[c]));
            const double sigma_scale = 1.0 / (T * std::sqrt(2.0 * gmm.weights[c]));
            for (std::size_t d = 0; d < n; ++d) {
                fv[c * n + d] *= mu_scale;
                fv[k * n + c * n + d] *= sigma_scale;
            }
        }
        if (options.improved) {
            double norm2 = 0.0;
            for (double& v : fv) {
                v = std::copysign(std::sqrt(std::abs(v)), v);
                norm2 += v * v;
            }
            if (norm2 > 0.0) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (double& v : fv) v *= inv;
            }
        }
    }
    return out;
}

}  // namespace pot
