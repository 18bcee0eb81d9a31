#pragma once

// Straight-from-the-definition reference implementations used to check the
// optimized library code. They favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "pot/fisher.hpp"
#include "pot/matrix.hpp"

namespace oracle {

// Series are 1-based here: f[0] is unused padding so f[t] reads like the math.
inline std::vector<double> one_based(const std::vector<double>& s) {
    std::vector<double> f(s.size() + 1, 0.0);
    std::copy(s.begin(), s.end(), f.begin() + 1);
    return f;
}

inline double max_pool(const std::vector<double>& s, std::size_t ts, std::size_t te) {
    const auto f = one_based(s);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = ts; t <= te; ++t) best = std::max(best, f[t]);
    return best;
}

inline double sum_pool(const std::vector<double>& s, std::size_t ts, std::size_t te) {
    const auto f = one_based(s);
    double total = 0.0;
    for (std::size_t t = ts; t <= te; ++t) total += f[t];
    return total;
}

struct Pair {
    double pos = 0.0;
    double neg = 0.0;
};

inline Pair grad1(const std::vector<double>& s, std::size_t ts, std::size_t te) {
    const auto f = one_based(s);
    Pair p;
    for (std::size_t t = ts; t <= te; ++t) {
        if (t == 1) continue;
        if (f[t] - f[t - 1] > 0) p.pos += 1;
        if (f[t] - f[t - 1] < 0) p.neg += 1;
    }
    return p;
}

inline Pair grad2(const std::vector<double>& s, std::size_t ts, std::size_t te) {
    const auto f = one_based(s);
    Pair p;
    for (std::size_t t = ts; t <= te; ++t) {
        if (t == 1) continue;
        const double d = f[t] - f[t - 1];
        p.pos += d > 0 ? d : 0.0;
        p.neg += d < 0 ? -d : 0.0;
    }
    return p;
}

inline double frame_distance(const pot::Matrix& a, std::size_t i, const pot::Matrix& b, std::size_t j) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.cols(); ++d) s += (a(i, d) - b(j, d)) * (a(i, d) - b(j, d));
    return std::sqrt(s);
}

// Exponential recursion, no memoization.
inline double dtw(const pot::Matrix& a, const pot::Matrix& b) {
    std::function<double(std::size_t, std::size_t)> cost = [&](std::size_t i, std::size_t j) -> double {
        const double here = frame_distance(a, i, b, j);
        if (i == 0 && j == 0) return here;
        double best = std::numeric_limits<double>::infinity();
        if (i > 0) best = std::min(best, cost(i - 1, j));
        if (j > 0) best = std::min(best, cost(i, j - 1));
        if (i > 0 && j > 0) best = std::min(best, cost(i - 1, j - 1));
        return here + best;
    };
    return cost(a.rows() - 1, b.rows() - 1);
}

inline double gaussian_density(const pot::GaussianMixture& g, std::size_t k, const double* x) {
    double p = g.weights[k];
    for (std::size_t d = 0; d < g.dim(); ++d) {
        const double var = g.variances(k, d);
        const double z = x[d] - g.means(k, d);
        p *= std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * M_PI * var);
    }
    return p;
}

// Unnormalized Fisher vector of frames [ts, te] (1-based) computed with plain
// probabilities instead of the log domain.
inline std::vector<double> fisher(const pot::Matrix& frames, const pot::GaussianMixture& g, std::size_t ts,
                                  std::size_t te) {
    const std::size_t K = g.size(), n = g.dim();
    std::vector<double> mu(K * n, 0.0), sig(K * n, 0.0);
    const double T = static_cast<double>(te - ts + 1);
    for (std::size_t t = ts; t <= te; ++t) {
        const double* x = frames.row(t - 1).data();
        std::vector<double> p(K);
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) total += p[k] = gaussian_density(g, k, x);
        for (std::size_t k = 0; k < K; ++k) {
            const double gamma = std::max(p[k] / total, pot::kPosteriorFloor);
            for (std::size_t d = 0; d < n; ++d) {
                const double z = (x[d] - g.means(k, d)) / std::sqrt(g.variances(k, d));
                mu[k * n + d] += gamma * z;
                sig[k * n + d] += gamma * (z * z - 1.0);
            }
        }
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t d = 0; d < n; ++d) out.push_back(mu[k * n + d] / (T * std::sqrt(g.weights[k])));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t d = 0; d < n; ++d) out.push_back(sig[k * n + d] / (T * std::sqrt(2.0 * g.weights[k])));
    return out;
}

inline double average_log_likelihood(const pot::Matrix& frames, const pot::GaussianMixture& g) {
    double s = 0.0;
    for (std::size_t t = 0; t < frames.rows(); ++t) {
        double p = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) p += gaussian_density(g, k, frames.row(t).data());
        s += std::log(p);
    }
    return s / static_cast<double>(frames.rows());
}

// Fisher blocks from central finite differences of the average log-likelihood:
//   G_mu    = sigma / sqrt(w)   * dL/dmu
//   G_sigma = sigma / sqrt(2 w) * dL/dsigma
inline std::vector<double> fisher_by_finite_differences(const pot::Matrix& frames, pot::GaussianMixture g,
                                                        double h = 1e-5) {
    const std::size_t K = g.size(), n = g.dim();
    std::vector<double> mu(K * n), sig(K * n);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t d = 0; d < n; ++d) {
            const double m0 = g.means(k, d);
            g.means(k, d) = m0 + h;
            const double up = average_log_likelihood(frames, g);
            g.means(k, d) = m0 - h;
            const double down = average_log_likelihood(frames, g);
            g.means(k, d) = m0;
            const double sigma = std::sqrt(g.variances(k, d));
            mu[k * n + d] = sigma / std::sqrt(g.weights[k]) * (up - down) / (2 * h);

            const double v0 = g.variances(k, d);
            g.variances(k, d) = (sigma + h) * (sigma + h);
            const double s_up = average_log_likelihood(frames, g);
            g.variances(k, d) = (sigma - h) * (sigma - h);
            const double s_down = average_log_likelihood(frames, g);
            g.variances(k, d) = v0;
            sig[k * n + d] = sigma / std::sqrt(2.0 * g.weights[k]) * (s_up - s_down) / (2 * h);
        }
    }
    mu.insert(mu.end(), sig.begin(), sig.end());
    return mu;
}

}  // namespace oracle
