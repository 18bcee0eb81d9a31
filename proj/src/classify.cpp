#include "pot/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pot/error.hpp"
#include "pot/parallel.hpp"

namespace pot {

double chi2_distance(std::span<const double> x, std::span<const double> y, Chi2Denominator denominator) {
    if (x.size() != y.size())
        throw InvalidArgument(fmt::format("chi2 distance of vectors with lengths {} and {}", x.size(), y.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double den = denominator == Chi2Denominator::Sum ? x[i] + y[i] : std::abs(x[i]) + std::abs(y[i]);
        if (den == 0.0) continue;
        const double diff = x[i] - y[i];
        sum += diff * diff / den;
    }
    return 0.5 * sum;
}

double multichannel_kernel(std::span<const std::span<const double>> xs, std::span<const std::span<const double>> ys,
                           std::span<const double> gammas, std::span<const Chi2Denominator> denominators) {
    if (xs.size() != ys.size() || xs.size() != gammas.size())
        throw InvalidArgument(fmt::format("channel count mismatch: {} vs {} vectors, {} gammas", xs.size(), ys.size(),
                                          gammas.size()));
    if (!denominators.empty() && denominators.size() != xs.size())
        throw InvalidArgument("one chi2 denominator per channel required");
    double exponent = 0.0;
    for (std::size_t c = 0; c < xs.size(); ++c) {
        if (!(gammas[c] > 0.0)) throw InvalidArgument(fmt::format("gamma of channel {} must be positive", c));
        const auto den = denominators.empty() ? Chi2Denominator::Sum : denominators[c];
        exponent += chi2_distance(xs[c], ys[c], den) / gammas[c];
    }
    return std::exp(-exponent);
}

Matrix pairwise_chi2(const Matrix& features, Chi2Denominator denominator, unsigned jobs) {
    const std::size_t n = features.rows();
    Matrix d(n, n);
    parallel_for(n, jobs, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) d(i, j) = chi2_distance(features.row(i), features.row(j), denominator);
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d(j, i) = d(i, j);
    return d;
}

Chi2Denominator choose_denominator(const Matrix& features) noexcept {
    for (double v : features.data())
        if (v < 0.0) return Chi2Denominator::AbsSum;
    return Chi2Denominator::Sum;
}

double mean_pair_distance(const Matrix& distances, std::span<const std::size_t> rows) {
    if (rows.size() < 2) throw InvalidArgument("mean pair distance needs at least two samples");
    double sum = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a + 1; b < rows.size(); ++b) sum += distances(rows[a], rows[b]);
    const double pairs = 0.5 * static_cast<double>(rows.size()) * static_cast<double>(rows.size() - 1);
    const double mean = sum / pairs;
    return mean > 0.0 ? mean : 1.0;
}

Matrix kernel_from_distances(std::span<const Matrix> distances, std::span<const double> gammas,
                             std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
    if (distances.size() != gammas.size()) throw InvalidArgument("one gamma per channel required");
    for (double g : gammas)
        if (!(g > 0.0)) throw InvalidArgument("kernel gamma must be positive");
    Matrix k(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            double exponent = 0.0;
            for (std::size_t ch = 0; ch < distances.size(); ++ch)
                exponent += distances[ch](rows[r], cols[c]) / gammas[ch];
            k(r, c) = std::exp(-exponent);
        }
    }
    return k;
}

double BinarySvm::decision(std::span<const double> kernel_row) const {
    double f = bias;
    for (std::size_t i = 0; i < coef.size(); ++i) f += coef[i] * kernel_row[i];
    return f;
}

BinarySvm solve_binary_svm(const Matrix& kernel, std::span<const int> y, const SvmOptions& options) {
    const std::size_t n = y.size();
    if (kernel.rows() != n || kernel.cols() != n)
        throw InvalidArgument(fmt::format("kernel is {}x{} for {} labels", kernel.rows(), kernel.cols(), n));
    if (!(options.c > 0.0)) throw InvalidArgument("SVM C must be positive");
    for (int v : y)
        if (v != 1 && v != -1) throw InvalidArgument("binary labels must be +1 or -1");

    constexpr double kTau = 1e-12;
    const double c = options.c;
    auto q = [&](std::size_t i, std::size_t j) { return static_cast<double>(y[i] * y[j]) * kernel(i, j); };

    // Minimize f(a) = 1/2 a'Qa - e'a; grad = Qa - e.
    std::vector<double> alpha(n, 0.0), grad(n, -1.0);
    auto in_up = [&](std::size_t t) { return (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0); };
    auto in_low = [&](std::size_t t) { return (y[t] == -1 && alpha[t] < c) || (y[t] == 1 && alpha[t] > 0.0); };
    auto dual_objective = [&] {
        double f = 0.0;
        for (std::size_t t = 0; t < n; ++t) f += alpha[t] * (grad[t] - 1.0);
        return -0.5 * f;
    };

    BinarySvm svm;
    std::size_t it = 0;
    for (;; ++it) {
        double up_value = -std::numeric_limits<double>::infinity();
        double low_value = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -static_cast<double>(y[t]) * grad[t];
            if (in_up(t) && v > up_value) {
                up_value = v;
                i = t;
            }
            if (in_low(t) && v < low_value) {
                low_value = v;
                j = t;
            }
        }
        if (i == n || j == n || up_value - low_value < options.tolerance) break;
        if (it >= options.max_iterations)
            throw ConvergenceError(fmt::format("SMO did not converge in {} iterations (KKT violation {})",
                                               options.max_iterations, up_value - low_value));

        const double old_i = alpha[i], old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * di + q(j, t) * dj;
        if (options.record_objective) svm.objective.push_back(dual_objective());
    }
    svm.iterations = it;

    // Bias from free support vectors; midpoint of the feasible range when there are none.
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double upper = std::numeric_limits<double>::infinity(), lower = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = static_cast<double>(y[t]) * grad[t];
        if (alpha[t] > 0.0 && alpha[t] < c) {
            free_sum += yg;
            ++free_count;
        } else if ((alpha[t] >= c && y[t] == -1) || (alpha[t] <= 0.0 && y[t] == 1)) {
            upper = std::min(upper, yg);
        } else {
            lower = std::max(lower, yg);
        }
    }
    double rho;
    if (free_count > 0)
        rho = free_sum / static_cast<double>(free_count);
    else if (std::isfinite(upper) && std::isfinite(lower))
        rho = 0.5 * (upper + lower);
    else
        rho = std::isfinite(upper) ? upper : (std::isfinite(lower) ? lower : 0.0);

    svm.bias = -rho;
    svm.coef.resize(n);
    for (std::size_t t = 0; t < n; ++t) svm.coef[t] = static_cast<double>(y[t]) * alpha[t];
    return svm;
}

std::vector<std::size_t> SvmModel::support_indices() const {
    std::vector<std::size_t> out;
    if (machines.empty()) return out;
    for (std::size_t t = 0; t < machines.front().coef.size(); ++t)
        for (const auto& m : machines)
            if (m.coef[t] != 0.0) {
                out.push_back(t);
                break;
            }
    return out;
}

SvmModel train_svm(const Matrix& kernel, std::span<const int> labels, const SvmOptions& options) {
    if (labels.size() < 2) throw InvalidArgument("SVM training needs at least two samples");
    SvmModel model;
    model.c = options.c;
    model.classes.assign(labels.begin(), labels.end());
    std::sort(model.classes.begin(), model.classes.end());
    model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
    if (model.classes.size() < 2) throw InvalidArgument("SVM training needs at least two classes");

    model.machines.resize(model.classes.size());
    SvmOptions inner = options;
    inner.jobs = 1;
    parallel_for(model.classes.size(), options.jobs, [&](std::size_t k) {
        std::vector<int> y(labels.size());
        for (std::size_t t = 0; t < y.size(); ++t) y[t] = labels[t] == model.classes[k] ? 1 : -1;
        model.machines[k] = solve_binary_svm(kernel, y, inner);
    });
    return model;
}

Prediction predict(const SvmModel& model, std::span<const double> kernel_row) {
    if (model.machines.empty()) throw InvalidArgument("model has no machines");
    if (kernel_row.size() != model.machines.front().coef.size())
        throw InvalidArgument(fmt::format("kernel row has {} entries, model was trained on {}", kernel_row.size(),
                                          model.machines.front().coef.size()));
    Prediction p;
    p.scores.reserve(model.machines.size());
    std::size_t best = 0;
    for (std::size_t k = 0; k < model.machines.size(); ++k) {
        p.scores.push_back(model.machines[k].decision(kernel_row));
        if (p.scores[k] > p.scores[best]) best = k;
    }
    p.label = model.classes[best];
    return p;
}

}  // namespace pot
