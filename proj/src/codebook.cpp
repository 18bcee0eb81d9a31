#include "pot/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "pot/error.hpp"
#include "pot/random.hpp"

namespace pot {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

std::size_t count_distinct_rows(const Matrix& points) {
    std::vector<std::size_t> order(points.rows());
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
        const auto ra = points.row(a), rb = points.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(order.begin(), order.end(), less);
    std::size_t distinct = order.empty() ? 0 : 1;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (less(order[i - 1], order[i])) ++distinct;
    return distinct;
}

Matrix seed_centers(const Matrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    Matrix centers(k, points.cols());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    std::size_t pick = uniform_index(rng, n);
    for (std::size_t c = 0; c < k; ++c) {
        std::copy_n(points.row(pick).begin(), points.cols(), centers.row(c).begin());
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points.row(i), centers.row(c)));
            total += d2[i];
        }
        if (c + 1 == k) break;
        // D^2 sampling; fall back to the first uncovered point when the draw lands on rounding slack.
        double target = uniform01(rng) * total;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            if (target < d2[i]) {
                pick = i;
                break;
            }
            target -= d2[i];
        }
        if (pick == n)
            for (std::size_t i = n; i-- > 0;)
                if (d2[i] > 0.0) {
                    pick = i;
                    break;
                }
    }
    return centers;
}

}  // namespace

std::size_t Codebook::nearest(std::span<const double> x) const {
    if (x.size() != dim())
        throw InvalidArgument(fmt::format("descriptor dimension {} does not match codebook dimension {}", x.size(), dim()));
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < size(); ++c) {
        const double d = squared_distance(x, centers.row(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
    if (k == 0) throw InvalidArgument("k-means needs K >= 1");
    const std::size_t distinct = count_distinct_rows(points);
    if (distinct < k)
        throw InvalidArgument(fmt::format("k-means with K={} needs at least {} distinct points, got {}", k, k, distinct));

    const std::size_t n = points.rows(), dim = points.cols();
    Rng rng(seed);
    KMeansResult result;
    result.codebook.centers = seed_centers(points, k, rng);
    result.assignment.assign(n, 0);
    std::vector<double> dist(n);

    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        result.iterations = it + 1;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            result.assignment[i] = result.codebook.nearest(points.row(i));
            dist[i] = squared_distance(points.row(i), result.codebook.centers.row(result.assignment[i]));
            inertia += dist[i];
        }

        std::vector<std::size_t> counts(k, 0);
        for (std::size_t a : result.assignment) ++counts[a];
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
            --counts[result.assignment[far]];
            result.assignment[far] = c;
            counts[c] = 1;
            inertia -= dist[far];
            dist[far] = 0.0;
        }

        Matrix sums(k, dim);
        for (std::size_t i = 0; i < n; ++i) {
            auto s = sums.row(result.assignment[i]);
            const auto p = points.row(i);
            for (std::size_t d = 0; d < dim; ++d) s[d] += p[d];
        }
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d)
                result.codebook.centers(c, d) = sums(c, d) / static_cast<double>(counts[c]);

        result.inertia = inertia;
        if (std::isfinite(previous) &&
            std::abs(previous - inertia) <= options.relative_tolerance * std::max(previous, 1e-300))
            break;
        previous = inertia;
    }

    result.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        result.assignment[i] = result.codebook.nearest(points.row(i));
        result.inertia += squared_distance(points.row(i), result.codebook.centers.row(result.assignment[i]));
    }
    return result;
}

Matrix stack_frames(std::span<const DescriptorSequence* const> sequences) {
    if (sequences.empty()) throw InvalidArgument("no descriptor sequences to stack");
    const std::size_t dim = sequences.front()->dim();
    std::size_t rows = 0;
    for (const auto* s : sequences) {
        if (s->dim() != dim)
            throw InvalidArgument(fmt::format("{}: dimension {} differs from {}", s->video_id(), s->dim(), dim));
        rows += s->frame_count();
    }
    Matrix out(rows, dim);
    std::size_t r = 0;
    for (const auto* s : sequences)
        for (std::size_t t = 0; t < s->frame_count(); ++t, ++r)
            std::copy_n(s->frame(t).begin(), dim, out.row(r).begin());
    return out;
}

std::vector<double> encode_bow(const DescriptorSequence& seq, const Codebook& codebook,
                               std::span<const TemporalFilter> filters, const BowOptions& options) {
    if (seq.dim() != codebook.dim())
        throw InvalidArgument(fmt::format("{}: descriptor dimension {} does not match codebook dimension {}",
                                          seq.video_id(), seq.dim(), codebook.dim()));
    for (const auto& f : filters) f.check(seq.frame_count());

    std::vector<std::size_t> words(seq.frame_count());
    for (std::size_t t = 0; t < words.size(); ++t) words[t] = codebook.nearest(seq.frame(t));

    const std::size_t k = codebook.size();
    std::vector<double> out(k * filters.size(), 0.0);
    for (std::size_t f = 0; f < filters.size(); ++f) {
        const std::span<double> hist(out.data() + f * k, k);
        for (std::size_t t = filters[f].start; t <= filters[f].end; ++t) hist[words[t - 1]] += 1.0;
        if (options.normalize) l1_normalize(hist);
    }
    return out;
}

}  // namespace pot
