#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pot/core.hpp"
#include "pot/matrix.hpp"

namespace pot {

/// Visual-word centers, one per row.
struct Codebook {
    Matrix centers;

    std::size_t size() const noexcept { return centers.rows(); }
    std::size_t dim() const noexcept { return centers.cols(); }
    /// Index of the nearest center in squared Euclidean distance; ties go to the lower index.
    std::size_t nearest(std::span<const double> x) const;
};

struct KMeansOptions {
    std::size_t max_iterations = 100;
    /// Stop once |inertia_prev - inertia| / inertia_prev falls below this.
    double relative_tolerance = 1e-4;
};

struct KMeansResult {
    Codebook codebook;
    std::vector<std::size_t> assignment;
    double inertia = 0.0;
    std::size_t iterations = 0;
};

/// Lloyd's k-means with k-means++ seeding. Rows of `points` are samples.
/// Requires at least K distinct rows; empty clusters take the point farthest
/// from its current center.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

inline Codebook train_codebook(const Matrix& points, std::size_t k, std::uint64_t seed) {
    return kmeans(points, k, seed).codebook;
}

/// Stacks the frames of several sequences into one sample matrix.
Matrix stack_frames(std::span<const DescriptorSequence* const> sequences);

struct BowOptions {
    bool normalize = true;
};

/// Per-filter K-bin histograms of nearest-word assignments, each L1-normalized,
/// concatenated in filter order. Length K * filters.size().
std::vector<double> encode_bow(const DescriptorSequence& seq, const Codebook& codebook,
                               std::span<const TemporalFilter> filters, const BowOptions& options = {});

}  // namespace pot
