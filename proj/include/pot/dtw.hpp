#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pot/core.hpp"
#include "pot/matrix.hpp"

namespace pot {

/// Unconstrained DTW with Euclidean frame distance and the symmetric
/// (match, insertion, deletion) step pattern with unit weights. Both ends
/// are aligned. Rows of `a` and `b` are frames.
double dtw_distance(const Matrix& a, const Matrix& b);

inline double dtw_distance(const DescriptorSequence& a, const DescriptorSequence& b) {
    return dtw_distance(a.values(), b.values());
}

struct NearestNeighbor {
    std::size_t index = 0;  ///< position in the reference set
    double distance = 0.0;
};

/// 1-NN over `references` by DTW distance; ties go to the lowest index.
NearestNeighbor classify_dtw(const DescriptorSequence& query, std::span<const DescriptorSequence* const> references);

}  // namespace pot
