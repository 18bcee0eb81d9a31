#include "pot/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pot/error.hpp"

namespace pot {

double dtw_distance(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw InvalidArgument(fmt::format("DTW dimension mismatch: {} vs {}", a.cols(), b.cols()));
    if (a.rows() == 0 || b.rows() == 0) throw InvalidArgument("DTW of an empty sequence");

    auto frame_distance = [&](std::size_t i, std::size_t j) {
        const auto x = a.row(i), y = b.row(j);
        double s = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double diff = x[d] - y[d];
            s += diff * diff;
        }
        return std::sqrt(s);
    };

    // Two rolling rows of the cumulative cost table.
    const std::size_t m = b.rows();
    std::vector<double> prev(m), cur(m);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double d = frame_distance(i, j);
            if (i == 0 && j == 0) {
                cur[j] = d;
            } else if (i == 0) {
                cur[j] = d + cur[j - 1];
            } else if (j == 0) {
                cur[j] = d + prev[j];
            } else {
                cur[j] = d + std::min({prev[j - 1], prev[j], cur[j - 1]});
            }
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

NearestNeighbor classify_dtw(const DescriptorSequence& query, std::span<const DescriptorSequence* const> references) {
    if (references.empty()) throw InvalidArgument("1-NN DTW needs at least one reference sequence");
    NearestNeighbor best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t r = 0; r < references.size(); ++r) {
        const double d = dtw_distance(query, *references[r]);
        if (d < best.distance) best = {r, d};
    }
    return best;
}

}  // namespace pot
