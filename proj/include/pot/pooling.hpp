#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pot/core.hpp"

namespace pot {

/// Positive/negative pair produced by the gradient operators.
struct GradientPair {
    double positive = 0.0;
    double negative = 0.0;
};

// Operators take a 0-based series and a 1-based inclusive filter.
// The gradient operators look at differences f(t) - f(t-1) for
// max(start, 2) <= t <= end, so the left edge of a filter references the
// frame just before it; frame 1 has no predecessor and is skipped.
// Zero differences count as neither positive nor negative.

double pool_max(std::span<const double> series, const TemporalFilter& filter);
double pool_sum(std::span<const double> series, const TemporalFilter& filter);
/// Number of positive and negative frame-to-frame differences.
GradientPair pool_grad1(std::span<const double> series, const TemporalFilter& filter);
/// Summed magnitudes of positive and negative differences (both >= 0).
GradientPair pool_grad2(std::span<const double> series, const TemporalFilter& filter);

/// Position of one value inside a pooled vector.
struct PotSlot {
    std::size_t series = 0;
    std::size_t filter = 0;
    PoolOp op = PoolOp::Sum;
    /// 0 for the single value of sum/max and for the positive half of a
    /// gradient pair, 1 for the negative half.
    std::size_t sign = 0;

    bool operator==(const PotSlot&) const = default;
};

/// Describes the series-major, filter, operator ordering of a pooled vector.
class PotLayout {
public:
    PotLayout(std::size_t series_count, std::size_t filter_count, OperatorSet ops);

    std::size_t size() const noexcept { return series_count_ * filter_count_ * ops_.width(); }
    std::size_t series_count() const noexcept { return series_count_; }
    std::size_t filter_count() const noexcept { return filter_count_; }
    const OperatorSet& ops() const noexcept { return ops_; }

    PotSlot slot(std::size_t position) const;
    std::size_t position(const PotSlot& slot) const;

private:
    std::size_t series_count_;
    std::size_t filter_count_;
    OperatorSet ops_;
    std::vector<std::size_t> op_offsets_;
};

/// Pooled time series representation of one video and channel.
struct PotVector {
    std::string video_id;
    std::string channel;
    std::vector<double> values;
    PotLayout layout;
};

struct PotOptions {
    /// Scale the concatenated vector to unit L1 norm. Off by default.
    bool l1_normalize = false;
};

/// Pools every series with every filter and operator and concatenates the
/// results: series-major, then filter, then operator in `ops` order.
PotVector build_pot(const DescriptorSequence& seq, std::span<const TemporalFilter> filters, const OperatorSet& ops,
                    const PotOptions& options = {});
PotVector build_pot(const DescriptorSequence& seq, const TemporalPyramid& pyramid, const OperatorSet& ops,
                    const PotOptions& options = {});

}  // namespace pot
