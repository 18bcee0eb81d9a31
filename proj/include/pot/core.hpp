#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pot/matrix.hpp"

namespace pot {

/// Per-frame descriptors of one video and one channel: an m x n matrix whose
/// column i is the time series f_i(t), t = 1..m.
class DescriptorSequence {
public:
    /// Validates shape and finiteness. A non-zero `l1_block` marks the channel as
    /// L1-normalized in consecutive blocks of that many columns (the whole row when
    /// it equals the dimension): every block must have absolute sum 1 +- 1e-6 or be
    /// all zeros.
    DescriptorSequence(std::string video_id, std::string channel, Matrix values, std::size_t l1_block = 0);

    const std::string& video_id() const noexcept { return video_id_; }
    const std::string& channel() const noexcept { return channel_; }
    const Matrix& values() const noexcept { return values_; }
    bool l1_normalized() const noexcept { return l1_block_ != 0; }
    std::size_t l1_block() const noexcept { return l1_block_; }

    std::size_t frame_count() const noexcept { return values_.rows(); }
    std::size_t dim() const noexcept { return values_.cols(); }

    /// Descriptor of frame t (0-based row).
    std::span<const double> frame(std::size_t t) const { return values_.row(t); }
    /// Copy of time series i (0-based column), length m.
    std::vector<double> series(std::size_t i) const;

private:
    std::string video_id_;
    std::string channel_;
    Matrix values_;
    std::size_t l1_block_;
};

/// Tolerance used for the L1 row-normalization invariant.
inline constexpr double kL1Tolerance = 1e-6;

/// Scales `v` in place to unit L1 norm; an all-zero vector is left unchanged.
void l1_normalize(std::span<double> v);

/// Time interval [start, end] over frames, 1-based and inclusive.
struct TemporalFilter {
    std::size_t start = 1;
    std::size_t end = 1;

    std::size_t length() const noexcept { return end - start + 1; }
    /// Throws InvalidArgument unless 1 <= start <= end <= frame_count.
    void check(std::size_t frame_count) const;

    bool operator==(const TemporalFilter&) const = default;
};

/// Hierarchical filter bank: level l splits [1, m] into 2^(l-1) contiguous parts.
/// Filters are stored level-major, left to right.
struct TemporalPyramid {
    std::size_t levels = 0;
    std::size_t frame_count = 0;
    std::vector<TemporalFilter> filters;

    std::size_t size() const noexcept { return filters.size(); }
};

/// Builds the pyramid with levels 1..`levels` over `frame_count` frames.
/// Segment j (1-based) of level l covers [floor((j-1)m/2^(l-1))+1, floor(jm/2^(l-1))].
/// Throws InvalidArgument naming the first level whose segments would be empty.
TemporalPyramid build_pyramid(std::size_t levels, std::size_t frame_count);

enum class PoolOp { Sum, Max, Grad1, Grad2 };

/// Number of output values the operator emits per series and filter.
constexpr std::size_t op_width(PoolOp op) noexcept {
    return (op == PoolOp::Grad1 || op == PoolOp::Grad2) ? 2 : 1;
}

std::string_view op_name(PoolOp op) noexcept;
/// Accepts "sum", "max", "d1"/"grad1", "d2"/"grad2".
std::optional<PoolOp> parse_op(std::string_view name) noexcept;

/// Ordered, duplicate-free, non-empty selection of pooling operators.
class OperatorSet {
public:
    explicit OperatorSet(std::vector<PoolOp> ops);
    /// All four operators in canonical order sum, max, d1, d2.
    static OperatorSet all();
    /// Parses a comma-separated list such as "sum,max,d1,d2".
    static OperatorSet parse(std::string_view csv);

    std::span<const PoolOp> ops() const noexcept { return ops_; }
    std::size_t width() const noexcept;
    std::string to_string() const;

    bool operator==(const OperatorSet&) const = default;

private:
    std::vector<PoolOp> ops_;
};

/// Length of the pooled vector: n * k * width(ops).
std::size_t pot_dimension(std::size_t n, std::size_t filter_count, const OperatorSet& ops) noexcept;
inline std::size_t pot_dimension(std::size_t n, const TemporalPyramid& pyramid, const OperatorSet& ops) noexcept {
    return pot_dimension(n, pyramid.size(), ops);
}

}  // namespace pot
