#include "pot/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "pot/error.hpp"

namespace pot {

DescriptorSequence::DescriptorSequence(std::string video_id, std::string channel, Matrix values, std::size_t l1_block)
    : video_id_(std::move(video_id)), channel_(std::move(channel)), values_(std::move(values)), l1_block_(l1_block) {
    if (values_.rows() == 0) throw InvalidArgument(fmt::format("{}/{}: no frames", video_id_, channel_));
    if (values_.cols() == 0) throw InvalidArgument(fmt::format("{}/{}: zero-dimensional descriptor", video_id_, channel_));
    if (l1_block_ != 0 && values_.cols() % l1_block_ != 0)
        throw InvalidArgument(fmt::format("{}/{}: normalization block {} does not divide dimension {}", video_id_,
                                          channel_, l1_block_, values_.cols()));
    for (std::size_t t = 0; t < values_.rows(); ++t) {
        for (std::size_t i = 0; i < values_.cols(); ++i) {
            if (!std::isfinite(values_(t, i)))
                throw InvalidArgument(fmt::format("{}/{}: non-finite value at frame {}, dim {}", video_id_, channel_,
                                                  t + 1, i + 1));
        }
        if (l1_block_ == 0) continue;
        for (std::size_t b = 0; b < values_.cols(); b += l1_block_) {
            double l1 = 0.0;
            for (std::size_t i = b; i < b + l1_block_; ++i) l1 += std::abs(values_(t, i));
            if (l1 != 0.0 && std::abs(l1 - 1.0) > kL1Tolerance)
                throw InvalidArgument(fmt::format("{}/{}: frame {} has L1 norm {} in columns {}..{} but is marked normalized",
                                                  video_id_, channel_, t + 1, l1, b + 1, b + l1_block_));
        }
    }
}

std::vector<double> DescriptorSequence::series(std::size_t i) const {
    std::vector<double> out(frame_count());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = values_(t, i);
    return out;
}

void l1_normalize(std::span<double> v) {
    double sum = 0.0;
    for (double x : v) sum += std::abs(x);
    if (sum == 0.0) return;
    for (double& x : v) x /= sum;
}

void TemporalFilter::check(std::size_t frame_count) const {
    if (start < 1 || start > end || end > frame_count)
        throw InvalidArgument(fmt::format("temporal filter [{}, {}] invalid for a sequence of {} frames", start, end,
                                          frame_count));
}

TemporalPyramid build_pyramid(std::size_t levels, std::size_t frame_count) {
    if (levels < 1) throw InvalidArgument("pyramid needs at least one level");
    if (frame_count < 1) throw InvalidArgument("pyramid needs at least one frame");
    if (levels > 63) throw InvalidArgument(fmt::format("pyramid level {} is infeasible", levels));

    TemporalPyramid pyramid;
    pyramid.levels = levels;
    pyramid.frame_count = frame_count;
    pyramid.filters.reserve((std::size_t{1} << levels) - 1);
    for (std::size_t level = 1; level <= levels; ++level) {
        const std::size_t parts = std::size_t{1} << (level - 1);
        if (parts > frame_count)
            throw InvalidArgument(fmt::format(
                "pyramid level {} is infeasible: {} segments over {} frames would leave empty segments", level, parts,
                frame_count));
        for (std::size_t j = 1; j <= parts; ++j) {
            pyramid.filters.push_back({(j - 1) * frame_count / parts + 1, j * frame_count / parts});
        }
    }
    return pyramid;
}

std::string_view op_name(PoolOp op) noexcept {
    switch (op) {
        case PoolOp::Sum: return "sum";
        case PoolOp::Max: return "max";
        case PoolOp::Grad1: return "d1";
        case PoolOp::Grad2: return "d2";
    }
    return "?";
}

std::optional<PoolOp> parse_op(std::string_view name) noexcept {
    if (name == "sum") return PoolOp::Sum;
    if (name == "max") return PoolOp::Max;
    if (name == "d1" || name == "grad1") return PoolOp::Grad1;
    if (name == "d2" || name == "grad2") return PoolOp::Grad2;
    return std::nullopt;
}

OperatorSet::OperatorSet(std::vector<PoolOp> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw InvalidArgument("operator set is empty");
    for (std::size_t i = 0; i < ops_.size(); ++i)
        for (std::size_t j = i + 1; j < ops_.size(); ++j)
            if (ops_[i] == ops_[j])
                throw InvalidArgument(fmt::format("operator '{}' listed twice", op_name(ops_[i])));
}

OperatorSet OperatorSet::all() { return OperatorSet({PoolOp::Sum, PoolOp::Max, PoolOp::Grad1, PoolOp::Grad2}); }

OperatorSet OperatorSet::parse(std::string_view csv) {
    std::vector<PoolOp> ops;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', pos), csv.size());
        const std::string_view token = csv.substr(pos, comma - pos);
        if (!token.empty()) {
            const auto op = parse_op(token);
            if (!op) throw InvalidArgument(fmt::format("unknown pooling operator '{}'", token));
            ops.push_back(*op);
        }
        pos = comma + 1;
    }
    return OperatorSet(std::move(ops));
}

std::size_t OperatorSet::width() const noexcept {
    std::size_t w = 0;
    for (PoolOp op : ops_) w += op_width(op);
    return w;
}

std::string OperatorSet::to_string() const {
    std::string out;
    for (PoolOp op : ops_) {
        if (!out.empty()) out += ',';
        out += op_name(op);
    }
    return out;
}

std::size_t pot_dimension(std::size_t n, std::size_t filter_count, const OperatorSet& ops) noexcept {
    return n * filter_count * ops.width();
}

}  // namespace pot
