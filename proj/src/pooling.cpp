#include "pot/pooling.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pot/error.hpp"

namespace pot {

double pool_max(std::span<const double> series, const TemporalFilter& filter) {
    filter.check(series.size());
    double best = series[filter.start - 1];
    for (std::size_t t = filter.start; t < filter.end; ++t) best = std::max(best, series[t]);
    return best;
}

double pool_sum(std::span<const double> series, const TemporalFilter& filter) {
    filter.check(series.size());
    double total = 0.0;
    for (std::size_t t = filter.start - 1; t < filter.end; ++t) total += series[t];
    return total;
}

GradientPair pool_grad1(std::span<const double> series, const TemporalFilter& filter) {
    filter.check(series.size());
    GradientPair out;
    // 1-based t maps to index t-1; the predecessor is index t-2.
    for (std::size_t t = std::max<std::size_t>(filter.start, 2); t <= filter.end; ++t) {
        const double diff = series[t - 1] - series[t - 2];
        if (diff > 0.0)
            out.positive += 1.0;
        else if (diff < 0.0)
            out.negative += 1.0;
    }
    return out;
}

GradientPair pool_grad2(std::span<const double> series, const TemporalFilter& filter) {
    filter.check(series.size());
    GradientPair out;
    for (std::size_t t = std::max<std::size_t>(filter.start, 2); t <= filter.end; ++t) {
        const double diff = series[t - 1] - series[t - 2];
        if (diff > 0.0)
            out.positive += diff;
        else if (diff < 0.0)
            out.negative -= diff;
    }
    return out;
}

PotLayout::PotLayout(std::size_t series_count, std::size_t filter_count, OperatorSet ops)
    : series_count_(series_count), filter_count_(filter_count), ops_(std::move(ops)) {
    std::size_t offset = 0;
    for (PoolOp op : ops_.ops()) {
        op_offsets_.push_back(offset);
        offset += op_width(op);
    }
}

PotSlot PotLayout::slot(std::size_t position) const {
    if (position >= size()) throw InvalidArgument(fmt::format("position {} outside layout of size {}", position, size()));
    const std::size_t width = ops_.width();
    PotSlot s;
    s.series = position / (filter_count_ * width);
    s.filter = (position / width) % filter_count_;
    const std::size_t within = position % width;
    for (std::size_t j = op_offsets_.size(); j-- > 0;) {
        if (op_offsets_[j] <= within) {
            s.op = ops_.ops()[j];
            s.sign = within - op_offsets_[j];
            break;
        }
    }
    return s;
}

std::size_t PotLayout::position(const PotSlot& s) const {
    const auto ops = ops_.ops();
    const auto it = std::find(ops.begin(), ops.end(), s.op);
    if (it == ops.end() || s.series >= series_count_ || s.filter >= filter_count_ || s.sign >= op_width(s.op))
        throw InvalidArgument("slot not part of this layout");
    const std::size_t j = static_cast<std::size_t>(it - ops.begin());
    return (s.series * filter_count_ + s.filter) * ops_.width() + op_offsets_[j] + s.sign;
}

PotVector build_pot(const DescriptorSequence& seq, std::span<const TemporalFilter> filters, const OperatorSet& ops,
                    const PotOptions& options) {
    if (filters.empty()) throw InvalidArgument("build_pot needs at least one temporal filter");
    const std::size_t m = seq.frame_count();
    for (const auto& f : filters) f.check(m);

    PotVector out{seq.video_id(), seq.channel(), {}, PotLayout(seq.dim(), filters.size(), ops)};
    out.values.reserve(out.layout.size());

    for (std::size_t i = 0; i < seq.dim(); ++i) {
        const std::vector<double> f = seq.series(i);
        for (const auto& filter : filters) {
            for (PoolOp op : ops.ops()) {
                switch (op) {
                    case PoolOp::Sum: out.values.push_back(pool_sum(f, filter)); break;
                    case PoolOp::Max: out.values.push_back(pool_max(f, filter)); break;
                    case PoolOp::Grad1: {
                        const auto g = pool_grad1(f, filter);
                        out.values.push_back(g.positive);
                        out.values.push_back(g.negative);
                        break;
                    }
                    case PoolOp::Grad2: {
                        const auto g = pool_grad2(f, filter);
                        out.values.push_back(g.positive);
                        out.values.push_back(g.negative);
                        break;
                    }
                }
            }
        }
    }
    if (options.l1_normalize) l1_normalize(out.values);
    return out;
}

PotVector build_pot(const DescriptorSequence& seq, const TemporalPyramid& pyramid, const OperatorSet& ops,
                    const PotOptions& options) {
    if (pyramid.frame_count != seq.frame_count())
        throw InvalidArgument(fmt::format("{}/{}: pyramid built for {} frames, sequence has {}", seq.video_id(),
                                          seq.channel(), pyramid.frame_count, seq.frame_count()));
    return build_pot(seq, std::span<const TemporalFilter>(pyramid.filters), ops, options);
}

}  // namespace pot
