#include "pot/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <fmt/format.h>

#include "pot/error.hpp"
#include "pot/parallel.hpp"

namespace pot {
namespace {

Image downsample(const Image& src) {
    Image dst(src.height() / 2, src.width() / 2);
    for (std::size_t y = 0; y < dst.height(); ++y)
        for (std::size_t x = 0; x < dst.width(); ++x)
            dst(y, x) = 0.25 * (src(2 * y, 2 * x) + src(2 * y, 2 * x + 1) + src(2 * y + 1, 2 * x) +
                                src(2 * y + 1, 2 * x + 1));
    return dst;
}

struct Displacement {
    int du = 0;
    int dv = 0;
};

struct BlockGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Displacement> disp;

    Displacement& at(std::size_t r, std::size_t c) { return disp[r * cols + c]; }
    const Displacement& at(std::size_t r, std::size_t c) const { return disp[r * cols + c]; }
};

// Mean absolute difference between the block of `prev` at [y0,y1)x[x0,x1)
// and the same block of `next` moved by d, taken over the pixels whose moved
// position stays inside the frame. Returns infinity when fewer than half of
// the block's pixels overlap. Stops early once the mean must exceed `bound`.
double block_cost(const Image& prev, const Image& next, std::size_t y0, std::size_t y1, std::size_t x0,
                  std::size_t x1, Displacement d, double bound) {
    const long h = static_cast<long>(next.height()), w = static_cast<long>(next.width());
    const long ya = std::max<long>(static_cast<long>(y0), -d.dv), yb = std::min<long>(static_cast<long>(y1), h - d.dv);
    const long xa = std::max<long>(static_cast<long>(x0), -d.du), xb = std::min<long>(static_cast<long>(x1), w - d.du);
    if (ya >= yb || xa >= xb) return HUGE_VAL;
    const auto count = static_cast<double>((yb - ya) * (xb - xa));
    if (2 * count < static_cast<double>((y1 - y0) * (x1 - x0))) return HUGE_VAL;
    const double limit = bound * count;
    double sad = 0.0;
    for (long y = ya; y < yb; ++y) {
        for (long x = xa; x < xb; ++x)
            sad += std::abs(prev(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) -
                            next(static_cast<std::size_t>(y + d.dv), static_cast<std::size_t>(x + d.du)));
        if (sad > limit) return HUGE_VAL;
    }
    return sad / count;
}

BlockGrid match_level(const Image& prev, const Image& next, const BlockGrid* coarse, const FlowOptions& opt) {
    const std::size_t bs = opt.block_size;
    const std::size_t h = prev.height(), w = prev.width();
    BlockGrid grid;
    grid.rows = (h + bs - 1) / bs;
    grid.cols = (w + bs - 1) / bs;
    grid.disp.resize(grid.rows * grid.cols);

    for (std::size_t by = 0; by < grid.rows; ++by) {
        for (std::size_t bx = 0; bx < grid.cols; ++bx) {
            const std::size_t y0 = by * bs, y1 = std::min(h, y0 + bs);
            const std::size_t x0 = bx * bs, x1 = std::min(w, x0 + bs);

            Displacement pred;
            if (coarse != nullptr) {
                const std::size_t cy = std::min(y0 + bs / 2, h - 1) / 2 / bs;
                const std::size_t cx = std::min(x0 + bs / 2, w - 1) / 2 / bs;
                const Displacement c = coarse->at(std::min(cy, coarse->rows - 1), std::min(cx, coarse->cols - 1));
                pred = {2 * c.du, 2 * c.dv};
            }

            auto key = [](double sad, Displacement d) {
                return std::make_tuple(sad, d.du * d.du + d.dv * d.dv, d.dv, d.du);
            };

            Displacement best{};
            double best_sad = block_cost(prev, next, y0, y1, x0, x1, best, HUGE_VAL);
            // Search around the coarse prediction and, when the coarse level
            // got lost (e.g. texture too fine to survive downsampling), around zero.
            auto search = [&](Displacement center) {
                for (int ddv = -opt.search_radius; ddv <= opt.search_radius; ++ddv) {
                    for (int ddu = -opt.search_radius; ddu <= opt.search_radius; ++ddu) {
                        const Displacement d{center.du + ddu, center.dv + ddv};
                        if (d.du == 0 && d.dv == 0) continue;
                        const double sad = block_cost(prev, next, y0, y1, x0, x1, d, best_sad);
                        if (sad == HUGE_VAL) continue;
                        if (key(sad, d) < key(best_sad, best)) {
                            best = d;
                            best_sad = sad;
                        }
                    }
                }
            };
            search(pred);
            if (pred.du != 0 || pred.dv != 0) search(Displacement{});
            grid.at(by, bx) = best;
        }
    }
    return grid;
}

// Adds magnitude-weighted orientation votes for a vector field into a 5x5x8
// histogram laid out cell-row-major, then bin.
template <typename VectorAt>
void accumulate_histogram(std::size_t h, std::size_t w, VectorAt&& vector_at, std::span<double> hist) {
    const auto row_cell = grid_cells(h);
    const auto col_cell = grid_cells(w);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto [dx, dy] = vector_at(y, x);
            const double mag = std::hypot(dx, dy);
            if (mag == 0.0) continue;
            const std::size_t cell = row_cell[y] * kGridCells + col_cell[x];
            hist[cell * kOrientationBins + orientation_bin(dx, dy)] += mag;
        }
    }
}

void require_grid(std::size_t h, std::size_t w, const char* what) {
    if (h < kGridCells || w < kGridCells)
        throw InvalidArgument(fmt::format("{} of {}x{} is smaller than the {}x{} spatial grid", what, w, h, kGridCells,
                                          kGridCells));
}

// Central differences with replicated borders.
void gradient_histogram(const Image& img, std::span<double> hist) {
    const std::size_t h = img.height(), w = img.width();
    accumulate_histogram(
        h, w,
        [&](std::size_t y, std::size_t x) {
            const std::size_t xl = x == 0 ? 0 : x - 1, xr = std::min(x + 1, w - 1);
            const std::size_t yu = y == 0 ? 0 : y - 1, yd = std::min(y + 1, h - 1);
            return std::pair{0.5 * (img(y, xr) - img(y, xl)), 0.5 * (img(yd, x) - img(yu, x))};
        },
        hist);
}

void check_flow(const FlowField& flow) {
    if (flow.u.height() != flow.v.height() || flow.u.width() != flow.v.width())
        throw InvalidArgument("flow components differ in size");
    require_grid(flow.height(), flow.width(), "flow field");
}

}  // namespace

FlowField compute_flow(const Image& prev, const Image& next, const FlowOptions& options) {
    if (prev.height() != next.height() || prev.width() != next.width())
        throw InvalidArgument(fmt::format("frame size mismatch: {}x{} vs {}x{}", prev.width(), prev.height(),
                                          next.width(), next.height()));
    if (prev.height() == 0 || prev.width() == 0) throw InvalidArgument("empty frame");
    if (options.block_size == 0 || options.pyramid_levels == 0 || options.search_radius < 0)
        throw InvalidArgument("invalid flow options");

    std::vector<Image> prev_pyr{prev}, next_pyr{next};
    while (prev_pyr.size() < options.pyramid_levels && prev_pyr.back().height() / 2 >= options.block_size &&
           prev_pyr.back().width() / 2 >= options.block_size) {
        prev_pyr.push_back(downsample(prev_pyr.back()));
        next_pyr.push_back(downsample(next_pyr.back()));
    }

    BlockGrid grid;
    for (std::size_t level = prev_pyr.size(); level-- > 0;) {
        const bool coarsest = level + 1 == prev_pyr.size();
        grid = match_level(prev_pyr[level], next_pyr[level], coarsest ? nullptr : &grid, options);
    }

    FlowField flow{Image(prev.height(), prev.width()), Image(prev.height(), prev.width())};
    for (std::size_t y = 0; y < prev.height(); ++y) {
        for (std::size_t x = 0; x < prev.width(); ++x) {
            const Displacement d = grid.at(y / options.block_size, x / options.block_size);
            flow.u(y, x) = d.du;
            flow.v(y, x) = d.dv;
        }
    }
    return flow;
}

std::size_t orientation_bin(double dx, double dy) noexcept {
    constexpr double kBinWidth = 2.0 * std::numbers::pi / static_cast<double>(kOrientationBins);
    double angle = std::atan2(dy, dx);
    if (angle < 0.0) angle += 2.0 * std::numbers::pi;
    const auto bin = static_cast<std::size_t>(std::floor(angle / kBinWidth + 0.5));
    return bin % kOrientationBins;
}

std::vector<std::size_t> grid_cells(std::size_t extent, std::size_t cells) {
    std::vector<std::size_t> out(extent);
    for (std::size_t c = 0; c < cells; ++c)
        for (std::size_t p = c * extent / cells; p < (c + 1) * extent / cells; ++p) out[p] = c;
    return out;
}

std::vector<double> hof_descriptor(const FlowField& flow) {
    check_flow(flow);
    std::vector<double> hist(kHistogramDim, 0.0);
    accumulate_histogram(
        flow.height(), flow.width(), [&](std::size_t y, std::size_t x) { return std::pair{flow.u(y, x), flow.v(y, x)}; },
        hist);
    l1_normalize(hist);
    return hist;
}

std::vector<double> hog_descriptor(const Image& frame) {
    require_grid(frame.height(), frame.width(), "frame");
    std::vector<double> hist(kHistogramDim, 0.0);
    gradient_histogram(frame, hist);
    l1_normalize(hist);
    return hist;
}

std::vector<double> mbh_descriptor(const FlowField& flow) {
    check_flow(flow);
    std::vector<double> hist(2 * kHistogramDim, 0.0);
    const std::span<double> u_half(hist.data(), kHistogramDim);
    const std::span<double> v_half(hist.data() + kHistogramDim, kHistogramDim);
    gradient_histogram(flow.u, u_half);
    gradient_histogram(flow.v, v_half);
    l1_normalize(u_half);
    l1_normalize(v_half);
    return hist;
}

std::string_view channel_name(Channel c) noexcept {
    switch (c) {
        case Channel::Hof: return "hof";
        case Channel::Hog: return "hog";
        case Channel::Mbh: return "mbh";
    }
    return "?";
}

bool parse_channel(std::string_view name, Channel& out) noexcept {
    if (name == "hof") out = Channel::Hof;
    else if (name == "hog") out = Channel::Hog;
    else if (name == "mbh") out = Channel::Mbh;
    else return false;
    return true;
}

std::size_t channel_dim(Channel c) noexcept { return c == Channel::Mbh ? 2 * kHistogramDim : kHistogramDim; }

DescriptorSequence extract_channel(const FrameSequence& video, Channel channel, unsigned jobs) {
    const std::size_t frames = video.frames.size();
    if (frames == 0) throw InvalidArgument(fmt::format("{}: video has no frames", video.video_id));
    if (channel != Channel::Hog && frames < 2)
        throw InvalidArgument(fmt::format("{}: {} needs >=2 frames, video has {}", video.video_id,
                                          channel_name(channel), frames));

    const std::size_t rows = channel == Channel::Hog ? frames : frames - 1;
    const std::size_t dim = channel_dim(channel);
    Matrix values(rows, dim);
    parallel_for(rows, jobs, [&](std::size_t t) {
        std::vector<double> d;
        switch (channel) {
            case Channel::Hog: d = hog_descriptor(video.frames[t]); break;
            case Channel::Hof: d = hof_descriptor(compute_flow(video.frames[t], video.frames[t + 1])); break;
            case Channel::Mbh: d = mbh_descriptor(compute_flow(video.frames[t], video.frames[t + 1])); break;
        }
        std::copy(d.begin(), d.end(), values.row(t).begin());
    });
    return DescriptorSequence(video.video_id, std::string(channel_name(channel)), std::move(values), kHistogramDim);
}

}  // namespace pot
