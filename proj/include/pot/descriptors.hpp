#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pot/core.hpp"
#include "pot/image.hpp"

namespace pot {

/// Dense per-pixel displacement from one frame to the next, in pixels/frame.
struct FlowField {
    Image u;  ///< horizontal component, positive to the right
    Image v;  ///< vertical component, positive downward

    std::size_t height() const noexcept { return u.height(); }
    std::size_t width() const noexcept { return u.width(); }
};

struct FlowOptions {
    std::size_t pyramid_levels = 3;
    std::size_t block_size = 8;
    int search_radius = 4;
};

/// Coarse-to-fine block matching. At each pyramid level every block searches
/// +-search_radius pixels around the displacement predicted by the coarser
/// level and around zero, minimizing the mean absolute difference over the part of the moved
/// block that stays inside the frame (at least half of it must). Ties prefer
/// the smaller displacement, so identical or flat frames give zero flow.
FlowField compute_flow(const Image& prev, const Image& next, const FlowOptions& options = {});

inline constexpr std::size_t kGridCells = 5;
inline constexpr std::size_t kOrientationBins = 8;
inline constexpr std::size_t kHistogramDim = kGridCells * kGridCells * kOrientationBins;

/// Orientation bin of a vector (dx, dy): 8 signed bins of 45 degrees, bin 0
/// centered on the +x direction, counted towards +y.
std::size_t orientation_bin(double dx, double dy) noexcept;

/// Cell index (0..cells-1) of each coordinate along an axis of `extent`
/// pixels, using floor boundaries floor(c*extent/cells).
std::vector<std::size_t> grid_cells(std::size_t extent, std::size_t cells = kGridCells);

/// 5x5x8 histogram of flow orientation weighted by flow magnitude, L1-normalized.
std::vector<double> hof_descriptor(const FlowField& flow);
/// 5x5x8 histogram of central-difference gradient orientation weighted by magnitude, L1-normalized.
std::vector<double> hog_descriptor(const Image& frame);
/// Gradient histograms of the u and v flow components, each 200-D half
/// L1-normalized on its own.
std::vector<double> mbh_descriptor(const FlowField& flow);

enum class Channel { Hof, Hog, Mbh };

std::string_view channel_name(Channel c) noexcept;
/// Returns true and sets `out` for "hof", "hog" or "mbh".
bool parse_channel(std::string_view name, Channel& out) noexcept;
std::size_t channel_dim(Channel c) noexcept;

/// HOG gives one descriptor per frame; HOF and MBH give one per consecutive
/// frame pair (m-1 rows).
DescriptorSequence extract_channel(const FrameSequence& video, Channel channel, unsigned jobs = 1);

}  // namespace pot
