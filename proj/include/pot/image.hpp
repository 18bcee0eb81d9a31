#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace pot {

/// Grayscale image, row-major, intensities nominally in [0, 1].
class Image {
public:
    Image() = default;
    Image(std::size_t height, std::size_t width, double fill = 0.0)
        : height_(height), width_(width), pixels_(height * width, fill) {}

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }

    double& operator()(std::size_t y, std::size_t x) { return pixels_[y * width_ + x]; }
    double operator()(std::size_t y, std::size_t x) const { return pixels_[y * width_ + x]; }

    const std::vector<double>& pixels() const noexcept { return pixels_; }

    bool operator==(const Image&) const = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> pixels_;
};

/// Ordered frames of one video, all the same size.
struct FrameSequence {
    std::string video_id;
    std::vector<Image> frames;
};

/// Reads a binary or ASCII PGM (P5/P2), or a PPM (P6/P3) converted to luma
/// with weights 0.299/0.587/0.114. Values are scaled by 1/maxval.
Image read_pnm(const std::filesystem::path& path);
/// Writes an 8-bit binary PGM, clamping to [0, 1].
void write_pgm(const std::filesystem::path& path, const Image& image);

/// Loads every *.pgm / *.ppm / *.pnm file in `dir`, in lexicographic order of file name.
FrameSequence load_frames(const std::filesystem::path& dir, std::string video_id);

}  // namespace pot
