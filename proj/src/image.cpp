#include "pot/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "pot/error.hpp"

namespace pot {
namespace {

class PnmReader {
public:
    PnmReader(std::string source, std::string bytes) : source_(std::move(source)), bytes_(std::move(bytes)) {}

    std::size_t next_uint() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_])))
            throw ParseError(source_, 0, 0, fmt::format("expected an integer at byte {}", pos_));
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > 1u << 30) throw ParseError(source_, 0, 0, "header value too large");
            ++pos_;
        }
        return value;
    }

    std::string magic() {
        if (bytes_.size() < 2) throw ParseError(source_, 0, 0, "file too short for a PNM header");
        pos_ = 2;
        return bytes_.substr(0, 2);
    }

    // Exactly one whitespace byte separates the header from binary data.
    void end_header() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw ParseError(source_, 0, 0, "missing whitespace after header");
        ++pos_;
    }

    std::size_t read_binary(std::size_t bytes_per_sample) {
        if (pos_ + bytes_per_sample > bytes_.size()) throw ParseError(source_, 0, 0, "truncated pixel data");
        std::size_t v = static_cast<unsigned char>(bytes_[pos_++]);
        if (bytes_per_sample == 2) v = (v << 8) | static_cast<unsigned char>(bytes_[pos_++]);
        return v;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string source_;
    std::string bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Image read_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open image '{}'", path.string()));
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    PnmReader reader(path.string(), std::move(bytes));
    const std::string magic = reader.magic();
    const bool gray = magic == "P5" || magic == "P2";
    const bool color = magic == "P6" || magic == "P3";
    const bool ascii = magic == "P2" || magic == "P3";
    if (!gray && !color) throw ParseError(path.string(), 0, 0, fmt::format("unsupported image type '{}'", magic));

    const std::size_t width = reader.next_uint();
    const std::size_t height = reader.next_uint();
    const std::size_t maxval = reader.next_uint();
    if (width == 0 || height == 0) throw ParseError(path.string(), 0, 0, "image has zero size");
    if (maxval == 0 || maxval > 65535) throw ParseError(path.string(), 0, 0, fmt::format("bad maxval {}", maxval));
    if (!ascii) reader.end_header();

    const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
    const double scale = 1.0 / static_cast<double>(maxval);
    auto sample = [&]() -> double {
        const std::size_t v = ascii ? reader.next_uint() : reader.read_binary(bytes_per_sample);
        if (v > maxval) throw ParseError(path.string(), 0, 0, "sample exceeds maxval");
        return static_cast<double>(v) * scale;
    };

    Image img(height, width);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            if (gray) {
                img(y, x) = sample();
            } else {
                const double r = sample(), g = sample(), b = sample();
                img(y, x) = 0.299 * r + 0.587 * g + 0.114 * b;
            }
        }
    }
    return img;
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write image '{}'", path.string()));
    out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
    for (double v : image.pixels()) {
        const double c = std::clamp(v, 0.0, 1.0);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0))));
    }
}

FrameSequence load_frames(const std::filesystem::path& dir, std::string video_id) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw Error(fmt::format("{}: frame directory '{}' does not exist", video_id, dir.string()));

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    if (files.empty()) throw Error(fmt::format("{}: no PGM/PPM frames in '{}'", video_id, dir.string()));

    FrameSequence seq{std::move(video_id), {}};
    seq.frames.reserve(files.size());
    for (const auto& f : files) {
        seq.frames.push_back(read_pnm(f));
        const auto& first = seq.frames.front();
        const auto& last = seq.frames.back();
        if (last.height() != first.height() || last.width() != first.width())
            throw Error(fmt::format("{}: frame '{}' is {}x{}, expected {}x{}", seq.video_id, f.string(), last.width(),
                                    last.height(), first.width(), first.height()));
    }
    return seq;
}

}  // namespace pot
