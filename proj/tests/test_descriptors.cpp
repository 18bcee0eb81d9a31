#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "pot/descriptors.hpp"
#include "pot/error.hpp"
#include "pot/random.hpp"

using namespace pot;
namespace fs = std::filesystem;

namespace {

Image noise_texture(std::size_t h, std::size_t w, std::uint64_t seed) {
    Rng rng(seed);
    Image img(h, w);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) img(y, x) = uniform01(rng);
    return img;
}

// Blocky structure plus pixel noise, so the pattern survives downsampling.
Image blob_texture(std::size_t h, std::size_t w, std::uint64_t seed) {
    const Image coarse = noise_texture(h / 4 + 1, w / 4 + 1, seed);
    const Image fine = noise_texture(h, w, seed + 1);
    Image img(h, w);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) img(y, x) = 0.5 * coarse(y / 4, x / 4) + 0.5 * fine(y, x);
    return img;
}

// next(y, x) = prev(y - dy, x - dx) with replicated borders.
Image shift(const Image& src, int dx, int dy) {
    Image out(src.height(), src.width());
    const long h = static_cast<long>(src.height()), w = static_cast<long>(src.width());
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x)
            out(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) =
                src(static_cast<std::size_t>(std::clamp(y - dy, 0L, h - 1)),
                    static_cast<std::size_t>(std::clamp(x - dx, 0L, w - 1)));
    return out;
}

double l1(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0, [](double a, double b) { return a + std::abs(b); });
}

bool all_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

TEST_CASE("identical frames give zero flow") {
    const Image img = noise_texture(40, 48, 1);
    const FlowField flow = compute_flow(img, img);
    CHECK(std::all_of(flow.u.pixels().begin(), flow.u.pixels().end(), [](double v) { return v == 0.0; }));
    CHECK(std::all_of(flow.v.pixels().begin(), flow.v.pixels().end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("flat frames give zero flow") {
    const FlowField flow = compute_flow(Image(32, 32, 0.4), Image(32, 32, 0.4));
    CHECK(all_zero(flow.u.pixels()));
}

TEST_CASE("small shifts are found even on white noise") {
    const Image img = noise_texture(64, 80, 2);
    for (const auto [dx, dy] : {std::pair{3, 0}, std::pair{0, 2}}) {
        const FlowField flow = compute_flow(img, shift(img, dx, dy));
        for (std::size_t y = 8; y < 56; ++y)
            for (std::size_t x = 8; x < 72; ++x) {
                REQUIRE(flow.u(y, x) == dx);
                REQUIRE(flow.v(y, x) == dy);
            }
    }
}

TEST_CASE("coarse-to-fine matching recovers translations beyond the search radius") {
    const Image img = blob_texture(64, 80, 2);
    struct Case {
        int dx, dy;
    };
    for (const Case c : {Case{3, 0}, Case{0, 2}, Case{-2, 1}, Case{6, -5}}) {
        CAPTURE(c.dx);
        CAPTURE(c.dy);
        const FlowField flow = compute_flow(img, shift(img, c.dx, c.dy));
        for (std::size_t y = 16; y < 48; ++y)
            for (std::size_t x = 16; x < 64; ++x) {
                CAPTURE(y);
                CAPTURE(x);
                REQUIRE(std::abs(flow.u(y, x) - c.dx) <= 0.5);
                REQUIRE(std::abs(flow.v(y, x) - c.dy) <= 0.5);
            }
    }
}

TEST_CASE("flow rejects mismatched frames") {
    CHECK_THROWS_AS(compute_flow(Image(10, 10), Image(10, 11)), InvalidArgument);
}

TEST_CASE("orientation bins are 45 degrees centered on the axes") {
    CHECK(orientation_bin(1, 0) == 0);
    CHECK(orientation_bin(1, 0.3) == 0);
    CHECK(orientation_bin(1, -0.3) == 0);
    CHECK(orientation_bin(1, 1) == 1);
    CHECK(orientation_bin(0, 1) == 2);
    CHECK(orientation_bin(-1, 0) == 4);
    CHECK(orientation_bin(0, -1) == 6);
    CHECK(orientation_bin(1, -1) == 7);
}

TEST_CASE("grid cells use floor boundaries") {
    CHECK(grid_cells(10) == std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4});
    CHECK(grid_cells(7) == std::vector<std::size_t>{0, 1, 2, 2, 3, 4, 4});
    for (std::size_t extent = 5; extent < 60; ++extent) {
        const auto cells = grid_cells(extent);
        CHECK(std::is_sorted(cells.begin(), cells.end()));
        CHECK(cells.front() == 0);
        CHECK(cells.back() == 4);
    }
}

TEST_CASE("uniform rightward flow fills bin 0 of every cell") {
    const FlowField flow{Image(50, 50, 1.0), Image(50, 50, 0.0)};
    const auto hof = hof_descriptor(flow);
    REQUIRE(hof.size() == 200);
    for (std::size_t i = 0; i < 200; ++i) CHECK(hof[i] == doctest::Approx(i % 8 == 0 ? 1.0 / 25.0 : 0.0));
}

TEST_CASE("uniform downward flow fills the 90 degree bin") {
    const FlowField flow{Image(37, 41, 0.0), Image(37, 41, 2.0)};
    const auto hof = hof_descriptor(flow);
    double in_bin = 0.0;
    for (std::size_t c = 0; c < 25; ++c) in_bin += hof[c * 8 + 2];
    CHECK(in_bin == doctest::Approx(1.0));
}

TEST_CASE("zero flow gives a zero HOF") {
    CHECK(all_zero(hof_descriptor(FlowField{Image(20, 20), Image(20, 20)})));
}

TEST_CASE("HOG of a constant image is zero") { CHECK(all_zero(hog_descriptor(Image(30, 30, 0.7)))); }

TEST_CASE("vertical step edge votes into horizontal-gradient bins") {
    Image img(40, 40, 0.0);
    for (std::size_t y = 0; y < 40; ++y)
        for (std::size_t x = 20; x < 40; ++x) img(y, x) = 1.0;
    const auto hog = hog_descriptor(img);
    double horizontal = 0.0;
    for (std::size_t c = 0; c < 25; ++c) horizontal += hog[c * 8 + 0] + hog[c * 8 + 4];
    CHECK(horizontal == doctest::Approx(1.0));
}

TEST_CASE("HOG ignores brightness scaling") {
    const Image img = noise_texture(33, 29, 3);
    Image dim = img;
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x) dim(y, x) = 0.5 * img(y, x);
    const auto a = hog_descriptor(img), b = hog_descriptor(dim);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("MBH suppresses translation and sees shear") {
    CHECK(all_zero(mbh_descriptor(FlowField{Image(25, 25, 3.0), Image(25, 25, -1.0)})));

    FlowField ramp{Image(30, 30), Image(30, 30, 1.0)};
    for (std::size_t y = 0; y < 30; ++y)
        for (std::size_t x = 0; x < 30; ++x) ramp.u(y, x) = 0.1 * static_cast<double>(x);
    const auto mbh = mbh_descriptor(ramp);
    REQUIRE(mbh.size() == 400);
    double bin0 = 0.0;
    for (std::size_t c = 0; c < 25; ++c) bin0 += mbh[c * 8];
    CHECK(bin0 == doctest::Approx(1.0));
    CHECK(all_zero(std::vector<double>(mbh.begin() + 200, mbh.end())));
}

TEST_CASE("MBH halves are normalized independently and ignore flow scale") {
    FlowField flow{noise_texture(30, 30, 4), noise_texture(30, 30, 5)};
    const auto a = mbh_descriptor(flow);
    CHECK(l1(std::span(a).first(200)) == doctest::Approx(1.0));
    CHECK(l1(std::span(a).last(200)) == doctest::Approx(1.0));
    for (auto* img : {&flow.u, &flow.v})
        for (std::size_t y = 0; y < 30; ++y)
            for (std::size_t x = 0; x < 30; ++x) (*img)(y, x) *= 3.0;
    const auto b = mbh_descriptor(flow);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("frames smaller than the grid are rejected") {
    CHECK_THROWS_AS(hog_descriptor(Image(4, 10)), InvalidArgument);
}

TEST_CASE("extract_channel row counts and normalization") {
    const Image base = noise_texture(32, 32, 6);
    FrameSequence video{"clip", {}};
    for (int t = 0; t < 10; ++t) video.frames.push_back(shift(base, t % 3, t % 2));

    const auto hog = extract_channel(video, Channel::Hog);
    CHECK(hog.frame_count() == 10);
    CHECK(hog.dim() == 200);
    const auto hof = extract_channel(video, Channel::Hof, 2);
    CHECK(hof.frame_count() == 9);
    CHECK(hof.dim() == 200);
    const auto mbh = extract_channel(video, Channel::Mbh);
    CHECK(mbh.frame_count() == 9);
    CHECK(mbh.dim() == 400);
    CHECK(mbh.l1_block() == 200);

    // Same output regardless of worker count.
    CHECK(extract_channel(video, Channel::Hof, 1).values() == hof.values());

    FrameSequence single{"one", {base}};
    CHECK_THROWS_WITH_AS(extract_channel(single, Channel::Mbh), doctest::Contains("needs >=2 frames"), Error);
    CHECK(extract_channel(single, Channel::Hog).frame_count() == 1);
}

TEST_CASE("channel names") {
    Channel c{};
    CHECK(parse_channel("mbh", c));
    CHECK(c == Channel::Mbh);
    CHECK(channel_name(Channel::Hof) == "hof");
    CHECK(channel_dim(Channel::Mbh) == 400);
    CHECK_FALSE(parse_channel("cnn", c));
}

TEST_CASE("PGM round trip and frame loading order") {
    const fs::path dir = fs::temp_directory_path() / "pot-test-frames";
    fs::remove_all(dir);
    fs::create_directories(dir);
    Image img(6, 7);
    for (std::size_t y = 0; y < 6; ++y)
        for (std::size_t x = 0; x < 7; ++x) img(y, x) = static_cast<double>(y * 7 + x) / 255.0;
    write_pgm(dir / "b.pgm", img);
    write_pgm(dir / "a.pgm", Image(6, 7, 1.0));
    const Image back = read_pnm(dir / "b.pgm");
    for (std::size_t y = 0; y < 6; ++y)
        for (std::size_t x = 0; x < 7; ++x) CHECK(back(y, x) == doctest::Approx(img(y, x)));

    const auto seq = load_frames(dir, "vid");
    REQUIRE(seq.frames.size() == 2);
    CHECK(seq.frames[0](0, 0) == 1.0);

    write_pgm(dir / "c.pgm", Image(5, 7));
    CHECK_THROWS_WITH_AS(load_frames(dir, "vid"), doctest::Contains("vid"), Error);
    CHECK_THROWS_WITH_AS(load_frames(dir / "missing", "lost"), doctest::Contains("lost"), Error);
    fs::remove_all(dir);
}

TEST_CASE("ASCII and colour PNM") {
    const fs::path dir = fs::temp_directory_path() / "pot-test-pnm";
    fs::create_directories(dir);
    {
        std::ofstream(dir / "g.pgm") << "P2\n# comment\n2 1\n10\n0 10\n";
        std::ofstream(dir / "c.ppm") << "P3\n1 1\n255\n255 0 0\n";
    }
    const Image g = read_pnm(dir / "g.pgm");
    CHECK(g(0, 0) == 0.0);
    CHECK(g(0, 1) == 1.0);
    CHECK(read_pnm(dir / "c.ppm")(0, 0) == doctest::Approx(0.299));
    fs::remove_all(dir);
}
