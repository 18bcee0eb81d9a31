#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pot/descriptor_io.hpp"
#include "pot/error.hpp"
#include "pot/random.hpp"

using namespace pot;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const char* name, const std::string& text) const {
        std::ofstream(path / name, std::ios::binary) << text;
        return path / name;
    }
};

}  // namespace

TEST_CASE("text container round-trips exactly") {
    TempDir dir("pot-test-io-text");
    Rng rng(3);
    Matrix values(120, 33);
    for (double& v : values.data()) v = uniform01(rng) * 1e3 - 500.0;
    const DescriptorFile out{"cnn", {{"tool", "x"}, {"video", "v1"}}, values};
    write_descriptor_file(dir.path / "a.potdesc", out);
    const DescriptorFile in = read_descriptor_file(dir.path / "a.potdesc");
    CHECK(in.channel == "cnn");
    CHECK(in.values == values);
    CHECK(in.field("video") == std::optional<std::string>("v1"));
    CHECK_FALSE(in.field("absent"));
}

TEST_CASE("binary container round-trips at float precision") {
    TempDir dir("pot-test-io-bin");
    Matrix values(5, 4096);
    for (std::size_t i = 0; i < values.data().size(); ++i) values.data()[i] = static_cast<double>(i % 97) * 0.125;
    write_descriptor_file_binary(dir.path / "b.bin", values);
    const DescriptorFile in = read_descriptor_file(dir.path / "b.bin");
    CHECK(in.values == values);

    LoadOptions opt;
    opt.expected_dim = 4096;
    opt.l1_normalize = false;
    opt.video_id = "v";
    opt.channel = "cnn";
    const auto seq = load_precomputed(dir.path / "b.bin", opt);
    CHECK(seq.frame_count() == 5);
    CHECK(seq.dim() == 4096);
    CHECK(seq.channel() == "cnn");
}

TEST_CASE("precomputed rows are L1-normalized by default") {
    TempDir dir("pot-test-io-l1");
    const auto p = dir.write("a.txt", "POT-DESC v1 m=2 n=3 channel=cnn\n1 2 1\n0 0 0\n");
    LoadOptions opt;
    opt.video_id = "v";
    const auto seq = load_precomputed(p, opt);
    CHECK(seq.l1_normalized());
    CHECK(seq.values()(0, 1) == doctest::Approx(0.5));
    CHECK(seq.values()(1, 1) == 0.0);
    opt.l1_normalize = false;
    CHECK(load_precomputed(p, opt).values()(0, 1) == 2.0);
}

TEST_CASE("parse errors name the problem and location") {
    TempDir dir("pot-test-io-err");
    CHECK_THROWS_WITH_AS(read_descriptor_file(dir.write("empty", "")), doctest::Contains("no frames"), ParseError);
    CHECK_THROWS_WITH_AS(read_descriptor_file(dir.write("zero", "POT-DESC v1 m=0 n=3 channel=x\n")),
                         doctest::Contains("no frames"), ParseError);
    CHECK_THROWS_WITH_AS(read_descriptor_file(dir.write("w", "POT-DESC v1 m=2 n=3 channel=x\n1 2 3\n1 2\n")),
                         doctest::Contains("row 2 has 2 values, expected n=3"), ParseError);
    try {
        read_descriptor_file(dir.write("nan", "POT-DESC v1 m=1 n=2 channel=x\n1 nan\n"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(read_descriptor_file(dir.write("junk", "POT-DESC v1 m=1 n=2 channel=x\n1 abc\n")), ParseError);
    CHECK_THROWS_AS(read_descriptor_file(dir.write("few", "POT-DESC v1 m=3 n=1 channel=x\n1\n2\n")), ParseError);
    CHECK_THROWS_AS(read_descriptor_file(dir.write("many", "POT-DESC v1 m=1 n=1 channel=x\n1\n2\n")), ParseError);
    CHECK_THROWS_AS(read_descriptor_file(dir.write("hdr", "POT-DESC v2 m=1 n=1 channel=x\n1\n")), ParseError);
    CHECK_THROWS_AS(read_descriptor_file(dir.write("bad", "hello\n")), ParseError);
    CHECK_THROWS_AS(read_descriptor_file(dir.write("trunc", std::string("POTDESCB\0\0\0\0\0\0\0\0\1\0\0\0\2\0\0\0", 24))),
                    ParseError);
}

TEST_CASE("dimension mismatch is reported") {
    TempDir dir("pot-test-io-dim");
    const auto p = dir.write("a", "POT-DESC v1 m=1 n=3 channel=cnn\n1 2 3\n");
    LoadOptions opt;
    opt.expected_dim = 4096;
    CHECK_THROWS_WITH_AS(load_precomputed(p, opt), doctest::Contains("4096"), InvalidArgument);
}

TEST_CASE("writer rejects unsafe header values") {
    TempDir dir("pot-test-io-w");
    CHECK_THROWS_AS(write_descriptor_file(dir.path / "x", DescriptorFile{"a b", {}, Matrix(1, 1)}), InvalidArgument);
    CHECK_THROWS_AS(write_descriptor_file(dir.path / "x", DescriptorFile{"a", {{"k", "v w"}}, Matrix(1, 1)}),
                    InvalidArgument);
}
