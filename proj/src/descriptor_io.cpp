#include "pot/descriptor_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "pot/error.hpp"

namespace pot {
namespace {

constexpr std::string_view kTextMagic = "POT-DESC";
constexpr std::string_view kTextVersion = "v1";
constexpr std::array<char, 16> kBinaryMagic{'P', 'O', 'T', 'D', 'E', 'S', 'C', 'B'};

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::size_t parse_size(std::string_view text, const std::string& source, std::size_t col, std::string_view what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(source, 1, col, fmt::format("invalid {} '{}'", what, text));
    return value;
}

DescriptorFile parse_binary(const std::string& bytes, const std::string& source) {
    if (bytes.size() < 24) throw ParseError(source, 0, 0, "truncated binary header");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t m = read_u32_le(p + 16);
    const std::size_t n = read_u32_le(p + 20);
    if (m == 0) throw ParseError(source, 0, 0, "no frames");
    if (n == 0) throw ParseError(source, 0, 0, "zero-dimensional descriptor");
    if (bytes.size() != 24 + 4 * m * n)
        throw ParseError(source, 0, 0, fmt::format("expected {} bytes of data for m={} n={}, found {}", 4 * m * n, m, n,
                                                   bytes.size() - 24));
    DescriptorFile file;
    file.values = Matrix(m, n);
    auto data = file.values.data();
    for (std::size_t i = 0; i < m * n; ++i) {
        const std::uint32_t bits = read_u32_le(p + 24 + 4 * i);
        const float f = std::bit_cast<float>(bits);
        if (!std::isfinite(f))
            throw ParseError(source, 0, 0, fmt::format("non-finite value at row {}, column {}", i / n + 1, i % n + 1));
        data[i] = static_cast<double>(f);
    }
    return file;
}

DescriptorFile parse_text(const std::string& bytes, const std::string& source) {
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source, 0, 0, "no frames");

    std::vector<std::string_view> tokens;
    {
        std::string_view rest(line);
        std::size_t col = 0;
        while (col < rest.size()) {
            while (col < rest.size() && (rest[col] == ' ' || rest[col] == '\t' || rest[col] == '\r')) ++col;
            const std::size_t start = col;
            while (col < rest.size() && rest[col] != ' ' && rest[col] != '\t' && rest[col] != '\r') ++col;
            if (col > start) tokens.push_back(rest.substr(start, col - start));
        }
    }
    if (tokens.size() < 5 || tokens[0] != kTextMagic)
        throw ParseError(source, 1, 1, "expected header 'POT-DESC v1 m=<int> n=<int> channel=<name>'");
    if (tokens[1] != kTextVersion) throw ParseError(source, 1, 0, fmt::format("unsupported version '{}'", tokens[1]));

    auto column_of = [&](std::string_view tok) { return static_cast<std::size_t>(tok.data() - line.data()) + 1; };
    auto expect_key = [&](std::string_view tok, std::string_view key) {
        if (tok.substr(0, key.size() + 1) != fmt::format("{}=", key))
            throw ParseError(source, 1, column_of(tok), fmt::format("expected '{}=' in header", key));
        return tok.substr(key.size() + 1);
    };

    DescriptorFile file;
    const std::size_t m = parse_size(expect_key(tokens[2], "m"), source, column_of(tokens[2]), "frame count");
    const std::size_t n = parse_size(expect_key(tokens[3], "n"), source, column_of(tokens[3]), "dimension");
    file.channel = std::string(expect_key(tokens[4], "channel"));
    for (std::size_t i = 5; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ParseError(source, 1, column_of(tokens[i]), fmt::format("malformed header field '{}'", tokens[i]));
        file.fields.emplace_back(std::string(tokens[i].substr(0, eq)), std::string(tokens[i].substr(eq + 1)));
    }
    if (m == 0) throw ParseError(source, 1, column_of(tokens[2]), "no frames");
    if (n == 0) throw ParseError(source, 1, column_of(tokens[3]), "zero-dimensional descriptor");

    std::vector<double> data;
    data.reserve(m * n);
    std::size_t row = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (row == m) throw ParseError(source, line_no, 1, fmt::format("more than m={} rows", m));
        const char* p = line.data();
        const char* end = line.data() + line.size();
        std::size_t count = 0;
        while (true) {
            while (p < end && (*p == ' ' || *p == '\t')) ++p;
            if (p == end) break;
            double v = 0.0;
            const auto [next, ec] = std::from_chars(p, end, v);
            const std::size_t col = static_cast<std::size_t>(p - line.data()) + 1;
            if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t'))
                throw ParseError(source, line_no, col, fmt::format("row {}: not a number", row + 1));
            if (!std::isfinite(v))
                throw ParseError(source, line_no, col, fmt::format("row {}: non-finite value", row + 1));
            data.push_back(v);
            ++count;
            p = next;
        }
        if (count != n)
            throw ParseError(source, line_no, 0, fmt::format("row {} has {} values, expected n={}", row + 1, count, n));
        ++row;
    }
    if (row != m) throw ParseError(source, line_no, 0, fmt::format("found {} rows, header declares m={}", row, m));
    file.values = Matrix(m, n, std::move(data));
    return file;
}

}  // namespace

std::optional<std::string> DescriptorFile::field(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return v;
    return std::nullopt;
}

DescriptorFile read_descriptor_file(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    if (bytes.empty()) throw ParseError(path.string(), 0, 0, "no frames");
    if (bytes.size() >= kBinaryMagic.size() && std::memcmp(bytes.data(), kBinaryMagic.data(), kBinaryMagic.size()) == 0)
        return parse_binary(bytes, path.string());
    return parse_text(bytes, path.string());
}

void write_descriptor_file(const std::filesystem::path& path, const DescriptorFile& file) {
    if (file.channel.empty() || file.channel.find_first_of(" \t\n=") != std::string::npos)
        throw InvalidArgument(fmt::format("invalid channel name '{}'", file.channel));
    std::string text = fmt::format("{} {} m={} n={} channel={}", kTextMagic, kTextVersion, file.values.rows(),
                                   file.values.cols(), file.channel);
    for (const auto& [k, v] : file.fields) {
        if (k.empty() || (k + v).find_first_of(" \t\n") != std::string::npos || k.find('=') != std::string::npos)
            throw InvalidArgument(fmt::format("header field '{}={}' must not contain whitespace", k, v));
        text += fmt::format(" {}={}", k, v);
    }
    text += '\n';
    for (std::size_t r = 0; r < file.values.rows(); ++r) {
        const auto row = file.values.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) text += ' ';
            text += fmt::format("{}", row[c]);
        }
        text += '\n';
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw Error(fmt::format("write failed for '{}'", path.string()));
}

void write_descriptor_file_binary(const std::filesystem::path& path, const Matrix& values) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out.write(kBinaryMagic.data(), kBinaryMagic.size());
    write_u32_le(out, static_cast<std::uint32_t>(values.rows()));
    write_u32_le(out, static_cast<std::uint32_t>(values.cols()));
    for (double v : values.data()) write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    if (!out) throw Error(fmt::format("write failed for '{}'", path.string()));
}

DescriptorSequence load_precomputed(const std::filesystem::path& path, const LoadOptions& options) {
    DescriptorFile file = read_descriptor_file(path);
    if (options.expected_dim && file.values.cols() != *options.expected_dim)
        throw InvalidArgument(fmt::format("{}: dimension {} does not match expected {}", path.string(),
                                          file.values.cols(), *options.expected_dim));
    if (options.l1_normalize)
        for (std::size_t r = 0; r < file.values.rows(); ++r) l1_normalize(file.values.row(r));
    std::string channel = file.channel.empty() ? options.channel : file.channel;
    const std::size_t block = options.l1_normalize ? file.values.cols() : 0;
    return DescriptorSequence(options.video_id, std::move(channel), std::move(file.values), block);
}

}  // namespace pot
