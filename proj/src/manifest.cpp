#include "pot/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "pot/descriptors.hpp"
#include "pot/error.hpp"

namespace pot {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t tab = std::min(line.find('\t', pos), line.size());
        out.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

bool is_computed_name(const std::string& name) {
    Channel c;
    return parse_channel(name, c);
}

}  // namespace

std::vector<std::string> ExperimentManifest::class_names() const {
    std::set<std::string> names;
    for (const auto& v : videos) names.insert(v.label);
    return {names.begin(), names.end()};
}

std::vector<int> ExperimentManifest::labels() const {
    const auto names = class_names();
    std::vector<int> out;
    out.reserve(videos.size());
    for (const auto& v : videos)
        out.push_back(static_cast<int>(std::lower_bound(names.begin(), names.end(), v.label) - names.begin()));
    return out;
}

ChannelDecl ExperimentManifest::resolve_channel(const std::string& name) const {
    ChannelDecl decl;
    const auto it = std::find_if(channels.begin(), channels.end(), [&](const ChannelDecl& c) { return c.name == name; });
    if (it != channels.end()) {
        decl = *it;
    } else {
        decl.name = name;
        decl.source = is_computed_name(name) ? ChannelSource::Computed : ChannelSource::Precomputed;
    }
    const std::string key = decl.source == ChannelSource::Computed ? "frames" : name;
    for (const auto& v : videos)
        if (!v.sources.contains(key))
            throw Error(fmt::format("{}: video '{}' has no '{}' entry for channel '{}'", path.string(), v.id, key, name));
    return decl;
}

ExperimentManifest parse_manifest(const std::string& text, const std::filesystem::path& source) {
    ExperimentManifest m;
    m.path = source;
    const std::filesystem::path base = source.parent_path();
    const std::string src = source.string();

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.empty()) continue;

        if (fields[0] == "@dataset") {
            if (fields.size() != 2) throw ParseError(src, line_no, 0, "expected '@dataset<TAB>name'");
            m.dataset = fields[1];
        } else if (fields[0] == "@channel") {
            if (fields.size() < 3 || fields.size() > 4)
                throw ParseError(src, line_no, 0, "expected '@channel<TAB>name<TAB>computed|precomputed[<TAB>dim]'");
            ChannelDecl decl;
            decl.name = fields[1];
            if (fields[2] == "computed") {
                if (!is_computed_name(decl.name))
                    throw ParseError(src, line_no, 0, fmt::format("'{}' is not a computable channel", decl.name));
                decl.source = ChannelSource::Computed;
            } else if (fields[2] == "precomputed") {
                decl.source = ChannelSource::Precomputed;
            } else {
                throw ParseError(src, line_no, 0, fmt::format("unknown channel source '{}'", fields[2]));
            }
            if (fields.size() == 4) {
                std::size_t dim = 0;
                const auto& s = fields[3];
                const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), dim);
                if (ec != std::errc{} || p != s.data() + s.size() || dim == 0)
                    throw ParseError(src, line_no, 0, fmt::format("invalid expected dimension '{}'", s));
                decl.expected_dim = dim;
            }
            for (const auto& c : m.channels)
                if (c.name == decl.name)
                    throw ParseError(src, line_no, 0, fmt::format("channel '{}' declared twice", decl.name));
            m.channels.push_back(std::move(decl));
        } else if (fields[0].front() == '@') {
            throw ParseError(src, line_no, 1, fmt::format("unknown directive '{}'", fields[0]));
        } else {
            if (fields.size() < 2) throw ParseError(src, line_no, 0, "expected video_id<TAB>class_label[<TAB>key=path...]");
            VideoEntry v{fields[0], fields[1], {}};
            if (v.id.empty() || v.label.empty()) throw ParseError(src, line_no, 0, "empty video id or class label");
            if (v.id.find_first_of("/ \\") != std::string::npos)
                throw ParseError(src, line_no, 1, fmt::format("video id '{}' must not contain '/', '\\' or spaces", v.id));
            if (!ids.insert(v.id).second)
                throw ParseError(src, line_no, 1, fmt::format("duplicate video id '{}'", v.id));
            for (std::size_t i = 2; i < fields.size(); ++i) {
                const auto eq = fields[i].find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == fields[i].size())
                    throw ParseError(src, line_no, 0, fmt::format("expected key=path, got '{}'", fields[i]));
                const std::string key = fields[i].substr(0, eq);
                std::filesystem::path p = fields[i].substr(eq + 1);
                if (p.is_relative()) p = base / p;
                if (!v.sources.emplace(key, std::move(p)).second)
                    throw ParseError(src, line_no, 0, fmt::format("key '{}' repeated for video '{}'", key, v.id));
            }
            m.videos.push_back(std::move(v));
        }
    }
    if (m.videos.empty()) throw ParseError(src, 0, 0, "manifest lists no videos");
    if (m.class_names().size() < 2) throw ParseError(src, 0, 0, "manifest needs at least 2 classes");
    for (const auto& c : m.channels) m.resolve_channel(c.name);
    return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open manifest '{}'", path.string()));
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_manifest(text, path);
}

}  // namespace pot
