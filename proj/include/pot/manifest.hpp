#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pot {

enum class ChannelSource { Computed, Precomputed };

struct ChannelDecl {
    std::string name;
    ChannelSource source = ChannelSource::Precomputed;
    std::optional<std::size_t> expected_dim;
};

struct VideoEntry {
    std::string id;
    std::string label;
    /// "frames" -> frame directory; any other key -> descriptor file of that channel.
    /// Paths are resolved against the manifest's directory.
    std::map<std::string, std::filesystem::path> sources;
};

// Tab-separated manifest, one record per line:
//   @dataset  <name>
//   @channel  <name>  computed|precomputed  [expected_dim]
//   <video_id>  <class_label>  [frames=<dir>]  [<channel>=<file>] ...
// Blank lines and lines starting with '#' are ignored.
struct ExperimentManifest {
    std::filesystem::path path;
    std::string dataset;
    std::vector<ChannelDecl> channels;
    std::vector<VideoEntry> videos;

    /// Sorted distinct class labels; class id = position in this list.
    std::vector<std::string> class_names() const;
    /// Class id of every video, in video order.
    std::vector<int> labels() const;
    /// Declaration for `name`. Undeclared hof/hog/mbh are computed channels;
    /// other undeclared names are precomputed. Throws if some video cannot
    /// provide the channel.
    ChannelDecl resolve_channel(const std::string& name) const;
};

ExperimentManifest parse_manifest(const std::string& text, const std::filesystem::path& source);
ExperimentManifest load_manifest(const std::filesystem::path& path);

}  // namespace pot
