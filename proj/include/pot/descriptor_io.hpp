#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pot/core.hpp"
#include "pot/matrix.hpp"

namespace pot {

// Text container:
//   POT-DESC v1 m=<int> n=<int> channel=<name> [key=value ...]
//   <m lines of n space-separated reals>
// Binary container: 16-byte magic "POTDESCB" padded with NUL, little-endian
// uint32 m and n, then m*n little-endian float32 values, row-major.

struct DescriptorFile {
    std::string channel;
    /// Extra header fields after `channel=`, in file order.
    std::vector<std::pair<std::string, std::string>> fields;
    Matrix values;

    /// Value of header field `key`, if present.
    std::optional<std::string> field(const std::string& key) const;
};

/// Reads either container, detected from the leading bytes.
DescriptorFile read_descriptor_file(const std::filesystem::path& path);
/// Writes the text container. Values use the shortest round-trip decimal form.
void write_descriptor_file(const std::filesystem::path& path, const DescriptorFile& file);
void write_descriptor_file_binary(const std::filesystem::path& path, const Matrix& values);

struct LoadOptions {
    std::optional<std::size_t> expected_dim;
    /// L1-normalize every row after loading.
    bool l1_normalize = true;
    std::string video_id;
    /// Used when the file does not name a channel (binary container).
    std::string channel;
};

/// Ingests an externally computed descriptor file (e.g. CNN activations).
DescriptorSequence load_precomputed(const std::filesystem::path& path, const LoadOptions& options);

}  // namespace pot
