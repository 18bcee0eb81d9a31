#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pot::cli {

struct ExtractOptions {
    std::filesystem::path manifest;
    std::vector<std::string> channels;
    std::filesystem::path output_dir;
    bool no_clobber = false;
    unsigned jobs = 0;
};

/// Writes <output_dir>/<channel>/<video_id>.potdesc for every video and channel.
/// Computed channels are extracted from frames; precomputed files are validated
/// and copied byte for byte.
void cmd_extract(const ExtractOptions& options, std::ostream& log);

struct RepresentOptions {
    std::filesystem::path manifest;
    std::string method = "pot";  ///< pot | bow | ifv
    std::vector<std::string> channels;
    std::filesystem::path output_dir;
    /// Extracted descriptors; when empty, precomputed channels come from the
    /// manifest and computed channels are extracted on the fly.
    std::optional<std::filesystem::path> descriptors;
    std::size_t levels = 4;
    std::string ops = "sum,max,d1,d2";
    bool l1_normalize_pot = false;
    /// Codebook / mixture size; 0 selects the default for the method and dimension.
    std::size_t k = 0;
    /// Number of independently seeded quantizers for bow/ifv.
    std::size_t reseeds = 10;
    /// Train the quantizer only on the training videos of this trial of the plan file.
    std::optional<std::filesystem::path> splits;
    std::size_t trial = 0;
    bool precomputed_l1 = true;
    std::uint64_t seed = 1;
    bool no_clobber = false;
    unsigned jobs = 0;
};

void cmd_represent(const RepresentOptions& options, std::ostream& log);

struct EvaluateOptions {
    std::filesystem::path manifest;
    std::filesystem::path representations;
    std::vector<std::string> channels;
    std::size_t trials = 100;
    double split_fraction = 0.5;
    double c = 100.0;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> splits;
    std::optional<std::filesystem::path> splits_out;
    std::filesystem::path report;
    unsigned jobs = 0;
};

void cmd_evaluate(const EvaluateOptions& options, std::ostream& log);

struct DtwOptions {
    std::filesystem::path manifest;
    std::string channel;
    std::optional<std::filesystem::path> descriptors;
    std::size_t trials = 100;
    double split_fraction = 0.5;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> splits;
    std::optional<std::filesystem::path> splits_out;
    bool precomputed_l1 = true;
    std::filesystem::path report;
    unsigned jobs = 0;
};

void cmd_dtw(const DtwOptions& options, std::ostream& log);

/// Parses `args` (without the program name) and runs the selected command.
/// Returns the process exit code: 0 on success, 1 on runtime errors, and the
/// argument parser's code (non-zero) on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pot::cli
