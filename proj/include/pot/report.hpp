#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pot/evaluation.hpp"

namespace pot {

inline constexpr const char* kToolVersion = "pot 1.0.0";

/// 16-hex-digit FNV-1a digest of a file's bytes.
std::string file_digest(const std::filesystem::path& path);
/// Digest over several files, in the given order.
std::string combined_digest(std::span<const std::filesystem::path> paths);

struct ReportContent {
    /// Key/value pairs for the [params] section, in order.
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> class_names;
    /// Per-channel names, matching TrialResult::gammas.
    std::vector<std::string> channels;
    ExperimentSummary summary;
    /// Present when several re-seeded representation runs were evaluated.
    std::optional<RunSpread> reclustering;
};

/// Renders the structured text report with sections [params], [per-trial],
/// [aggregate], [confusion], [per-class-f1] and optionally [reclustering].
/// Output is a pure function of the content.
std::string render_report(const ReportContent& content);

/// Split plan persistence, keyed by video id so plans survive manifest reordering.
/// Format:
///   POT-SPLITS v1 trials=<T> seed=<S>
///   trial=<t> class=<label> train=<id,...> test=<id,...>
std::string render_splits(std::span<const SplitPlan> plans, std::span<const std::string> video_ids,
                          std::span<const std::string> class_names, std::uint64_t seed);
void write_splits(const std::filesystem::path& path, std::span<const SplitPlan> plans,
                  std::span<const std::string> video_ids, std::span<const std::string> class_names,
                  std::uint64_t seed);
std::vector<SplitPlan> read_splits(const std::filesystem::path& path, std::span<const std::string> video_ids,
                                   std::span<const std::string> class_names);

}  // namespace pot
