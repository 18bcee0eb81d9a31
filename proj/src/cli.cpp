#include "pot/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pot/codebook.hpp"
#include "pot/descriptor_io.hpp"
#include "pot/descriptors.hpp"
#include "pot/dtw.hpp"
#include "pot/error.hpp"
#include "pot/evaluation.hpp"
#include "pot/fisher.hpp"
#include "pot/manifest.hpp"
#include "pot/parallel.hpp"
#include "pot/pooling.hpp"
#include "pot/random.hpp"
#include "pot/report.hpp"

namespace pot::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolTag = "pot-1.0.0";
constexpr const char* kExtension = ".potdesc";

fs::path descriptor_path(const fs::path& dir, const std::string& channel, const std::string& video) {
    return dir / channel / (video + kExtension);
}

void ensure_parent(const fs::path& file) { fs::create_directories(file.parent_path()); }

bool skip_existing(const fs::path& file, bool no_clobber, std::ostream& log) {
    if (!no_clobber || !fs::exists(file)) return false;
    log << fmt::format("skip {} (exists, --no-clobber)\n", file.string());
    return true;
}

std::vector<fs::path> frame_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".pgm" || ext == ".ppm" || ext == ".pnm")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

// Loads the descriptor sequence of one video for one channel.
DescriptorSequence load_sequence(const ChannelDecl& decl, const VideoEntry& video,
                                 const std::optional<fs::path>& descriptors, bool precomputed_l1) {
    LoadOptions load;
    load.expected_dim = decl.expected_dim;
    load.video_id = video.id;
    load.channel = decl.name;
    load.l1_normalize = precomputed_l1;

    if (descriptors) {
        const fs::path p = descriptor_path(*descriptors, decl.name, video.id);
        if (!fs::exists(p)) throw Error(fmt::format("{}: missing descriptor file '{}'", video.id, p.string()));
        DescriptorFile file = read_descriptor_file(p);
        if (const auto block = file.field("l1_block")) {
            if (decl.expected_dim && file.values.cols() != *decl.expected_dim)
                throw Error(fmt::format("{}: dimension {} does not match expected {}", p.string(), file.values.cols(),
                                        *decl.expected_dim));
            return DescriptorSequence(video.id, decl.name, std::move(file.values), std::stoul(*block));
        }
        return load_precomputed(p, load);
    }
    if (decl.source == ChannelSource::Precomputed) return load_precomputed(video.sources.at(decl.name), load);

    Channel channel;
    parse_channel(decl.name, channel);
    const FrameSequence frames = load_frames(video.sources.at("frames"), video.id);
    return extract_channel(frames, channel);
}

std::vector<DescriptorSequence> load_all(const ExperimentManifest& manifest, const ChannelDecl& decl,
                                         const std::optional<fs::path>& descriptors, bool precomputed_l1,
                                         unsigned jobs) {
    std::vector<std::optional<DescriptorSequence>> slots(manifest.videos.size());
    parallel_for(slots.size(), jobs, [&](std::size_t i) {
        slots[i].emplace(load_sequence(decl, manifest.videos[i], descriptors, precomputed_l1));
    });
    std::vector<DescriptorSequence> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::size_t default_k(const std::string& method, std::size_t dim) {
    if (method == "bow") return 400;
    return dim > 1000 ? 5 : 10;
}

std::vector<std::string> video_ids(const ExperimentManifest& m) {
    std::vector<std::string> ids;
    for (const auto& v : m.videos) ids.push_back(v.id);
    return ids;
}

std::vector<SplitPlan> plans_for(const ExperimentManifest& manifest, const std::optional<fs::path>& splits,
                                 std::size_t trials, std::uint64_t seed, double fraction) {
    if (splits) return read_splits(*splits, video_ids(manifest), manifest.class_names());
    return make_splits(manifest.labels(), trials, seed, fraction);
}

// Digest of the plan contents, so reports show whether two runs saw the same splits.
std::string plans_digest(const ExperimentManifest& manifest, std::span<const SplitPlan> plans, std::uint64_t seed) {
    return fmt::format("{:016x}", fnv1a(render_splits(plans, video_ids(manifest), manifest.class_names(), seed)));
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

std::vector<std::string> parse_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

void cmd_extract(const ExtractOptions& options, std::ostream& log) {
    const ExperimentManifest manifest = load_manifest(options.manifest);
    if (options.channels.empty()) throw InvalidArgument("extract: no channels given");
    std::vector<ChannelDecl> decls;
    for (const auto& name : options.channels) {
        ChannelDecl d = manifest.resolve_channel(name);
        Channel c;
        if (d.source == ChannelSource::Computed && !parse_channel(name, c))
            throw InvalidArgument(fmt::format("unknown channel '{}'", name));
        decls.push_back(std::move(d));
    }

    parallel_for(manifest.videos.size(), options.jobs, [&](std::size_t i) {
        const VideoEntry& video = manifest.videos[i];
        std::optional<FrameSequence> frames;
        for (const auto& decl : decls) {
            const fs::path out = descriptor_path(options.output_dir, decl.name, video.id);
            if (skip_existing(out, options.no_clobber, log)) continue;
            ensure_parent(out);
            if (decl.source == ChannelSource::Precomputed) {
                const fs::path& src = video.sources.at(decl.name);
                LoadOptions load;
                load.expected_dim = decl.expected_dim;
                load.video_id = video.id;
                load.channel = decl.name;
                (void)load_precomputed(src, load);
                fs::copy_file(src, out, fs::copy_options::overwrite_existing);
                continue;
            }
            const fs::path& dir = video.sources.at("frames");
            if (!frames) frames = load_frames(dir, video.id);
            Channel channel;
            parse_channel(decl.name, channel);
            const DescriptorSequence seq = extract_channel(*frames, channel);
            DescriptorFile file{decl.name,
                                {{"tool", kToolTag},
                                 {"video", video.id},
                                 {"source", "frames"},
                                 {"l1_block", std::to_string(seq.l1_block())},
                                 {"frames_digest", combined_digest(frame_files(dir))}},
                                seq.values()};
            write_descriptor_file(out, file);
        }
    });
    log << fmt::format("extracted {} channel(s) for {} video(s) into {}\n", decls.size(), manifest.videos.size(),
                       options.output_dir.string());
}

void cmd_represent(const RepresentOptions& options, std::ostream& log) {
    const std::string& method = options.method;
    if (method != "pot" && method != "bow" && method != "ifv")
        throw InvalidArgument(fmt::format("unknown method '{}' (expected pot, bow or ifv)", method));
    if (options.channels.empty()) throw InvalidArgument("represent: no channels given");
    if (options.levels < 1) throw InvalidArgument("--levels must be >= 1");
    const ExperimentManifest manifest = load_manifest(options.manifest);
    const OperatorSet ops = OperatorSet::parse(options.ops);

    std::vector<std::size_t> quantizer_rows;
    std::string quantizer_data = "all";
    if (method != "pot") {
        if (options.splits) {
            const auto plans = read_splits(*options.splits, video_ids(manifest), manifest.class_names());
            if (options.trial >= plans.size())
                throw InvalidArgument(fmt::format("--trial {} outside plan with {} trials", options.trial, plans.size()));
            quantizer_rows = plans[options.trial].train_indices();
            quantizer_data = fmt::format("train-trial-{}", options.trial);
        } else {
            for (std::size_t i = 0; i < manifest.videos.size(); ++i) quantizer_rows.push_back(i);
        }
    }

    for (const auto& name : options.channels) {
        const ChannelDecl decl = manifest.resolve_channel(name);
        const auto seqs = load_all(manifest, decl, options.descriptors, options.precomputed_l1, options.jobs);
        const std::size_t dim = seqs.front().dim();
        for (const auto& s : seqs)
            if (s.dim() != dim)
                throw Error(fmt::format("{}: channel '{}' has dimension {}, other videos have {}", s.video_id(), name,
                                        s.dim(), dim));

        // Pyramids are checked up front so every too-short video is reported together.
        std::vector<TemporalPyramid> pyramids(seqs.size());
        std::string infeasible;
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            try {
                pyramids[i] = build_pyramid(options.levels, seqs[i].frame_count());
            } catch (const InvalidArgument& e) {
                infeasible += fmt::format("\n  {}: {}", seqs[i].video_id(), e.what());
            }
        }
        if (!infeasible.empty()) throw Error(fmt::format("channel '{}': infeasible pyramid for{}", name, infeasible));

        if (method == "pot") {
            PotOptions pot_options{options.l1_normalize_pot};
            parallel_for(seqs.size(), options.jobs, [&](std::size_t i) {
                const fs::path out = descriptor_path(options.output_dir, name, seqs[i].video_id());
                if (skip_existing(out, options.no_clobber, log)) return;
                const PotVector pot = build_pot(seqs[i], pyramids[i], ops, pot_options);
                ensure_parent(out);
                write_descriptor_file(
                    out, DescriptorFile{name,
                                        {{"tool", kToolTag},
                                         {"method", "pot"},
                                         {"video", seqs[i].video_id()},
                                         {"levels", std::to_string(options.levels)},
                                         {"ops", ops.to_string()},
                                         {"l1", options.l1_normalize_pot ? "1" : "0"},
                                         {"dim", fmt::format("{}x{}x{}", seqs[i].dim(), pyramids[i].size(), ops.width())}},
                                        Matrix(1, pot.values.size(), pot.values)});
            });
            log << fmt::format("pot {}: {} vectors of dimension {}\n", name, seqs.size(),
                               pot_dimension(dim, (std::size_t{1} << options.levels) - 1, ops));
            continue;
        }

        std::vector<const DescriptorSequence*> training;
        for (std::size_t i : quantizer_rows) training.push_back(&seqs[i]);
        const Matrix samples = stack_frames(training);
        const std::size_t k = options.k != 0 ? options.k : default_k(method, dim);
        const std::size_t runs = std::max<std::size_t>(1, options.reseeds);

        for (std::size_t run = 0; run < runs; ++run) {
            const std::uint64_t run_seed = derive_seed(options.seed, method + ":" + name, run);
            std::optional<Codebook> codebook;
            std::optional<GaussianMixture> gmm;
            if (method == "bow")
                codebook = train_codebook(samples, k, run_seed);
            else
                gmm = train_gmm(samples, k, run_seed);
            const fs::path run_dir = options.output_dir / fmt::format("run-{}", run);
            parallel_for(seqs.size(), options.jobs, [&](std::size_t i) {
                const fs::path out = descriptor_path(run_dir, name, seqs[i].video_id());
                if (skip_existing(out, options.no_clobber, log)) return;
                const auto& filters = pyramids[i].filters;
                const std::vector<double> v = codebook ? encode_bow(seqs[i], *codebook, filters)
                                                 : encode_ifv(seqs[i], *gmm, filters);
                ensure_parent(out);
                const std::string dim_formula = codebook ? fmt::format("{}x{}", k, filters.size())
                                                         : fmt::format("2x{}x{}x{}", k, dim, filters.size());
                write_descriptor_file(out, DescriptorFile{name,
                                                          {{"tool", kToolTag},
                                                           {"method", method},
                                                           {"video", seqs[i].video_id()},
                                                           {"levels", std::to_string(options.levels)},
                                                           {"k", std::to_string(k)},
                                                           {"run", std::to_string(run)},
                                                           {"seed", std::to_string(options.seed)},
                                                           {"quantizer_data", quantizer_data},
                                                           {"dim", dim_formula}},
                                                          Matrix(1, v.size(), v)});
            });
        }
        log << fmt::format("{} {}: K={}, {} run(s), {} videos\n", method, name, k, runs, seqs.size());
    }
}

void cmd_evaluate(const EvaluateOptions& options, std::ostream& log) {
    if (options.trials == 0 && !options.splits) throw InvalidArgument("--trials must be >= 1");
    if (options.channels.empty()) throw InvalidArgument("evaluate: no channels given");
    const ExperimentManifest manifest = load_manifest(options.manifest);
    const auto labels = manifest.labels();
    const auto class_names = manifest.class_names();
    const auto plans = plans_for(manifest, options.splits, options.trials, options.seed, options.split_fraction);
    if (options.splits_out)
        write_splits(*options.splits_out, plans, video_ids(manifest), class_names, options.seed);

    std::vector<fs::path> run_dirs;
    if (fs::is_directory(options.representations)) {
        for (const auto& e : fs::directory_iterator(options.representations))
            if (e.is_directory() && e.path().filename().string().rfind("run-", 0) == 0) run_dirs.push_back(e.path());
    } else {
        throw Error(fmt::format("representation directory '{}' does not exist", options.representations.string()));
    }
    std::sort(run_dirs.begin(), run_dirs.end(), [](const fs::path& a, const fs::path& b) {
        return std::stoul(a.filename().string().substr(4)) < std::stoul(b.filename().string().substr(4));
    });
    if (run_dirs.empty()) run_dirs.push_back(options.representations);

    SvmExperimentConfig config;
    config.svm.c = options.c;
    config.jobs = options.jobs;

    std::vector<TrialResult> all_trials;
    std::vector<double> run_means;
    std::vector<fs::path> inputs;
    std::string method = "unknown";
    for (std::size_t r = 0; r < run_dirs.size(); ++r) {
        std::vector<Matrix> channels;
        for (const auto& ch : options.channels) {
            Matrix features;
            std::string missing;
            for (std::size_t i = 0; i < manifest.videos.size(); ++i) {
                const fs::path p = descriptor_path(run_dirs[r], ch, manifest.videos[i].id);
                if (!fs::exists(p)) {
                    missing += " " + manifest.videos[i].id;
                    continue;
                }
                inputs.push_back(p);
                const DescriptorFile f = read_descriptor_file(p);
                if (f.values.rows() != 1)
                    throw Error(fmt::format("{}: representation files hold exactly one row, found {}", p.string(),
                                            f.values.rows()));
                if (const auto m = f.field("method")) method = *m;
                if (features.empty()) features = Matrix(manifest.videos.size(), f.values.cols());
                if (f.values.cols() != features.cols())
                    throw Error(fmt::format("{}: dimension {} differs from {}", p.string(), f.values.cols(),
                                            features.cols()));
                std::copy_n(f.values.row(0).begin(), features.cols(), features.row(i).begin());
            }
            if (!missing.empty())
                throw Error(fmt::format("channel '{}' in {}: missing feature vectors for video(s):{}", ch,
                                        run_dirs[r].string(), missing));
            channels.push_back(std::move(features));
        }
        for (std::size_t c = 0; c < channels.size(); ++c)
            if (choose_denominator(channels[c]) == Chi2Denominator::AbsSum)
                log << fmt::format("warning: channel '{}' has negative values; chi2 uses |x|+|y| denominators\n",
                                   options.channels[c]);
        ExperimentSummary s = run_experiment(channels, labels, class_names.size(), plans, config);
        run_means.push_back(s.mean_accuracy);
        for (auto& t : s.trials) {
            t.trial += r * plans.size();
            all_trials.push_back(std::move(t));
        }
    }

    ReportContent content;
    content.params = {{"tool", kToolVersion},
                      {"command", "evaluate"},
                      {"method", method},
                      {"channels", join(options.channels)},
                      {"trials", std::to_string(plans.size())},
                      {"seed", std::to_string(options.seed)},
                      {"split_frac", fmt::format("{}", options.split_fraction)},
                      {"c", fmt::format("{}", options.c)},
                      {"kernel", "exp(-sum_c chi2_c / gamma_c), gamma_c = mean training-pair chi2"},
                      {"runs", std::to_string(run_dirs.size())},
                      {"manifest_digest", file_digest(options.manifest)},
                      {"features_digest", combined_digest(inputs)},
                      {"splits_digest", plans_digest(manifest, plans, options.seed)}};
    content.class_names = class_names;
    content.channels = options.channels;
    content.summary = summarize(std::move(all_trials));
    if (run_dirs.size() > 1) content.reclustering = summarize_runs(run_means);
    write_text(options.report, render_report(content));
    log << fmt::format("mean accuracy {:.4f} over {} trial(s); report written to {}\n", content.summary.mean_accuracy,
                       content.summary.trials.size(), options.report.string());
}

void cmd_dtw(const DtwOptions& options, std::ostream& log) {
    if (options.trials == 0 && !options.splits) throw InvalidArgument("--trials must be >= 1");
    const ExperimentManifest manifest = load_manifest(options.manifest);
    const ChannelDecl decl = manifest.resolve_channel(options.channel);
    const auto seqs = load_all(manifest, decl, options.descriptors, options.precomputed_l1, options.jobs);
    const auto labels = manifest.labels();
    const auto class_names = manifest.class_names();
    const auto plans = plans_for(manifest, options.splits, options.trials, options.seed, options.split_fraction);
    if (options.splits_out)
        write_splits(*options.splits_out, plans, video_ids(manifest), class_names, options.seed);

    const std::size_t n = seqs.size();
    Matrix distances(n, n);
    parallel_for(n, options.jobs, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) distances(i, j) = dtw_distance(seqs[i], seqs[j]);
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) distances(j, i) = distances(i, j);

    std::string digest_input;
    for (const auto& s : seqs)
        for (double v : s.values().data()) digest_input += fmt::format("{} ", v);

    ReportContent content;
    content.params = {{"tool", kToolVersion},
                      {"command", "dtw"},
                      {"method", "dtw-1nn"},
                      {"channels", options.channel},
                      {"trials", std::to_string(plans.size())},
                      {"seed", std::to_string(options.seed)},
                      {"split_frac", fmt::format("{}", options.split_fraction)},
                      {"manifest_digest", file_digest(options.manifest)},
                      {"features_digest", fmt::format("{:016x}", fnv1a(digest_input))},
                      {"splits_digest", plans_digest(manifest, plans, options.seed)}};
    content.class_names = class_names;
    content.summary = run_nearest_neighbor(distances, labels, class_names.size(), plans, options.jobs);
    write_text(options.report, render_report(content));
    log << fmt::format("DTW 1-NN mean accuracy {:.4f} over {} trial(s); report written to {}\n",
                       content.summary.mean_accuracy, content.summary.trials.size(), options.report.string());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pooled time series video features: extraction, representation and evaluation", "pot"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string manifest;
    std::uint64_t seed = 1;
    unsigned jobs = 0;
    bool no_clobber = false;
    auto shared = [&](CLI::App* sub) {
        sub->add_option("--manifest", manifest, "Dataset manifest (TSV)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Seed for every random choice")->capture_default_str();
        sub->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();
    };

    // extract
    ExtractOptions ex;
    std::string ex_channels = "hof,hog,mbh", ex_out;
    auto* extract = app.add_subcommand("extract", "Compute or ingest per-frame descriptors");
    shared(extract);
    extract->add_option("--channels", ex_channels, "Channels, comma separated")->capture_default_str();
    extract->add_option("--out", ex_out, "Output directory")->required();
    extract->add_flag("--no-clobber", no_clobber, "Keep existing output files");

    // represent
    RepresentOptions rep;
    std::string rep_channels, rep_out, rep_desc, rep_splits;
    auto* represent = app.add_subcommand("represent", "Build PoT, BoW or IFV video vectors");
    shared(represent);
    represent->add_option("--method", rep.method, "pot | bow | ifv")
        ->check(CLI::IsMember({"pot", "bow", "ifv"}))
        ->capture_default_str();
    represent->add_option("--channels", rep_channels, "Channels, comma separated")->required();
    represent->add_option("--out", rep_out, "Output directory")->required();
    represent->add_option("--descriptors", rep_desc, "Directory written by 'extract'");
    represent->add_option("--levels", rep.levels, "Temporal pyramid levels")->capture_default_str()->check(CLI::PositiveNumber);
    represent->add_option("--ops", rep.ops, "Pooling operators from {sum,max,d1,d2}")->capture_default_str();
    represent->add_flag("--l1", rep.l1_normalize_pot, "L1-normalize PoT vectors");
    represent->add_option("--k", rep.k, "Codebook / mixture size (default: 400 for bow; 10, or 5 above 1000-D, for ifv)");
    represent->add_option("--reseeds", rep.reseeds, "Independent quantizer seeds for bow/ifv")->capture_default_str();
    represent->add_option("--splits", rep_splits, "Split plan file; quantizers train on one trial's training videos");
    represent->add_option("--trial", rep.trial, "Trial of --splits used for quantizer training")->capture_default_str();
    bool rep_raw = false;
    represent->add_flag("--no-l1-precomputed", rep_raw, "Do not L1-normalize precomputed descriptor rows");
    represent->add_flag("--no-clobber", no_clobber, "Keep existing output files");

    // evaluate
    EvaluateOptions ev;
    std::string ev_channels, ev_repr, ev_report, ev_splits, ev_splits_out;
    auto* evaluate = app.add_subcommand("evaluate", "Repeated random-split chi2 SVM evaluation");
    shared(evaluate);
    evaluate->add_option("--repr", ev_repr, "Directory written by 'represent'")->required();
    evaluate->add_option("--channels", ev_channels, "Channels combined in a multi-channel kernel")->required();
    evaluate->add_option("--trials", ev.trials, "Number of random splits")->capture_default_str()->check(CLI::PositiveNumber);
    evaluate->add_option("--split-frac", ev.split_fraction, "Training fraction per class")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    evaluate->add_option("--c", ev.c, "SVM regularization C")->capture_default_str()->check(CLI::PositiveNumber);
    evaluate->add_option("--splits", ev_splits, "Reuse a persisted split plan");
    evaluate->add_option("--splits-out", ev_splits_out, "Persist the split plan");
    evaluate->add_option("--report", ev_report, "Report path")->required();

    // dtw
    DtwOptions dt;
    std::string dt_desc, dt_report, dt_splits, dt_splits_out;
    auto* dtw = app.add_subcommand("dtw", "1-NN DTW template matching under the same splits");
    shared(dtw);
    dtw->add_option("--channel", dt.channel, "Descriptor channel")->required();
    dtw->add_option("--descriptors", dt_desc, "Directory written by 'extract'");
    dtw->add_option("--trials", dt.trials, "Number of random splits")->capture_default_str()->check(CLI::PositiveNumber);
    dtw->add_option("--split-frac", dt.split_fraction, "Training fraction per class")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    dtw->add_option("--splits", dt_splits, "Reuse a persisted split plan");
    dtw->add_option("--splits-out", dt_splits_out, "Persist the split plan");
    bool dt_raw = false;
    dtw->add_flag("--no-l1-precomputed", dt_raw, "Do not L1-normalize precomputed descriptor rows");
    dtw->add_option("--report", dt_report, "Report path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    auto opt_path = [](const std::string& s) { return s.empty() ? std::optional<fs::path>{} : fs::path(s); };
    try {
        if (extract->parsed()) {
            ex.manifest = manifest;
            ex.channels = parse_csv(ex_channels);
            ex.output_dir = ex_out;
            ex.no_clobber = no_clobber;
            ex.jobs = jobs;
            cmd_extract(ex, out);
        } else if (represent->parsed()) {
            rep.manifest = manifest;
            rep.channels = parse_csv(rep_channels);
            rep.output_dir = rep_out;
            rep.descriptors = opt_path(rep_desc);
            rep.splits = opt_path(rep_splits);
            rep.precomputed_l1 = !rep_raw;
            rep.seed = seed;
            rep.no_clobber = no_clobber;
            rep.jobs = jobs;
            cmd_represent(rep, out);
        } else if (evaluate->parsed()) {
            ev.manifest = manifest;
            ev.representations = ev_repr;
            ev.channels = parse_csv(ev_channels);
            ev.splits = opt_path(ev_splits);
            ev.splits_out = opt_path(ev_splits_out);
            ev.report = ev_report;
            ev.seed = seed;
            ev.jobs = jobs;
            cmd_evaluate(ev, out);
        } else if (dtw->parsed()) {
            dt.manifest = manifest;
            dt.descriptors = opt_path(dt_desc);
            dt.splits = opt_path(dt_splits);
            dt.splits_out = opt_path(dt_splits_out);
            dt.precomputed_l1 = !dt_raw;
            dt.report = dt_report;
            dt.seed = seed;
            dt.jobs = jobs;
            cmd_dtw(dt, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace pot::cli
