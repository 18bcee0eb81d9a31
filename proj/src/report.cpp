#include "pot/report.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "pot/error.hpp"
#include "pot/random.hpp"

namespace pot {
namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string join(std::span<const std::string> items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

std::string file_digest(const std::filesystem::path& path) { return fmt::format("{:016x}", fnv1a(read_file(path))); }

std::string combined_digest(std::span<const std::filesystem::path> paths) {
    std::uint64_t h = fnv1a("");
    for (const auto& p : paths) h = fnv1a(read_file(p), h);
    return fmt::format("{:016x}", h);
}

std::string render_report(const ReportContent& c) {
    std::string out = "# pooled time series evaluation report\n\n[params]\n";
    for (const auto& [k, v] : c.params) out += fmt::format("{} = {}\n", k, v);
    out += fmt::format("classes = {}\n", join(c.class_names, ','));
    const auto& trials = c.summary.trials;
    for (std::size_t ch = 0; ch < c.channels.size(); ++ch) {
        double mean = 0.0;
        for (const auto& t : trials) mean += t.gammas.at(ch);
        if (!trials.empty()) mean /= static_cast<double>(trials.size());
        out += fmt::format("gamma.{} = {:.9g}\n", c.channels[ch], mean);
    }

    out += "\n[per-trial]\n# trial accuracy";
    for (const auto& ch : c.channels) out += fmt::format(" gamma.{}", ch);
    out += '\n';
    for (const auto& t : trials) {
        out += fmt::format("{} {:.6f}", t.trial, t.accuracy);
        for (double g : t.gammas) out += fmt::format(" {:.9g}", g);
        out += '\n';
    }

    const auto& s = c.summary;
    out += "\n[aggregate]\n";
    out += fmt::format("trials = {}\n", trials.size());
    out += fmt::format("mean_accuracy = {:.6f}\n", s.mean_accuracy);
    out += fmt::format("std_accuracy = {:.6f}\n", s.std_accuracy);
    out += fmt::format("ci95_low = {:.6f}\n", s.ci_low);
    out += fmt::format("ci95_high = {:.6f}\n", s.ci_high);
    double macro_f1 = 0.0;
    for (double f : s.mean_f1) macro_f1 += f;
    if (!s.mean_f1.empty()) macro_f1 /= static_cast<double>(s.mean_f1.size());
    out += fmt::format("mean_f1 = {:.6f}\n", macro_f1);

    out += "\n[confusion]\n# rows = true class, columns = predicted class, summed over trials\n";
    out += fmt::format("- {}\n", join(c.class_names, ' '));
    for (std::size_t r = 0; r < s.confusion.size(); ++r) {
        out += c.class_names.at(r);
        for (std::size_t v : s.confusion[r]) out += fmt::format(" {}", v);
        out += '\n';
    }

    out += "\n[per-class-f1]\n";
    for (std::size_t k = 0; k < s.mean_f1.size(); ++k)
        out += fmt::format("{} = {:.6f}\n", c.class_names.at(k), s.mean_f1[k]);

    if (c.reclustering) {
        const auto& r = *c.reclustering;
        out += "\n[reclustering]\n";
        out += fmt::format("runs = {}\n", r.accuracies.size());
        std::string list;
        for (double a : r.accuracies) list += fmt::format("{}{:.6f}", list.empty() ? "" : ",", a);
        out += fmt::format("run_mean_accuracies = {}\n", list);
        out += fmt::format("median_accuracy = {:.6f}\n", r.median);
        out += fmt::format("mean_accuracy = {:.6f}\n", r.mean);
        out += fmt::format("ci95_low = {:.6f}\n", r.ci_low);
        out += fmt::format("ci95_high = {:.6f}\n", r.ci_high);
    }
    return out;
}

std::string render_splits(std::span<const SplitPlan> plans, std::span<const std::string> video_ids,
                          std::span<const std::string> class_names, std::uint64_t seed) {
    std::string out = fmt::format("POT-SPLITS v1 trials={} seed={}\n", plans.size(), seed);
    auto ids = [&](const std::vector<std::size_t>& idx) {
        std::vector<std::string> names;
        for (std::size_t i : idx) names.push_back(video_ids[i]);
        return join(names, ',');
    };
    for (const auto& plan : plans)
        for (const auto& cs : plan.classes)
            out += fmt::format("trial={} class={} train={} test={}\n", plan.trial,
                               class_names[static_cast<std::size_t>(cs.label)], ids(cs.train), ids(cs.test));
    return out;
}

void write_splits(const std::filesystem::path& path, std::span<const SplitPlan> plans,
                  std::span<const std::string> video_ids, std::span<const std::string> class_names,
                  std::uint64_t seed) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(fmt::format("cannot write '{}'", path.string()));
    f << render_splits(plans, video_ids, class_names, seed);
}

std::vector<SplitPlan> read_splits(const std::filesystem::path& path, std::span<const std::string> video_ids,
                                   std::span<const std::string> class_names) {
    std::istringstream in(read_file(path));
    const std::string src = path.string();
    std::string line;
    if (!std::getline(in, line) || line.rfind("POT-SPLITS v1 ", 0) != 0)
        throw ParseError(src, 1, 1, "expected 'POT-SPLITS v1' header");
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    if (std::sscanf(line.c_str(), "POT-SPLITS v1 trials=%zu seed=%" SCNu64, &trials, &seed) != 2)
        throw ParseError(src, 1, 0, "malformed header");

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < video_ids.size(); ++i) index[video_ids[i]] = i;
    auto class_of = [&](const std::string& name) -> int {
        const auto it = std::find(class_names.begin(), class_names.end(), name);
        return it == class_names.end() ? -1 : static_cast<int>(it - class_names.begin());
    };

    std::vector<SplitPlan> plans(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        plans[t].trial = t;
        plans[t].seed = derive_seed(seed, "split", t);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::map<std::string, std::string> kv;
        for (const auto& tok : split(line, ' ')) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw ParseError(src, line_no, 0, fmt::format("bad field '{}'", tok));
            kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        if (!kv.contains("trial") || !kv.contains("class") || !kv.contains("train") || !kv.contains("test"))
            throw ParseError(src, line_no, 0, "expected trial=, class=, train=, test= fields");
        const std::size_t t = std::stoul(kv["trial"]);
        if (t >= trials) throw ParseError(src, line_no, 0, fmt::format("trial {} out of range", t));
        ClassSplit cs;
        cs.label = class_of(kv["class"]);
        if (cs.label < 0) throw ParseError(src, line_no, 0, fmt::format("unknown class '{}'", kv["class"]));
        auto resolve = [&](const std::string& list, std::vector<std::size_t>& dst) {
            for (const auto& id : split(list, ',')) {
                const auto it = index.find(id);
                if (it == index.end()) throw ParseError(src, line_no, 0, fmt::format("unknown video '{}'", id));
                dst.push_back(it->second);
            }
            std::sort(dst.begin(), dst.end());
        };
        resolve(kv["train"], cs.train);
        resolve(kv["test"], cs.test);
        plans[t].classes.push_back(std::move(cs));
    }
    for (auto& p : plans)
        std::sort(p.classes.begin(), p.classes.end(),
                  [](const ClassSplit& a, const ClassSplit& b) { return a.label < b.label; });
    return plans;
}

}  // namespace pot
