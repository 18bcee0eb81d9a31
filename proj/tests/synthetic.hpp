#pragma once

// Synthetic descriptor datasets with known class structure.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "pot/core.hpp"
#include "pot/random.hpp"

namespace synthetic {

struct Dataset {
    std::vector<pot::DescriptorSequence> videos;
    std::vector<int> labels;
};

inline double normal(pot::Rng& rng) {
    // Box-Muller from the library's portable uniform source.
    const double u1 = 1.0 - pot::uniform01(rng);
    const double u2 = pot::uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Triangle wave with `cycles` rise/fall periods over m frames, in [0, 1].
inline std::vector<double> triangle(std::size_t m, std::size_t cycles) {
    std::vector<double> w(m);
    for (std::size_t t = 0; t < m; ++t) {
        const double phase = std::fmod(static_cast<double>(t) * cycles / static_cast<double>(m), 1.0);
        w[t] = phase < 0.5 ? 2 * phase : 2 * (1 - phase);
    }
    return w;
}

// Reorders the sorted values 0..1 along the rank order of `shape`, so every
// class uses exactly the same multiset of values (same sum, same max).
inline std::vector<double> rank_permutation(const std::vector<double>& shape) {
    const std::size_t m = shape.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return shape[a] < shape[b]; });
    std::vector<double> out(m);
    for (std::size_t r = 0; r < m; ++r) out[order[r]] = static_cast<double>(r) / static_cast<double>(m - 1);
    return out;
}

// Every series of every video is amplitude * template + offset + 5% noise, with
// per-series amplitude and offset drawn from [0.5, 1.5].
inline Dataset from_templates(const std::vector<std::vector<double>>& templates, std::size_t per_class,
                              std::size_t n, std::uint64_t seed) {
    Dataset ds;
    pot::Rng rng(pot::derive_seed(seed, "synthetic"));
    const std::size_t m = templates.front().size();
    for (std::size_t c = 0; c < templates.size(); ++c) {
        for (std::size_t v = 0; v < per_class; ++v) {
            pot::Matrix values(m, n);
            for (std::size_t i = 0; i < n; ++i) {
                const double amplitude = 0.5 + pot::uniform01(rng);
                const double offset = 0.5 + pot::uniform01(rng);
                for (std::size_t t = 0; t < m; ++t)
                    values(t, i) = amplitude * (templates[c][t] + 0.05 * normal(rng)) + offset;
            }
            ds.videos.emplace_back("c" + std::to_string(c) + "v" + std::to_string(v), "syn", std::move(values));
            ds.labels.push_back(static_cast<int>(c));
        }
    }
    return ds;
}

// Monotone ramp vs. 2-cycle vs. 4-cycle oscillation over one value multiset.
inline Dataset oscillation(std::size_t per_class, std::size_t m, std::size_t n, std::uint64_t seed) {
    std::vector<double> ramp(m);
    std::iota(ramp.begin(), ramp.end(), 0.0);
    return from_templates({rank_permutation(ramp), rank_permutation(triangle(m, 2)), rank_permutation(triangle(m, 4))},
                          per_class, n, seed);
}

// Rise-then-fall vs. fall-then-rise: [0..h-1, h-1..0] and its mirror image.
inline Dataset phase_order(std::size_t per_class, std::size_t half, std::size_t n, std::uint64_t seed) {
    std::vector<double> a, b;
    const double top = static_cast<double>(half - 1);
    for (std::size_t t = 0; t < half; ++t) a.push_back(static_cast<double>(t) / top);
    for (std::size_t t = half; t-- > 0;) a.push_back(static_cast<double>(t) / top);
    for (double x : a) b.push_back(1.0 - x);
    return from_templates({a, b}, per_class, n, seed);
}

}  // namespace synthetic
