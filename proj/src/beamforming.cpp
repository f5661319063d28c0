#include "tris/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tris/error.hpp"

namespace tris {

PhaseConfiguration::PhaseConfiguration(std::size_t rows, std::size_t cols, std::size_t fill)
    : rows_(rows), cols_(cols), indices_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw InvalidArgument("phase configuration needs at least one row and column");
}

PhaseConfiguration::PhaseConfiguration(std::size_t rows, std::size_t cols, std::vector<std::size_t> indices)
    : rows_(rows), cols_(cols), indices_(std::move(indices)) {
    if (rows == 0 || cols == 0) throw InvalidArgument("phase configuration needs at least one row and column");
    if (indices_.size() != rows * cols) throw InvalidArgument("phase configuration size does not match its grid");
}

void PhaseConfiguration::validate(const PhaseCodebook& codebook) const {
    for (std::size_t idx : indices_) {
        if (idx >= codebook.size()) throw InvalidArgument("phase configuration index " + std::to_string(idx) + " outside the codebook");
    }
}

FeedbackChannel::FeedbackChannel(Oracle oracle, double noise_variance, std::uint64_t seed)
    : oracle_(std::move(oracle)), noise_stddev_(std::sqrt(noise_variance)), rng_(seed) {
    if (!oracle_) throw InvalidArgument("feedback channel needs a power oracle");
    if (!(noise_variance >= 0.0)) throw InvalidArgument("feedback noise variance must be non-negative");
}

FeedbackChannel FeedbackChannel::from_link(const LinkBudget& link, double noise_variance, std::uint64_t seed) {
    return FeedbackChannel([&link](const PhaseConfiguration& c) { return link.received_power(link.states(c.indices())); },
                           noise_variance, seed);
}

double FeedbackChannel::measure(const PhaseConfiguration& config) {
    ++queries_;
    double p = oracle_(config);
    if (noise_stddev_ > 0.0) {
        std::normal_distribution<double> noise(0.0, noise_stddev_);
        p = std::max(0.0, p + noise(rng_));
    }
    return p;
}

bool is_monotone(const SearchTrace& trace) {
    double last = -std::numeric_limits<double>::infinity();
    for (const TraceEntry& e : trace) {
        if (!e.accepted) continue;
        if (e.power < last) return false;
        last = e.power;
    }
    return true;
}

SearchResult blind_rowcol_search(const PhaseCodebook& codebook, PhaseConfiguration initial, FeedbackChannel& feedback,
                                 std::size_t passes) {
    if (passes < 1) throw InvalidArgument("blind search needs at least one pass");
    initial.validate(codebook);
    const std::size_t levels = codebook.size();
    SearchResult result{std::move(initial), {}};
    PhaseConfiguration& config = result.configuration;

    double best = feedback.measure(config);
    result.trace.push_back({0, true, best});
    std::size_t step = 1;

    // Rotates one line by one codebook step, keeps it if the reading does not drop.
    auto try_line = [&](auto&& units) {
        for (std::size_t n : units) config[n] = (config[n] + 1) % levels;
        const double p = feedback.measure(config);
        const bool keep = p >= best;
        if (keep) {
            best = p;
        } else {
            for (std::size_t n : units) config[n] = (config[n] + levels - 1) % levels;
        }
        result.trace.push_back({step++, keep, p});
    };

    std::vector<std::size_t> line;
    for (std::size_t pass = 0; pass < passes; ++pass) {
        for (std::size_t col = 0; col < config.cols(); ++col) {
            line.clear();
            for (std::size_t row = 0; row < config.rows(); ++row) line.push_back(row * config.cols() + col);
            try_line(line);
        }
        for (std::size_t row = 0; row < config.rows(); ++row) {
            line.clear();
            for (std::size_t col = 0; col < config.cols(); ++col) line.push_back(row * config.cols() + col);
            try_line(line);
        }
    }
    return result;
}

SearchResult greedy_element_search(const PhaseCodebook& codebook, PhaseConfiguration initial, FeedbackChannel& feedback,
                                   std::size_t max_rounds) {
    if (max_rounds < 1) throw InvalidArgument("greedy search needs at least one round");
    initial.validate(codebook);
    const std::size_t levels = codebook.size();
    SearchResult result{std::move(initial), {}};
    PhaseConfiguration& config = result.configuration;

    double best = feedback.measure(config);
    result.trace.push_back({0, true, best});
    std::size_t step = 1;

    for (std::size_t round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (std::size_t n = 0; n < config.size(); ++n) {
            const std::size_t current = config[n];
            std::size_t chosen = current;
            for (std::size_t k = 1; k < levels; ++k) {
                config[n] = (current + k) % levels;
                const double p = feedback.measure(config);
                const bool better = p > best;
                if (better) {
                    best = p;
                    chosen = config[n];
                }
                result.trace.push_back({step++, better, p});
            }
            config[n] = chosen;
            changed = changed || chosen != current;
        }
        if (!changed) break;
    }
    return result;
}

PhaseConfiguration nearest_quantize(std::span<const double> phases, const PhaseCodebook& codebook, const ArrayLayout& layout) {
    if (phases.size() != layout.size()) throw InvalidArgument("one phase per element required for quantization");
    constexpr double kTieTolerance = 1e-12;
    const std::vector<double> entries = codebook_phases(codebook);
    std::vector<std::size_t> indices(phases.size());
    std::vector<double> dist(entries.size());
    for (std::size_t n = 0; n < phases.size(); ++n) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const double d = wrap_phase(phases[n] - entries[i]);
            dist[i] = std::min(d, kTwoPi - d);
        }
        const double nearest = *std::min_element(dist.begin(), dist.end());
        std::size_t i = 0;
        while (dist[i] > nearest + kTieTolerance) ++i;
        indices[n] = i;
    }
    return PhaseConfiguration(layout.n_rows, layout.n_cols, std::move(indices));
}

BruteForceResult brute_force_optimum(const LinkBudget& link) {
    const Scenario& s = link.scenario();
    const std::size_t units = link.size();
    if (static_cast<std::size_t>(s.codebook.bits) * units > kBruteForceMaxBits) {
        throw SearchSpaceTooLarge("exhaustive search over 2^" + std::to_string(s.codebook.bits * units) + " configurations refused (limit 2^" +
                                  std::to_string(kBruteForceMaxBits) + ")");
    }
    const std::size_t levels = s.codebook.size();
    PhaseConfiguration config = PhaseConfiguration::uniform(s.layout);
    BruteForceResult best{config, -1.0};
    // Odometer with the last unit fastest: lexicographic order, so '>' keeps the smallest maximizer.
    while (true) {
        const double p = link.received_power(link.states(config.indices()));
        if (p > best.power) best = {config, p};
        std::size_t n = units;
        while (n > 0) {
            --n;
            if (++config[n] < levels) break;
            config[n] = 0;
            if (n == 0) return best;
        }
    }
}

std::vector<std::size_t> single_element_improvements(const LinkBudget& link, const PhaseConfiguration& config) {
    const std::size_t levels = link.scenario().codebook.size();
    const double base = link.received_power(link.states(config.indices()));
    std::vector<std::size_t> improvable;
    PhaseConfiguration probe = config;
    for (std::size_t n = 0; n < probe.size(); ++n) {
        const std::size_t current = probe[n];
        for (std::size_t k = 0; k < levels; ++k) {
            if (k == current) continue;
            probe[n] = k;
            if (link.received_power(link.states(probe.indices())) > base) {
                improvable.push_back(n);
                break;
            }
        }
        probe[n] = current;
    }
    return improvable;
}

}  // namespace tris
