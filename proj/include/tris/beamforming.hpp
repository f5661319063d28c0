#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "tris/link_budget.hpp"

namespace tris {

/// Grid of codebook indices, row-major over an N_x x N_y array.
class PhaseConfiguration {
public:
    PhaseConfiguration(std::size_t rows, std::size_t cols, std::size_t fill = 0);
    PhaseConfiguration(std::size_t rows, std::size_t cols, std::vector<std::size_t> indices);

    static PhaseConfiguration uniform(const ArrayLayout& layout, std::size_t index = 0) {
        return PhaseConfiguration(layout.n_rows, layout.n_cols, index);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return indices_.size(); }

    /// 0-based row and column.
    std::size_t& at(std::size_t row, std::size_t col) { return indices_[row * cols_ + col]; }
    std::size_t at(std::size_t row, std::size_t col) const { return indices_[row * cols_ + col]; }
    std::size_t& operator[](std::size_t n) { return indices_[n]; }
    std::size_t operator[](std::size_t n) const { return indices_[n]; }

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

    /// Throws InvalidArgument when any index is outside the codebook.
    void validate(const PhaseCodebook& codebook) const;

    friend bool operator==(const PhaseConfiguration&, const PhaseConfiguration&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::size_t> indices_;
};

/// Received-power feedback as seen by a blind optimizer: an oracle reading plus
/// Gaussian measurement noise (floored at zero), deterministic under the seed.
class FeedbackChannel {
public:
    using Oracle = std::function<double(const PhaseConfiguration&)>;

    FeedbackChannel(Oracle oracle, double noise_variance = 0.0, std::uint64_t seed = 0);

    /// Noiseless model oracle over the link's uniform unit states.
    static FeedbackChannel from_link(const LinkBudget& link, double noise_variance = 0.0, std::uint64_t seed = 0);

    double measure(const PhaseConfiguration& config);
    std::size_t queries() const noexcept { return queries_; }

private:
    Oracle oracle_;
    double noise_stddev_;
    std::mt19937_64 rng_;
    std::size_t queries_ = 0;
};

struct TraceEntry {
    std::size_t step = 0;
    bool accepted = false;
    double power = 0.0;  // measured feedback power, W
};

using SearchTrace = std::vector<TraceEntry>;

struct SearchResult {
    PhaseConfiguration configuration;
    SearchTrace trace;
};

/// True when the accepted powers of the trace never decrease.
bool is_monotone(const SearchTrace& trace);

/// Blind column/row search. Each pass rotates every column (1..N_y) and then every
/// row (1..N_x) by one codebook step, keeping the rotation when the new reading is at
/// least the best reading so far. Issues exactly 1 + passes * (N_x + N_y) queries.
SearchResult blind_rowcol_search(const PhaseCodebook& codebook, PhaseConfiguration initial, FeedbackChannel& feedback,
                                 std::size_t passes);

/// Cyclic coordinate descent: each unit in turn takes the codebook index with the best
/// reading given all others. Stops after a round without changes or after max_rounds.
SearchResult greedy_element_search(const PhaseCodebook& codebook, PhaseConfiguration initial, FeedbackChannel& feedback,
                                   std::size_t max_rounds);

/// Maps each phase to the circularly nearest codebook entry, ties to the lower index.
PhaseConfiguration nearest_quantize(std::span<const double> phases, const PhaseCodebook& codebook, const ArrayLayout& layout);

struct BruteForceResult {
    PhaseConfiguration configuration;
    double power = 0.0;
};

inline constexpr unsigned kBruteForceMaxBits = 20;

/// Exhaustive maximizer of noiseless received power; ties go to the lexicographically
/// smallest configuration. Refuses search spaces above 2^20 configurations.
BruteForceResult brute_force_optimum(const LinkBudget& link);

/// Units that a single codebook change would improve (noiseless); empty means 1-element stable.
std::vector<std::size_t> single_element_improvements(const LinkBudget& link, const PhaseConfiguration& config);

}  // namespace tris
