#include "tris/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "tris/error.hpp"

namespace tris {

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::RxDistance: return "rx_distance";
        case SweepVariable::RxZenith: return "rx_zenith";
        case SweepVariable::AmplifierCurrent: return "amplifier_current";
        case SweepVariable::PatternAngle: return "pattern_angle";
    }
    return "unknown";
}

std::string_view to_string(BeamformingMethod m) {
    switch (m) {
        case BeamformingMethod::None: return "none";
        case BeamformingMethod::Continuous: return "continuous";
        case BeamformingMethod::Quantized: return "quantized";
        case BeamformingMethod::Blind: return "blind";
        case BeamformingMethod::Greedy: return "greedy";
    }
    return "unknown";
}

SweepVariable parse_sweep_variable(std::string_view s) {
    for (auto v : {SweepVariable::RxDistance, SweepVariable::RxZenith, SweepVariable::AmplifierCurrent, SweepVariable::PatternAngle}) {
        if (s == to_string(v)) return v;
    }
    throw InvalidArgument("unknown sweep variable '" + std::string(s) + "'");
}

BeamformingMethod parse_beamforming_method(std::string_view s) {
    for (auto m : {BeamformingMethod::None, BeamformingMethod::Continuous, BeamformingMethod::Quantized, BeamformingMethod::Blind,
                   BeamformingMethod::Greedy}) {
        if (s == to_string(m)) return m;
    }
    throw InvalidArgument("unknown beamforming method '" + std::string(s) + "'");
}

std::string digest_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

std::string configuration_digest(const PhaseConfiguration& config) {
    std::string s = fmt::format("{}x{}:", config.rows(), config.cols());
    for (std::size_t idx : config.indices()) s += fmt::format("{},", idx);
    return digest_hex(s);
}

std::string phases_digest(std::span<const double> phases) {
    std::string s;
    for (double p : phases) s += fmt::format("{:016x}", std::bit_cast<std::uint64_t>(p));
    return digest_hex(s);
}

AppliedBeamforming apply_beamforming(const LinkBudget& link, const BeamformingOptions& options) {
    const Scenario& s = link.scenario();
    AppliedBeamforming beam;
    beam.method = options.method;
    switch (options.method) {
        case BeamformingMethod::None:
            beam.configuration = PhaseConfiguration::uniform(s.layout);
            break;
        case BeamformingMethod::Continuous:
            beam.phases = link.continuous_optimal_phases(options.phase_constant);
            beam.digest = phases_digest(beam.phases);
            return beam;
        case BeamformingMethod::Quantized:
            beam.configuration = nearest_quantize(link.continuous_optimal_phases(options.phase_constant), s.codebook, s.layout);
            break;
        case BeamformingMethod::Blind: {
            FeedbackChannel feedback = FeedbackChannel::from_link(link, s.noise_variance * s.noise_variance, options.seed);
            beam.configuration = blind_rowcol_search(s.codebook, PhaseConfiguration::uniform(s.layout), feedback, options.passes).configuration;
            beam.feedback_queries = feedback.queries();
            break;
        }
        case BeamformingMethod::Greedy: {
            FeedbackChannel feedback = FeedbackChannel::from_link(link, s.noise_variance * s.noise_variance, options.seed);
            beam.configuration =
                greedy_element_search(s.codebook, PhaseConfiguration::uniform(s.layout), feedback, options.max_rounds).configuration;
            beam.feedback_queries = feedback.queries();
            break;
        }
    }
    beam.phases.resize(beam.configuration->size());
    for (std::size_t n = 0; n < beam.phases.size(); ++n) beam.phases[n] = s.codebook.phase((*beam.configuration)[n]);
    beam.digest = configuration_digest(*beam.configuration);
    return beam;
}

namespace {

std::vector<UnitState> default_states(const LinkBudget& link) { return link.states(std::vector<std::size_t>(link.size(), 0)); }

SweepRow measure_row(const LinkBudget& link, const AppliedBeamforming& beam, double value) {
    const auto states = default_states(link);
    SweepRow row;
    row.value = value;
    const double p = link.received_power(states, beam.phases);
    row.received_power_dbm = p > 0.0 ? watts_to_dbm(p) : -std::numeric_limits<double>::infinity();
    try {
        row.path_loss_db = power_to_db(link.path_loss(states, beam.phases));
    } catch (const InfinitePathLoss&) {
        row.path_loss_db = std::numeric_limits<double>::infinity();
    }
    row.config_digest = beam.digest;
    return row;
}

BeamformingOptions point_options(const BeamformingOptions& options, std::size_t point) {
    BeamformingOptions o = options;
    o.seed = options.seed + point;
    return o;
}

void require_variable(const SweepSpec& spec, SweepVariable expected) {
    if (spec.variable != expected) {
        throw InvalidArgument("sweep over " + std::string(to_string(spec.variable)) + " passed to the " + std::string(to_string(expected)) + " runner");
    }
}

}  // namespace

double frozen_received_power(const LinkBudget& link, const AppliedBeamforming& beam) {
    return link.received_power(default_states(link), beam.phases);
}

std::vector<double> sweep_grid(double start, double stop, double step) {
    if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step))) throw InvalidArgument("sweep grid bounds must be finite");
    if (!(step > 0.0)) throw InvalidArgument("sweep step must be positive");
    if (start > stop) throw InvalidArgument("sweep start must not exceed stop");
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    if (count > 10'000'000) throw InvalidArgument("sweep grid too large");
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        // snap to 1e-9 so decimal steps print and compare cleanly
        grid[k] = std::round((start + static_cast<double>(k) * step) * 1e9) / 1e9;
    }
    return grid;
}

double rx_local_zenith(const SphericalPose& rx_pose) {
    return rx_pose.theta > kPi / 2.0 ? kPi - rx_pose.theta : rx_pose.theta;
}

SphericalPose rx_pose_at(const SphericalPose& rx_template, double r, double local_zenith) {
    double azimuth = rx_template.phi;
    if (local_zenith < 0.0) {
        local_zenith = -local_zenith;
        azimuth += kPi;
    }
    const bool behind = rx_template.theta > kPi / 2.0;
    return SphericalPose{r, behind ? kPi - local_zenith : local_zenith, wrap_phase(azimuth)};
}

SweepResult distance_sweep(const Scenario& base, const SweepSpec& spec) {
    require_variable(spec, SweepVariable::RxDistance);
    const auto grid = sweep_grid(spec.start, spec.stop, spec.step);
    if (grid.front() <= 0.0) throw InvalidArgument("RX distances must be positive");
    const double zenith = rx_local_zenith(base.rx_pose);
    SweepResult result{spec.variable, {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Scenario s = base;
        s.rx_pose = rx_pose_at(base.rx_pose, grid[k], zenith);
        const LinkBudget link(std::move(s));
        result.rows.push_back(measure_row(link, apply_beamforming(link, point_options(spec.beamforming, k)), grid[k]));
    }
    return result;
}

SweepResult angle_sweep(const Scenario& base, const SweepSpec& spec) {
    require_variable(spec, SweepVariable::RxZenith);
    const auto grid = sweep_grid(spec.start, spec.stop, spec.step);
    if (grid.front() < 0.0 || grid.back() >= 90.0) throw InvalidArgument("RX zenith angles must lie in [0, 90) degrees");
    SweepResult result{spec.variable, {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Scenario s = base;
        s.rx_pose = rx_pose_at(base.rx_pose, base.rx_pose.r, deg_to_rad(grid[k]));
        const LinkBudget link(std::move(s));
        result.rows.push_back(measure_row(link, apply_beamforming(link, point_options(spec.beamforming, k)), grid[k]));
    }
    return result;
}

SweepResult gain_sweep(const Scenario& base, std::span<const double> array_currents, const BeamformingOptions& options) {
    if (array_currents.empty()) throw InvalidArgument("gain sweep needs at least one supply current");
    const LinkBudget reference(base);
    const AppliedBeamforming beam = apply_beamforming(reference, options);
    const auto units = static_cast<double>(base.layout.size());
    SweepResult result{SweepVariable::AmplifierCurrent, {}};
    for (double current : array_currents) {
        if (!(current >= 0.0)) throw InvalidArgument("supply currents must be non-negative");
        Scenario s = base;
        s.unit_current = current / units;
        const LinkBudget link(std::move(s));
        result.rows.push_back(measure_row(link, beam, current));
    }
    return result;
}

PatternMetrics pattern_metrics(std::span<const double> angles_deg, std::span<const double> relative_db) {
    if (angles_deg.empty() || angles_deg.size() != relative_db.size()) throw InvalidArgument("pattern needs matching, non-empty angle and power grids");
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    const std::size_t n = relative_db.size();
    const std::size_t peak = static_cast<std::size_t>(std::max_element(relative_db.begin(), relative_db.end()) - relative_db.begin());
    PatternMetrics m;
    m.peak_angle_deg = angles_deg[peak];
    const double half = relative_db[peak] - 3.0;

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double a0 = angles_deg[inside], a1 = angles_deg[outside];
        const double v0 = relative_db[inside], v1 = relative_db[outside];
        if (!std::isfinite(v1)) return a1;
        return a0 + (half - v0) / (v1 - v0) * (a1 - a0);
    };

    double left = kNaN, right = kNaN;
    for (std::size_t i = peak; i > 0; --i) {
        if (relative_db[i - 1] < half) {
            left = crossing(i, i - 1);
            break;
        }
    }
    for (std::size_t i = peak; i + 1 < n; ++i) {
        if (relative_db[i + 1] < half) {
            right = crossing(i, i + 1);
            break;
        }
    }
    m.hpbw_deg = right - left;

    // main lobe ends at the first local minimum on each side
    std::size_t lo = peak, hi = peak;
    while (lo > 0 && relative_db[lo - 1] <= relative_db[lo]) --lo;
    while (hi + 1 < n && relative_db[hi + 1] <= relative_db[hi]) ++hi;
    double sidelobe = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lo; ++i) sidelobe = std::max(sidelobe, relative_db[i]);
    for (std::size_t i = hi + 1; i < n; ++i) sidelobe = std::max(sidelobe, relative_db[i]);
    m.peak_to_sidelobe_db = std::isfinite(sidelobe) ? relative_db[peak] - sidelobe : kNaN;
    return m;
}

PatternResult radiation_pattern(const Scenario& base, double steering_deg, std::span<const double> observation_deg,
                                const BeamformingOptions& options) {
    if (observation_deg.empty()) throw InvalidArgument("pattern observation grid is empty");
    for (double a : observation_deg) {
        if (!(a > -90.0 && a < 90.0)) throw InvalidArgument("pattern angles must lie strictly inside (-90, 90) degrees");
    }
    if (!(steering_deg > -90.0 && steering_deg < 90.0)) throw InvalidArgument("steering angle must lie strictly inside (-90, 90) degrees");

    Scenario steer = base;
    steer.rx_pose = rx_pose_at(base.rx_pose, base.rx_pose.r, deg_to_rad(steering_deg));
    const AppliedBeamforming beam = apply_beamforming(LinkBudget(steer), options);

    PatternResult result;
    result.steering_deg = steering_deg;
    result.config_digest = beam.digest;
    for (double a : observation_deg) {
        Scenario s = base;
        s.rx_pose = rx_pose_at(base.rx_pose, base.rx_pose.r, deg_to_rad(a));
        const SweepRow row = measure_row(LinkBudget(std::move(s)), beam, a);
        result.angles_deg.push_back(a);
        result.received_power_dbm.push_back(row.received_power_dbm);
        result.path_loss_db.push_back(row.path_loss_db);
    }
    const double peak = *std::max_element(result.received_power_dbm.begin(), result.received_power_dbm.end());
    for (double p : result.received_power_dbm) result.relative_db.push_back(p - peak);
    result.metrics = pattern_metrics(result.angles_deg, result.relative_db);
    result.metrics.peak_power_dbm = peak;
    return result;
}

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec) {
    switch (spec.variable) {
        case SweepVariable::RxDistance: return distance_sweep(base, spec);
        case SweepVariable::RxZenith: return angle_sweep(base, spec);
        case SweepVariable::AmplifierCurrent: return gain_sweep(base, spec.currents, spec.beamforming);
        case SweepVariable::PatternAngle: {
            const auto grid = sweep_grid(spec.start, spec.stop, spec.step);
            const PatternResult pattern = radiation_pattern(base, spec.steering_deg, grid, spec.beamforming);
            SweepResult result{spec.variable, {}};
            for (std::size_t k = 0; k < grid.size(); ++k) {
                result.rows.push_back({grid[k], pattern.received_power_dbm[k], pattern.path_loss_db[k], pattern.config_digest});
            }
            return result;
        }
    }
    throw InvalidArgument("unknown sweep variable");
}

}  // namespace tris
