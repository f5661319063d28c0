#include "tris/ris_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tris/error.hpp"

namespace tris {

double PhaseCodebook::step() const noexcept { return kTwoPi / static_cast<double>(size()); }

double PhaseCodebook::phase(std::size_t index) const {
    if (index >= size()) throw InvalidArgument("phase index " + std::to_string(index) + " outside a " + std::to_string(size()) + "-entry codebook");
    return offset + static_cast<double>(index) * step();
}

void PhaseCodebook::validate() const {
    if (bits < 1 || bits > 16) throw InvalidArgument("codebook bits must lie in [1, 16]");
    // psi in [0, 2pi - (2^m - 1) pi / 2^(m-1)), i.e. less than one step
    if (!(offset >= 0.0 && offset < step())) throw InvalidArgument("codebook offset must lie in [0, one phase step)");
}

std::vector<double> codebook_phases(const PhaseCodebook& codebook) {
    codebook.validate();
    std::vector<double> phases(codebook.size());
    for (std::size_t i = 0; i < phases.size(); ++i) phases[i] = codebook.phase(i);
    return phases;
}

AmplifierModel::AmplifierModel(std::vector<Point> calibration, double max_current)
    : calibration_(std::move(calibration)), max_current_(max_current) {
    if (calibration_.empty()) throw InvalidArgument("amplifier calibration needs at least one point");
    if (!(max_current_ > 0.0)) throw InvalidArgument("amplifier max current must be positive");
    for (std::size_t i = 0; i < calibration_.size(); ++i) {
        const Point& p = calibration_[i];
        if (!std::isfinite(p.current) || !std::isfinite(p.gain_db) || p.current < 0.0) {
            throw InvalidArgument("amplifier calibration point " + std::to_string(i) + " is not a finite non-negative current");
        }
        if (i > 0 && !(p.current > calibration_[i - 1].current)) throw InvalidArgument("amplifier calibration currents must be strictly increasing");
        if (i > 0 && p.gain_db < calibration_[i - 1].gain_db) throw InvalidArgument("amplifier calibration gains must be non-decreasing");
    }
    if (calibration_.back().current > max_current_) throw InvalidArgument("amplifier calibration exceeds the max current");
}

AmplifierModel AmplifierModel::measured_default(std::size_t units) {
    if (units == 0) throw InvalidArgument("amplifier default needs at least one unit");
    const double n = static_cast<double>(units);
    return AmplifierModel({{kArrayCurrentLow / n, 0.0}, {kArrayCurrentHigh / n, kMeasuredGainSwingDb}}, kDefaultMaxUnitCurrent);
}

double AmplifierModel::gain_db(double current) const {
    if (!(current >= 0.0)) throw InvalidArgument("amplifier current must be non-negative");
    if (current > max_current_) {
        throw SupplyBudgetExceeded("amplifier current " + std::to_string(current) + " A exceeds the " + std::to_string(max_current_) + " A budget");
    }
    if (current <= calibration_.front().current) return calibration_.front().gain_db;
    if (current >= calibration_.back().current) return calibration_.back().gain_db;
    auto hi = std::upper_bound(calibration_.begin(), calibration_.end(), current,
                               [](double c, const Point& p) { return c < p.current; });
    auto lo = std::prev(hi);
    const double t = (current - lo->current) / (hi->current - lo->current);
    return lo->gain_db + t * (hi->gain_db - lo->gain_db);
}

double AmplifierModel::gain_linear(double current) const { return std::pow(10.0, gain_db(current) / 10.0); }

double amplifier_gain(const AmplifierModel& amp, double current) { return amp.gain_db(current); }

JitterSampler::JitterSampler(const PhaseJitterModel& model) : max_error_(model.max_error), rng_(model.seed) {
    if (!(max_error_ >= 0.0)) throw InvalidArgument("phase jitter bound must be non-negative");
}

double JitterSampler::sample() {
    if (max_error_ == 0.0) return 0.0;
    // canonical draw in [0, 1) mapped onto [-max, max)
    const double u = std::generate_canonical<double, 53>(rng_);
    return (2.0 * u - 1.0) * max_error_;
}

namespace {

void check_state(const UnitState& state, const PhaseCodebook& codebook) {
    if (state.phase_index >= codebook.size()) throw InvalidArgument("unit phase index outside the codebook");
    if (!(state.attenuation >= 0.0 && state.attenuation <= 1.0)) throw InvalidArgument("unit attenuation must lie in [0, 1]");
}

}  // namespace

ComplexCoefficient unit_transmission_coefficient(const UnitState& state, const PhaseCodebook& codebook,
                                                 const AmplifierModel& amp, JitterSampler* jitter) {
    check_state(state, codebook);
    const double amplitude = state.attenuation * std::pow(10.0, amp.gain_db(state.amplifier_current) / 20.0);
    double phase = codebook.phase(state.phase_index);
    if (jitter != nullptr) phase += jitter->sample();
    return ComplexCoefficient{amplitude, wrap_phase(phase)};
}

double unit_rcs(const UnitState& state, const AmplifierModel& amp, double incidence_zenith, double departure_zenith,
                const ElementAperture& aperture) {
    if (!(state.attenuation >= 0.0 && state.attenuation <= 1.0)) throw InvalidArgument("unit attenuation must lie in [0, 1]");
    const double gain = amp.gain_linear(state.amplifier_current);
    return state.attenuation *
           std::sqrt(gain * effective_area(aperture, incidence_zenith) * effective_area(aperture, departure_zenith));
}

namespace {

// Table rows in codebook order: 0, 90, 180, 270 degrees.
constexpr std::array<ControlWord, 4> kSwitchTable{{
    {false, true, true},
    {false, false, true},
    {false, false, false},
    {false, true, false},
}};

}  // namespace

std::string ControlWord::to_string() const {
    return std::string{vcc1 ? '1' : '0', vcc2 ? '1' : '0', vcc3 ? '1' : '0'};
}

ControlWord ControlWord::parse(std::string_view bits) {
    if (bits.size() != 3) throw InvalidControlWord("control word must have exactly 3 bits, got '" + std::string(bits) + "'");
    std::array<bool, 3> v{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (bits[i] != '0' && bits[i] != '1') throw InvalidControlWord("control word must be binary, got '" + std::string(bits) + "'");
        v[i] = bits[i] == '1';
    }
    return ControlWord{v[0], v[1], v[2]};
}

ControlWord encode_control(std::size_t phase_index) {
    if (phase_index >= kSwitchTable.size()) throw InvalidControlWord("SP4T switch has no state for phase index " + std::to_string(phase_index));
    return kSwitchTable[phase_index];
}

std::size_t decode_control(const ControlWord& word) {
    for (std::size_t i = 0; i < kSwitchTable.size(); ++i) {
        if (kSwitchTable[i] == word) return i;
    }
    throw InvalidControlWord("control word " + word.to_string() + " is not an SP4T switch state");
}

}  // namespace tris
