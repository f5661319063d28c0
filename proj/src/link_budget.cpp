#include "tris/link_budget.hpp"

#include <cmath>
#include <string>

#include "tris/error.hpp"

namespace tris {

namespace {

constexpr double kSixteenPiSq = 16.0 * kPi * kPi;

}  // namespace

double power_to_db(double ratio) { return 10.0 * std::log10(ratio); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }
double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

LinkBudget::LinkBudget(Scenario scenario) : scenario_(std::move(scenario)) {
    scenario_.validate();
    const CartesianPoint tx = scenario_.tx_position();
    const CartesianPoint rx = scenario_.rx_position();
    const double lambda = scenario_.wavelength();
    const std::size_t n_units = scenario_.layout.size();
    paths_.reserve(n_units);
    for (std::size_t n = 0; n < n_units; ++n) {
        ElementPath p;
        p.position = element_position(scenario_.layout, element_index(scenario_.layout, n));
        p.tx_distance = distance(tx, p.position);
        p.rx_distance = distance(rx, p.position);
        p.tx_zenith = departure_zenith(tx, p.position);
        p.rx_zenith = departure_zenith(rx, p.position);
        p.tx_gain = antenna_gain(scenario_.tx_antenna, p.tx_zenith);
        p.rx_gain = antenna_gain(scenario_.rx_antenna, p.rx_zenith);
        p.propagation_phase = kTwoPi * (p.tx_distance + p.rx_distance) / lambda;
        paths_.push_back(p);
    }
    phase_errors_.assign(n_units, 0.0);
    if (scenario_.jitter) {
        JitterSampler sampler(*scenario_.jitter);
        for (double& e : phase_errors_) e = sampler.sample();
    }
}

std::vector<UnitState> LinkBudget::states(const std::vector<std::size_t>& phase_indices) const {
    return scenario_.unit_states(phase_indices);
}

void LinkBudget::check_size(std::size_t n) const {
    if (n != paths_.size()) {
        throw InvalidArgument("expected one unit state per element (" + std::to_string(paths_.size()) + "), got " + std::to_string(n));
    }
}

double LinkBudget::sigma(std::size_t n, const UnitState& state) const {
    const ElementPath& p = paths_[n];
    return unit_rcs(state, scenario_.amplifier, p.tx_zenith, p.rx_zenith, scenario_.aperture());
}

std::vector<std::complex<double>> LinkBudget::terms(std::span<const UnitState> states) const {
    check_size(states.size());
    std::vector<double> phases(states.size());
    for (std::size_t n = 0; n < states.size(); ++n) phases[n] = scenario_.codebook.phase(states[n].phase_index);
    return terms(states, phases);
}

std::vector<std::complex<double>> LinkBudget::terms(std::span<const UnitState> states, std::span<const double> phases) const {
    check_size(states.size());
    check_size(phases.size());
    std::vector<std::complex<double>> out(states.size());
    for (std::size_t n = 0; n < states.size(); ++n) {
        const ElementPath& p = paths_[n];
        const double weight = std::sqrt(p.tx_gain * p.rx_gain) / (p.tx_distance * p.rx_distance);
        out[n] = std::polar(weight * sigma(n, states[n]), phases[n] + phase_errors_[n] - p.propagation_phase);
    }
    return out;
}

double LinkBudget::coherent_magnitude_sq(const std::vector<std::complex<double>>& terms) const {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& t : terms) sum += t;
    return std::norm(sum);
}

double LinkBudget::received_power(std::span<const UnitState> states) const {
    return scenario_.tx_power / kSixteenPiSq * coherent_magnitude_sq(terms(states));
}

double LinkBudget::received_power(std::span<const UnitState> states, std::span<const double> phases) const {
    return scenario_.tx_power / kSixteenPiSq * coherent_magnitude_sq(terms(states, phases));
}

double LinkBudget::received_power_expanded(std::span<const UnitState> states) const {
    check_size(states.size());
    const ElementAperture aperture = scenario_.aperture();
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t n = 0; n < states.size(); ++n) {
        const ElementPath& p = paths_[n];
        const UnitState& s = states[n];
        const double gu = scenario_.amplifier.gain_linear(s.amplifier_current);
        const double at = effective_area(aperture, p.tx_zenith);
        const double ar = effective_area(aperture, p.rx_zenith);
        const double magnitude = std::sqrt(p.tx_gain * p.rx_gain * gu * at * ar) / (p.tx_distance * p.rx_distance) * s.attenuation;
        const double phi = scenario_.codebook.phase(s.phase_index) + phase_errors_[n];
        sum += std::polar(magnitude, phi - p.propagation_phase);
    }
    return scenario_.tx_power / kSixteenPiSq * std::norm(sum);
}

namespace {

double path_loss_from(double magnitude_sq) {
    if (!(magnitude_sq > 0.0)) throw InfinitePathLoss("coherent sum vanished; path loss is infinite");
    return kSixteenPiSq / magnitude_sq;
}

}  // namespace

double LinkBudget::path_loss(std::span<const UnitState> states) const {
    return path_loss_from(coherent_magnitude_sq(terms(states)));
}

double LinkBudget::path_loss(std::span<const UnitState> states, std::span<const double> phases) const {
    return path_loss_from(coherent_magnitude_sq(terms(states, phases)));
}

LinkResult LinkBudget::evaluate(std::span<const UnitState> states) const {
    LinkResult r;
    r.per_element_terms = terms(states);
    const double mag = coherent_magnitude_sq(r.per_element_terms);
    r.received_power = scenario_.tx_power / kSixteenPiSq * mag;
    r.path_loss = path_loss_from(mag);
    r.path_loss_db = power_to_db(r.path_loss);
    return r;
}

std::complex<double> LinkBudget::received_signal(std::span<const UnitState> states, std::complex<double> symbol,
                                                 std::mt19937_64* noise) const {
    check_size(states.size());
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t n = 0; n < states.size(); ++n) {
        const ElementIndex idx = element_index(scenario_.layout, n);
        const std::complex<double> f = tx_channel_coefficient(scenario_, idx).value();
        const std::complex<double> g = rx_channel_coefficient(scenario_, idx).value();
        const std::complex<double> gamma =
            unit_transmission_coefficient(states[n], scenario_.codebook, scenario_.amplifier).value() * std::polar(1.0, phase_errors_[n]);
        // Gamma carries sqrt(G_u); the projected areas come in through f and g.
        sum += f * gamma * g;
    }
    std::complex<double> y = sum * std::sqrt(scenario_.tx_power) * symbol;
    if (noise != nullptr && scenario_.noise_variance > 0.0) {
        std::normal_distribution<double> component(0.0, std::sqrt(scenario_.noise_variance / 2.0));
        const double re = component(*noise);
        const double im = component(*noise);
        y += std::complex<double>{re, im};
    }
    return y;
}

std::vector<double> LinkBudget::continuous_optimal_phases(double c) const {
    std::vector<double> phases(paths_.size());
    for (std::size_t n = 0; n < paths_.size(); ++n) phases[n] = wrap_phase(c + paths_[n].propagation_phase);
    return phases;
}

double LinkBudget::max_received_power(std::span<const UnitState> states) const {
    check_size(states.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < states.size(); ++n) {
        const ElementPath& p = paths_[n];
        sum += std::sqrt(p.tx_gain * p.rx_gain) / (p.tx_distance * p.rx_distance) * sigma(n, states[n]);
    }
    return scenario_.tx_power / kSixteenPiSq * sum * sum;
}

double LinkBudget::min_path_loss(std::span<const UnitState> states) const {
    check_size(states.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < states.size(); ++n) {
        const ElementPath& p = paths_[n];
        sum += std::sqrt(p.tx_gain * p.rx_gain) / (p.tx_distance * p.rx_distance) * sigma(n, states[n]);
    }
    return path_loss_from(sum * sum);
}

double LinkBudget::max_received_power() const {
    return max_received_power(states(std::vector<std::size_t>(size(), 0)));
}

double LinkBudget::min_path_loss() const { return min_path_loss(states(std::vector<std::size_t>(size(), 0))); }

double propagation_phase(const Scenario& scenario, ElementIndex element) {
    const CartesianPoint unit = element_position(scenario.layout, element);
    return kTwoPi * (distance(scenario.tx_position(), unit) + distance(scenario.rx_position(), unit)) / scenario.wavelength();
}

std::complex<double> received_signal(const Scenario& scenario, std::span<const UnitState> states,
                                     std::complex<double> symbol, std::mt19937_64* noise) {
    return LinkBudget(scenario).received_signal(states, symbol, noise);
}

double received_power(const Scenario& scenario, std::span<const UnitState> states) {
    return LinkBudget(scenario).received_power(states);
}

double path_loss(const Scenario& scenario, std::span<const UnitState> states) { return LinkBudget(scenario).path_loss(states); }

std::vector<double> continuous_optimal_phases(const Scenario& scenario, double c) {
    return LinkBudget(scenario).continuous_optimal_phases(c);
}

double max_received_power(const Scenario& scenario) { return LinkBudget(scenario).max_received_power(); }

double min_path_loss(const Scenario& scenario) { return LinkBudget(scenario).min_path_loss(); }

}  // namespace tris
