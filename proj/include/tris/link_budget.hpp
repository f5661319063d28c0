#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tris/scenario.hpp"

namespace tris {

double power_to_db(double ratio);
double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);

/// Geometry of the TX -> unit -> RX path through one element.
struct ElementPath {
    CartesianPoint position;
    double tx_distance = 0.0;
    double rx_distance = 0.0;
    double tx_zenith = 0.0;  // incidence, from the array normal
    double rx_zenith = 0.0;  // departure
    double tx_gain = 0.0;    // antenna gains toward the unit, linear
    double rx_gain = 0.0;
    double propagation_phase = 0.0;  // 2pi (r_t + r_r) / lambda, unreduced
};

struct LinkResult {
    double received_power = 0.0;  // W
    double path_loss = 0.0;       // P_t / P_r, from the coherent sum
    double path_loss_db = 0.0;
    std::vector<std::complex<double>> per_element_terms;
};

/// Link evaluator for a fixed scenario. Element paths (and the static per-unit phase
/// errors, when jitter is configured) are computed once; every evaluation sums the
/// per-element terms in row-major element order so repeated calls are bit-identical.
class LinkBudget {
public:
    explicit LinkBudget(Scenario scenario);

    const Scenario& scenario() const noexcept { return scenario_; }
    std::size_t size() const noexcept { return paths_.size(); }
    const std::vector<ElementPath>& paths() const noexcept { return paths_; }
    /// Fixed phase error of each unit; all zero without jitter.
    const std::vector<double>& phase_errors() const noexcept { return phase_errors_; }

    /// Uniform states (scenario current and attenuation) for the given codebook indices.
    std::vector<UnitState> states(const std::vector<std::size_t>& phase_indices) const;

    /// RCS-form summands sqrt(G_t G_r) sigma_n exp(j(phi_n - Phi_n)) / (r_t r_r).
    std::vector<std::complex<double>> terms(std::span<const UnitState> states) const;
    /// Same, with explicit (continuous) unit phases instead of codebook entries.
    std::vector<std::complex<double>> terms(std::span<const UnitState> states, std::span<const double> phases) const;

    /// Noiseless received power, RCS form.
    double received_power(std::span<const UnitState> states) const;
    double received_power(std::span<const UnitState> states, std::span<const double> phases) const;
    /// Noiseless received power from the expanded sqrt(G_t G_r G_u A_t A_r) mu form.
    double received_power_expanded(std::span<const UnitState> states) const;

    /// 16 pi^2 / |sum|^2; throws InfinitePathLoss when the sum vanishes.
    double path_loss(std::span<const UnitState> states) const;
    double path_loss(std::span<const UnitState> states, std::span<const double> phases) const;
    LinkResult evaluate(std::span<const UnitState> states) const;

    /// y = sum f_n Gamma_n g_n sqrt(P_t) x (+ z), built from the channel coefficients.
    /// When `noise` is given, z ~ CN(0, noise_variance) is drawn from it.
    std::complex<double> received_signal(std::span<const UnitState> states, std::complex<double> symbol,
                                         std::mt19937_64* noise = nullptr) const;

    /// phi_n = mod(C + Phi_n, 2pi).
    std::vector<double> continuous_optimal_phases(double c = 0.0) const;

    /// Upper bound over all unit phases for the given unit gains/attenuations.
    double max_received_power(std::span<const UnitState> states) const;
    double min_path_loss(std::span<const UnitState> states) const;
    /// Same, with the scenario's uniform unit states.
    double max_received_power() const;
    double min_path_loss() const;

private:
    void check_size(std::size_t n) const;
    double sigma(std::size_t n, const UnitState& state) const;
    double coherent_magnitude_sq(const std::vector<std::complex<double>>& terms) const;

    Scenario scenario_;
    std::vector<ElementPath> paths_;
    std::vector<double> phase_errors_;
};

double propagation_phase(const Scenario& scenario, ElementIndex element);
std::complex<double> received_signal(const Scenario& scenario, std::span<const UnitState> states,
                                     std::complex<double> symbol, std::mt19937_64* noise = nullptr);
double received_power(const Scenario& scenario, std::span<const UnitState> states);
double path_loss(const Scenario& scenario, std::span<const UnitState> states);
std::vector<double> continuous_optimal_phases(const Scenario& scenario, double c = 0.0);
double max_received_power(const Scenario& scenario);
double min_path_loss(const Scenario& scenario);

}  // namespace tris
