#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tris/error.hpp"
#include "tris/link_budget.hpp"

using namespace tris;
using doctest::Approx;

namespace {

// Single unit with bracket sqrt(G_t G_r) sigma = 4 pi at 1 m on both sides.
Scenario unity_scenario() {
    Scenario s;
    s.frequency = kSpeedOfLight / 0.1;  // 2 m round trip = 20 wavelengths
    s.layout = ArrayLayout{1, 1, std::sqrt(4 * kPi), std::sqrt(4 * kPi)};
    s.tx_pose = SphericalPose{1.0, 0.0, 0.0};
    s.rx_pose = transmission_side_pose(1.0, 0.0);
    s.tx_antenna = AntennaModel{1.0, 0.0};
    s.rx_antenna = AntennaModel{1.0, 0.0};
    s.amplifier = AmplifierModel({{0.0, 0.0}}, 1.0);
    s.unit_current = 0.0;
    s.tx_power = 1.0;
    return s;
}

Scenario pair_scenario() {
    Scenario s = default_chamber_scenario();
    s.layout = ArrayLayout{1, 2, 0.06, 0.06};
    return s;
}

std::vector<UnitState> random_states(std::mt19937_64& rng, const Scenario& s) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<UnitState> out;
    for (std::size_t n = 0; n < s.layout.size(); ++n) {
        out.push_back({std::size_t(rng() % s.codebook.size()), 0.12 * u(rng), u(rng)});
    }
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("power unit conversions") {
    CHECK(watts_to_dbm(1.0) == Approx(30.0));
    CHECK(dbm_to_watts(10.0) == Approx(0.01));
    CHECK(power_to_db(100.0) == Approx(20.0));
    CHECK(dbm_to_watts(watts_to_dbm(0.123)) == Approx(0.123).epsilon(1e-14));
}

TEST_CASE("propagation phase") {
    Scenario s = unity_scenario();
    s.tx_pose.r = s.wavelength() / 2;
    s.rx_pose.r = s.wavelength() / 2;
    CHECK(propagation_phase(s, {1, 1}) == Approx(2 * kPi).epsilon(1e-14));

    Scenario c = default_chamber_scenario();
    c.layout = ArrayLayout{1, 1, 0.06, 0.06};
    const double lambda = 299792458.0 / 2.6e9;
    CHECK(propagation_phase(c, {1, 1}) == Approx(2 * oracle::pi * 4.6 / lambda).epsilon(1e-14));
    CHECK(propagation_phase(c, {1, 1}) == Approx(250.66306).epsilon(1e-7));

    Scenario d = c;
    d.tx_pose.r *= 2;
    d.rx_pose.r *= 2;
    CHECK(propagation_phase(d, {1, 1}) == Approx(2 * propagation_phase(c, {1, 1})).epsilon(1e-14));
}

TEST_CASE("unity single-unit link") {
    const LinkBudget link(unity_scenario());
    const auto states = link.states({0});
    CHECK(link.received_power(states) == Approx(1.0).epsilon(1e-12));
    CHECK(link.received_power_expanded(states) == Approx(1.0).epsilon(1e-12));
    CHECK(link.path_loss(states) == Approx(1.0).epsilon(1e-12));
    CHECK(link.evaluate(states).path_loss_db == Approx(0.0).epsilon(1e-9));
    CHECK(link.max_received_power() == Approx(1.0).epsilon(1e-12));
    CHECK(link.min_path_loss() == Approx(1.0).epsilon(1e-12));

    const auto y = link.received_signal(states, {1.0, 0.0});
    CHECK(std::abs(y - std::complex<double>(1.0, 0.0)) < 1e-9);

    Scenario zero = unity_scenario();
    zero.tx_power = 0.0;
    CHECK(std::abs(LinkBudget(zero).received_signal(states, {1.0, 0.0})) == 0.0);
}

TEST_CASE("coherent superposition of two units") {
    const LinkBudget link(pair_scenario());
    auto one = link.states({0, 0});
    one[1].attenuation = 0.0;
    const double p1 = link.received_power(one);
    const double p2 = link.received_power(link.states({0, 0}));
    CHECK(p2 == Approx(4 * p1).epsilon(1e-12));

    const auto y1 = link.received_signal(one, {1.0, 0.0});
    const auto y2 = link.received_signal(link.states({0, 0}), {1.0, 0.0});
    CHECK(std::abs(y2 - 2.0 * y1) < 1e-12 * std::abs(y2));

    const double anti = link.received_power(link.states({0, 2}));
    CHECK(anti < 1e-20 * p2);
}

TEST_CASE("path loss scaling and errors") {
    Scenario s = default_chamber_scenario();
    s.attenuation = 0.5;
    const LinkBudget half(s);
    s.attenuation = 1.0;
    const LinkBudget full(s);
    const auto idx = std::vector<std::size_t>(32, 0);
    const double delta = power_to_db(half.path_loss(half.states(idx))) - power_to_db(full.path_loss(full.states(idx)));
    CHECK(delta == Approx(20 * std::log10(2.0)).epsilon(1e-10));

    s.attenuation = 0.0;
    const LinkBudget dead(s);
    CHECK_THROWS_AS(dead.path_loss(dead.states(idx)), InfinitePathLoss);
    CHECK_THROWS_AS(dead.min_path_loss(), InfinitePathLoss);
}

TEST_CASE("received power matches the independent expanded oracle") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Scenario s = oracle::random_scenario(rng, 32);
        const LinkBudget link(s);
        const auto states = random_states(rng, s);
        std::vector<double> phases, currents, mus;
        for (const auto& st : states) {
            phases.push_back(s.codebook.offset + double(st.phase_index) * s.codebook.step());
            currents.push_back(st.amplifier_current);
            mus.push_back(st.attenuation);
        }
        const double ref = oracle::power_from_terms(s.tx_power, oracle::expanded_terms(s, phases, currents, mus));
        const double rcs = link.received_power(states);
        CHECK(rel(rcs, ref) < 1e-9);
        CHECK(rel(link.received_power_expanded(states), rcs) < 1e-12);
        CHECK(rel(std::norm(link.received_signal(states, {1.0, 0.0})), rcs) < 1e-9);
    }
}

TEST_CASE("global phase invariance") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 2 * oracle::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const LinkBudget link(oracle::random_scenario(rng, 32));
        const auto states = link.states(std::vector<std::size_t>(link.size(), 0));
        std::vector<double> phases(link.size()), shifted(link.size());
        const double c = u(rng);
        for (std::size_t n = 0; n < phases.size(); ++n) {
            phases[n] = u(rng);
            shifted[n] = phases[n] + c;
        }
        CHECK(rel(link.received_power(states, shifted), link.received_power(states, phases)) < 1e-9);
    }
}

TEST_CASE("reciprocity: swapping TX and RX leaves the power unchanged") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        Scenario a = oracle::random_scenario(rng, 16);
        Scenario b = a;
        std::swap(b.tx_pose, b.rx_pose);
        std::swap(b.tx_antenna, b.rx_antenna);
        const LinkBudget la(a), lb(b);
        std::vector<std::size_t> idx(la.size());
        for (auto& i : idx) i = rng() % 4;
        CHECK(rel(lb.received_power(lb.states(idx)), la.received_power(la.states(idx))) < 1e-9);
    }
}

TEST_CASE("any configuration stays below the coherent upper bound") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const Scenario s = oracle::random_scenario(rng, 32);
        const LinkBudget link(s);
        const auto states = random_states(rng, s);
        CHECK(link.received_power(states) <= link.max_received_power(states) * (1 + 1e-12));

        std::vector<double> phases, currents, mus;
        for (const auto& st : states) {
            phases.push_back(0.0);
            currents.push_back(st.amplifier_current);
            mus.push_back(st.attenuation);
        }
        double mag = 0.0;
        for (const auto& t : oracle::expanded_terms(s, phases, currents, mus)) mag += std::abs(t);
        CHECK(rel(link.max_received_power(states), s.tx_power / (16 * oracle::pi * oracle::pi) * mag * mag) < 1e-9);
    }
}

TEST_CASE("continuous optimum attains the bound for any constant") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        const LinkBudget link(oracle::random_scenario(rng, 32));
        const auto states = link.states(std::vector<std::size_t>(link.size(), 0));
        const double pmax = link.max_received_power();
        for (double c : {0.0, u(rng), u(rng)}) {
            const auto phases = link.continuous_optimal_phases(c);
            for (double p : phases) {
                CHECK(p >= 0.0);
                CHECK(p < 2 * oracle::pi);
            }
            CHECK(rel(link.received_power(states, phases), pmax) < 1e-10);
        }
    }
}

TEST_CASE("continuous optimum is relative to the first unit") {
    const LinkBudget link(default_chamber_scenario());
    const auto& paths = link.paths();
    const auto phases = link.continuous_optimal_phases(-paths[0].propagation_phase);
    CHECK(std::min(phases[0], 2 * oracle::pi - phases[0]) < 1e-9);
    for (std::size_t n = 1; n < phases.size(); ++n) {
        const double rel_phase = paths[n].propagation_phase - paths[0].propagation_phase;
        CHECK(std::abs(std::remainder(phases[n] - rel_phase, 2 * oracle::pi)) < 1e-9);
    }
}

TEST_CASE("amplifier gain shifts received power linearly") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Scenario s = oracle::random_scenario(rng, 32);
        const double g = 20 * u(rng);
        s.amplifier = AmplifierModel({{0.01, 0.0}, {0.1, g}}, 0.12);
        s.unit_current = 0.01;
        const LinkBudget lo(s);
        s.unit_current = 0.1;
        const LinkBudget hi(s);
        std::vector<std::size_t> idx(lo.size());
        for (auto& i : idx) i = rng() % 4;
        const double d = 10 * std::log10(hi.received_power(hi.states(idx)) / lo.received_power(lo.states(idx)));
        CHECK(d == Approx(g).epsilon(1e-9));
    }
}

TEST_CASE("far field: doubling both distances costs 12.04 dB") {
    Scenario s = default_chamber_scenario();
    s.tx_pose.r = 40.0;
    s.rx_pose.r = 80.0;
    const double pl1 = power_to_db(min_path_loss(s));
    s.tx_pose.r = 80.0;
    s.rx_pose.r = 160.0;
    const double pl2 = power_to_db(min_path_loss(s));
    CHECK(pl2 - pl1 == Approx(40 * std::log10(2.0)).epsilon(0.1 / 12.04));
}

TEST_CASE("coherent gain grows as N squared for identical terms") {
    // Far away on boresight every term has nearly the same magnitude.
    for (std::size_t n : {1u, 2u, 4u, 8u}) {
        Scenario s = default_chamber_scenario();
        s.layout = ArrayLayout{1, n, 0.06, 0.06};
        s.tx_pose.r = 1e4;
        s.rx_pose.r = 1e4;
        Scenario one = s;
        one.layout = ArrayLayout{1, 1, 0.06, 0.06};
        CHECK(max_received_power(s) / max_received_power(one) == Approx(double(n * n)).epsilon(1e-6));
    }
}

TEST_CASE("noise sample has the configured variance") {
    Scenario s = default_chamber_scenario();
    s.tx_power = 0.0;
    s.noise_variance = 2.5e-9;
    const LinkBudget link(s);
    const auto states = link.states(std::vector<std::size_t>(32, 0));
    std::mt19937_64 rng(77);
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) acc += std::norm(link.received_signal(states, {1.0, 0.0}, &rng));
    CHECK(acc / n == Approx(2.5e-9).epsilon(0.05));
}

TEST_CASE("static jitter is bounded and reproducible") {
    Scenario s = default_chamber_scenario();
    s.jitter = PhaseJitterModel{deg_to_rad(8.0), 5};
    const LinkBudget a(s), b(s);
    CHECK(a.phase_errors() == b.phase_errors());
    bool any = false;
    for (double e : a.phase_errors()) {
        CHECK(std::abs(e) <= deg_to_rad(8.0));
        any = any || e != 0.0;
    }
    CHECK(any);
    const auto states = a.states(std::vector<std::size_t>(32, 0));
    const auto phases = a.continuous_optimal_phases();
    CHECK(a.received_power(states, phases) <= a.max_received_power() * (1 + 1e-12));
    CHECK(a.received_power(states, phases) >= a.max_received_power() * std::pow(std::cos(deg_to_rad(8.0)), 2));
}

TEST_CASE("link rejects mismatched state vectors and bad scenarios") {
    const LinkBudget link(default_chamber_scenario());
    CHECK_THROWS_AS(link.received_power(link.states(std::vector<std::size_t>(31, 0))), InvalidArgument);
    Scenario bad = default_chamber_scenario();
    bad.rx_pose = SphericalPose{4.0, 0.0, 0.0};
    CHECK_THROWS_AS(LinkBudget{bad}, InvalidArgument);
    bad = default_chamber_scenario();
    bad.unit_current = 0.5;
    CHECK_THROWS_AS(LinkBudget{bad}, SupplyBudgetExceeded);
}
