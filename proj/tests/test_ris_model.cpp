#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "tris/error.hpp"
#include "tris/ris_model.hpp"

using namespace tris;
using doctest::Approx;

TEST_CASE("codebook phases") {
    auto p = codebook_phases({2, 0.0});
    REQUIRE(p.size() == 4);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == Approx(kPi / 2));
    CHECK(p[2] == Approx(kPi));
    CHECK(p[3] == Approx(1.5 * kPi));

    p = codebook_phases({1, 0.0});
    REQUIRE(p.size() == 2);
    CHECK(p[1] == Approx(kPi));

    p = codebook_phases({2, kPi / 6});
    CHECK(p[0] == Approx(kPi / 6));
    CHECK(p[1] == Approx(2 * kPi / 3));
    CHECK(p[2] == Approx(7 * kPi / 6));
    CHECK(p[3] == Approx(5 * kPi / 3));
}

TEST_CASE("codebook invariants") {
    for (unsigned bits = 1; bits <= 6; ++bits) {
        const PhaseCodebook cb{bits, 0.3 * 2 * kPi / double(1u << bits)};
        const auto p = codebook_phases(cb);
        CHECK(p.size() == (std::size_t{1} << bits));
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i] >= 0.0);
            CHECK(p[i] < kTwoPi);
            if (i > 0) CHECK(p[i] - p[i - 1] == Approx(cb.step()).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(PhaseCodebook({0, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(PhaseCodebook({2, kPi / 2}).validate(), InvalidArgument);
    CHECK_THROWS_AS(PhaseCodebook({2, -0.1}).validate(), InvalidArgument);
    CHECK_THROWS_AS(PhaseCodebook({2, 0.0}).phase(4), InvalidArgument);
}

TEST_CASE("unit transmission coefficient") {
    const AmplifierModel passive({{0.0, 0.0}}, 1.0);
    const AmplifierModel sixteen({{0.0, 16.0}}, 1.0);
    auto c = unit_transmission_coefficient({0, 0.0, 1.0}, {2, 0.0}, passive);
    CHECK(c.amplitude == Approx(1.0));
    CHECK(c.phase == 0.0);

    c = unit_transmission_coefficient({2, 0.0, 1.0}, {2, 0.0}, sixteen);
    CHECK(c.amplitude == Approx(std::pow(10.0, 16.0 / 20.0)).epsilon(1e-14));
    CHECK(c.amplitude == Approx(6.3096).epsilon(1e-4));
    CHECK(c.phase == Approx(kPi));

    c = unit_transmission_coefficient({1, 0.0, 0.0}, {2, 0.0}, sixteen);
    CHECK(c.amplitude == 0.0);

    CHECK_THROWS_AS(unit_transmission_coefficient({4, 0.0, 1.0}, {2, 0.0}, passive), InvalidArgument);
    CHECK_THROWS_AS(unit_transmission_coefficient({0, 0.0, 1.5}, {2, 0.0}, passive), InvalidArgument);
}

TEST_CASE("jitter stays within bounds and is reproducible") {
    const PhaseJitterModel model{deg_to_rad(8.0), 42};
    JitterSampler a(model), b(model);
    const AmplifierModel passive({{0.0, 0.0}}, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = a.sample();
        CHECK(x == b.sample());
        CHECK(std::abs(x) <= deg_to_rad(8.0));
    }
    JitterSampler c(model);
    const auto k = unit_transmission_coefficient({1, 0.0, 1.0}, {2, 0.0}, passive, &c);
    const double d = std::remainder(k.phase - kPi / 2, kTwoPi);
    CHECK(std::abs(d) <= deg_to_rad(8.0) + 1e-12);
}

TEST_CASE("amplifier gain with the measured calibration") {
    const auto amp = AmplifierModel::measured_default();
    CHECK(amplifier_gain(amp, 0.01 / 32) == Approx(0.0));
    CHECK(amplifier_gain(amp, 0.0003125) == Approx(0.0));
    CHECK(amplifier_gain(amp, 1.4 / 32) == Approx(11.9).epsilon(1e-12));
    CHECK(amplifier_gain(amp, (0.01 / 32 + 1.4 / 32) / 2) == Approx(11.9 / 2).epsilon(1e-12));
    CHECK(amplifier_gain(amp, 0.0) == Approx(0.0));
    CHECK(amplifier_gain(amp, 0.1) == Approx(11.9));
    CHECK(amp.gain_linear(1.4 / 32) == Approx(std::pow(10.0, 1.19)).epsilon(1e-12));
    CHECK_THROWS_AS(amplifier_gain(amp, 0.121), SupplyBudgetExceeded);
    CHECK_THROWS_AS(amplifier_gain(amp, -0.001), InvalidArgument);
}

TEST_CASE("amplifier gain is monotone in current") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<AmplifierModel::Point> pts;
        double c = 0.0, g = -3.0;
        for (int k = 0; k < 4; ++k) {
            c += 0.001 + 0.02 * u(rng);
            g += 5 * u(rng);
            pts.push_back({c, g});
        }
        const AmplifierModel amp(pts, 0.12);
        double prev = -1e300;
        for (double i = 0.0; i <= 0.12; i += 0.0005) {
            const double v = amp.gain_db(i);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("amplifier calibration validation") {
    CHECK_THROWS_AS(AmplifierModel({}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(AmplifierModel({{0.02, 0.0}, {0.01, 1.0}}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(AmplifierModel({{0.01, 3.0}, {0.02, 1.0}}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(AmplifierModel({{0.01, 0.0}, {0.2, 1.0}}, 0.1), InvalidArgument);
}

TEST_CASE("unit rcs") {
    const AmplifierModel passive({{0.0, 0.0}}, 1.0);
    const ElementAperture ap{0.0036};
    CHECK(unit_rcs({0, 0.0, 1.0}, passive, 0.0, 0.0, ap) == Approx(0.0036).epsilon(1e-14));
    CHECK(unit_rcs({0, 0.0, 0.0}, passive, 0.0, 0.0, ap) == 0.0);

    const AmplifierModel quad({{0.0, 0.0}, {1.0, 10.0 * std::log10(4.0)}}, 1.0);
    const double s1 = unit_rcs({0, 0.0, 1.0}, quad, 0.3, 0.5, ap);
    const double s4 = unit_rcs({0, 1.0, 1.0}, quad, 0.3, 0.5, ap);
    CHECK(s4 == Approx(2 * s1).epsilon(1e-12));
    CHECK(s1 == Approx(std::sqrt(0.0036 * std::cos(0.3) * 0.0036 * std::cos(0.5))).epsilon(1e-12));
}

TEST_CASE("switch table") {
    CHECK(encode_control(0) == ControlWord{false, true, true});
    CHECK(encode_control(1) == ControlWord{false, false, true});
    CHECK(encode_control(2) == ControlWord{false, false, false});
    CHECK(encode_control(3) == ControlWord{false, true, false});
    CHECK(encode_control(0).to_string() == "011");
    CHECK(decode_control(ControlWord::parse("001")) == 1);
    CHECK(decode_control(ControlWord::parse("011")) == 0);
    CHECK_THROWS_AS(decode_control(ControlWord::parse("100")), InvalidControlWord);
    CHECK_THROWS_AS(encode_control(4), InvalidControlWord);
    CHECK_THROWS_AS(ControlWord::parse("01"), InvalidControlWord);
    CHECK_THROWS_AS(ControlWord::parse("0a1"), InvalidControlWord);
}

TEST_CASE("switch table round trip over all words") {
    std::set<std::string> valid;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto w = encode_control(i);
        CHECK(decode_control(w) == i);
        CHECK(ControlWord::parse(w.to_string()) == w);
        valid.insert(w.to_string());
    }
    CHECK(valid.size() == 4);
    int rejected = 0;
    for (int bits = 0; bits < 8; ++bits) {
        const ControlWord w{bool(bits & 4), bool(bits & 2), bool(bits & 1)};
        if (valid.count(w.to_string())) continue;
        CHECK_THROWS_AS(decode_control(w), InvalidControlWord);
        ++rejected;
    }
    CHECK(rejected == 4);
}
