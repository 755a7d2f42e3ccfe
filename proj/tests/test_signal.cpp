#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "pulse/signal/signal.hpp"
#include "pulse/util/errors.hpp"
#include "pulse/util/rng.hpp"

using namespace pulse;
using namespace pulse::signal;

namespace {

// Independent synthetic ECG: gaussian bumps at given times. Kept separate
// from the synth module so the detector is checked against a second
// construction.
EcgTrace bumps_at(const std::vector<double>& beat_times_s, double fs, double seconds) {
    EcgTrace ecg;
    ecg.sample_rate_hz = fs;
    ecg.lead_name = "test";
    ecg.samples.assign(static_cast<size_t>(std::lround(seconds * fs)), 0.0);
    const double sigma = 0.012;
    for (double bt : beat_times_s)
        for (size_t i = 0; i < ecg.samples.size(); ++i) {
            const double dt = static_cast<double>(i) / fs - bt;
            ecg.samples[i] += std::exp(-0.5 * (dt / sigma) * (dt / sigma));
        }
    return ecg;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("signal");

TEST_CASE("mean_hr examples") {
    CHECK(mean_hr({{70, 70, 70}}) == doctest::Approx(70.0));
    CHECK(mean_hr({{60, 80}}) == doctest::Approx(70.0));
    // direct summation oracle: (61+62+63+64+65)/5
    CHECK(mean_hr({{61, 62, 63, 64, 65}}) == doctest::Approx(63.0));
    CHECK_THROWS_AS(mean_hr(HrSeries{}), PulseError);
}

TEST_CASE("mean_hr is permutation invariant and bounded") {
    CounterRng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v;
        for (int i = 0; i < 9; ++i) v.push_back(rng.uniform(30, 200));
        const double m = mean_hr({v});
        auto shuffled = v;
        for (size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.uniform_int(0, static_cast<int64_t>(i) - 1)]);
        CHECK(mean_hr({shuffled}) == doctest::Approx(m));
        CHECK(m >= *std::min_element(v.begin(), v.end()));
        CHECK(m <= *std::max_element(v.begin(), v.end()));
    }
}

TEST_CASE("ibi_to_hr examples") {
    CHECK(ibi_to_hr({{1000, 1000, 1000}}) == doctest::Approx(60.0));
    CHECK(ibi_to_hr({{500, 500}}) == doctest::Approx(120.0));
    CHECK(ibi_to_hr({{800, 1000, 1200}}) == doctest::Approx(60.0));
    CHECK_THROWS_AS(ibi_to_hr(IbiSequence{}), PulseError);
}

TEST_CASE("ibi_to_hr constant sequences equal 60000/c") {
    for (double c = 201.0; c < 4000.0; c += 97.3) {
        IbiSequence seq;
        seq.intervals_ms.assign(12, c);
        CHECK(ibi_to_hr(seq) == doctest::Approx(60000.0 / c).epsilon(1e-12));
    }
}

TEST_CASE("classify_rhythm_rule thresholds") {
    CHECK(classify_rhythm_rule(55.0) == RhythmLabel::sinus_bradycardia);
    CHECK(classify_rhythm_rule(110.0) == RhythmLabel::sinus_tachycardia);
    CHECK(classify_rhythm_rule(60.0) == RhythmLabel::normal_sinus);
    CHECK(classify_rhythm_rule(100.0) == RhythmLabel::normal_sinus);
    CHECK(classify_rhythm_rule(59.999) == RhythmLabel::sinus_bradycardia);
    CHECK(classify_rhythm_rule(100.001) == RhythmLabel::sinus_tachycardia);
}

TEST_CASE("classify_rhythm_rule partitions into three contiguous regions") {
    RhythmLabel prev = classify_rhythm_rule(0.01);
    int transitions = 0;
    for (double hr = 0.01; hr < 300.0; hr += 0.01) {
        const RhythmLabel cur = classify_rhythm_rule(hr);
        if (cur != prev) {
            ++transitions;
            CHECK((std::abs(hr - 60.0) < 0.02 || std::abs(hr - 100.0) < 0.02));
        }
        prev = cur;
    }
    CHECK(transitions == 2);
}

TEST_CASE("detect_r_peaks on known beat times") {
    const auto ecg = bumps_at({0.5, 1.3, 2.1}, 125.0, 2.5);
    const auto peaks = detect_r_peaks(ecg);
    REQUIRE(peaks.size() == 3);
    const std::vector<double> expected = {62, 162, 262};
    for (size_t i = 0; i < 3; ++i)
        CHECK(std::abs(static_cast<double>(peaks[i]) - expected[i]) <= 2.0);
}

TEST_CASE("detect_r_peaks rejects flat and short signals") {
    EcgTrace flat;
    flat.sample_rate_hz = 125.0;
    flat.samples.assign(500, 0.0);
    CHECK_THROWS_AS(detect_r_peaks(flat), PulseError);

    EcgTrace brief = bumps_at({0.5}, 125.0, 1.0);
    CHECK_THROWS_AS(detect_r_peaks(brief), PulseError);
}

TEST_CASE("1 Hz beats for 15 s give 15 peaks with 1000 ms IBIs") {
    std::vector<double> times;
    for (int i = 0; i < 15; ++i) times.push_back(0.2 + i);
    const auto ecg = bumps_at(times, 125.0, 15.4);
    const auto peaks = detect_r_peaks(ecg);
    REQUIRE(peaks.size() == 15);
    const auto ibis = peaks_to_ibis(peaks, 125.0);
    for (double iv : ibis.intervals_ms) CHECK(std::abs(iv - 1000.0) <= 16.0);
}

TEST_CASE("peaks_to_ibis examples") {
    const auto a = peaks_to_ibis({0, 125, 250}, 125.0);
    REQUIRE(a.intervals_ms.size() == 2);
    CHECK(a.intervals_ms[0] == doctest::Approx(1000.0));
    CHECK(a.intervals_ms[1] == doctest::Approx(1000.0));

    const auto b = peaks_to_ibis({0, 100}, 125.0);
    REQUIRE(b.intervals_ms.size() == 1);
    CHECK(b.intervals_ms[0] == doctest::Approx(800.0));

    CHECK_THROWS_AS(peaks_to_ibis({0}, 125.0), PulseError);
}

TEST_CASE("resample length and identity") {
    EcgTrace ecg;
    ecg.sample_rate_hz = 250.0;
    ecg.samples.assign(3750, 0.0);
    CounterRng rng(7);
    for (auto& v : ecg.samples) v = rng.uniform(-1, 1);

    const auto down = resample(ecg, 125.0);
    CHECK(down.samples.size() == 1875);
    CHECK(down.sample_rate_hz == doctest::Approx(125.0));

    const auto same = resample(ecg, 250.0);
    CHECK(same.samples == ecg.samples);

    CHECK_THROWS_AS(resample(ecg, 300.0), PulseError);
    CHECK_THROWS_AS(resample(ecg, 0.0), PulseError);
}

TEST_CASE("resample preserves a 10 Hz sine within 2% away from edges") {
    EcgTrace ecg;
    ecg.sample_rate_hz = 250.0;
    const int n = 2500;  // 10 s
    for (int i = 0; i < n; ++i)
        ecg.samples.push_back(std::sin(2.0 * M_PI * 10.0 * i / 250.0));

    const auto out = resample(ecg, 125.0);
    // compare against the analytic sinusoid, skipping half a second per edge
    const int skip = 63;
    double worst = 0.0;
    for (int j = skip; j < static_cast<int>(out.samples.size()) - skip; ++j) {
        const double expect = std::sin(2.0 * M_PI * 10.0 * j / 125.0);
        worst = std::max(worst, std::abs(out.samples[static_cast<size_t>(j)] - expect));
    }
    CHECK(worst < 0.02);  // relative to unit amplitude
}

TEST_CASE("accel_magnitude_windows examples") {
    const std::vector<double> threes(20, 3.0), fours(20, 4.0), zeros(20, 0.0);
    const auto w = accel_magnitude_windows(threes, fours, zeros, 4.0, 5);
    REQUIRE(w.magnitudes_mps2.size() == 5);
    for (double v : w.magnitudes_mps2) CHECK(v == doctest::Approx(5.0));

    // per-sample magnitudes 1,1,1,1,2,2,2,2 -> blockwise means [1, 2]
    const std::vector<double> mag = {1, 1, 1, 1, 2, 2, 2, 2};
    const std::vector<double> z(8, 0.0);
    const auto w2 = accel_magnitude_windows(mag, z, z, 4.0, 2);
    REQUIRE(w2.magnitudes_mps2.size() == 2);
    CHECK(w2.magnitudes_mps2[0] == doctest::Approx(1.0));
    CHECK(w2.magnitudes_mps2[1] == doctest::Approx(2.0));

    const auto w3 = accel_magnitude_windows(z, z, z, 4.0, 2);
    for (double v : w3.magnitudes_mps2) CHECK(v == doctest::Approx(0.0));

    CHECK_THROWS_AS(accel_magnitude_windows(threes, fours, z, 4.0, 5), PulseError);
    CHECK_THROWS_AS(accel_magnitude_windows(mag, z, z, 4.0, 3), PulseError);
}

TEST_CASE("accel magnitude invariant under axis sign flips") {
    CounterRng rng(33);
    std::vector<double> ax, ay, az;
    for (int i = 0; i < 40; ++i) {
        ax.push_back(rng.normal(0, 3));
        ay.push_back(rng.normal(0, 3));
        az.push_back(rng.normal(9.8, 1));
    }
    const auto base = accel_magnitude_windows(ax, ay, az, 8.0, 5);
    auto neg = ax;
    for (auto& v : neg) v = -v;
    const auto flipped = accel_magnitude_windows(neg, ay, az, 8.0, 5);
    for (size_t i = 0; i < 5; ++i)
        CHECK(base.magnitudes_mps2[i] == doctest::Approx(flipped.magnitudes_mps2[i]));
}

TEST_CASE("csv readers round-trip and reject non-finite rows") {
    const auto ecg_path = temp_path("pulse_test_ecg.csv");
    {
        std::ofstream f(ecg_path);
        f << "t_seconds,amplitude\n";
        for (int i = 0; i < 250; ++i) f << i / 125.0 << "," << (i % 5) * 0.1 << "\n";
    }
    const auto ecg = read_ecg_csv(ecg_path);
    CHECK(ecg.samples.size() == 250);
    CHECK(ecg.sample_rate_hz == doctest::Approx(125.0));

    {
        std::ofstream f(ecg_path);
        f << "t_seconds,amplitude\n0.0,1.0\n0.008,nan\n";
    }
    try {
        read_ecg_csv(ecg_path);
        FAIL("expected a row-numbered error");
    } catch (const PulseError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }

    const auto ibi_path = temp_path("pulse_test_ibi.csv");
    {
        std::ofstream f(ibi_path);
        f << "ibi_ms\n800\n1000\n1200\n";
    }
    const auto ibis = read_ibi_csv(ibi_path);
    CHECK(ibis.intervals_ms == std::vector<double>{800, 1000, 1200});

    const auto acc_path = temp_path("pulse_test_accel.csv");
    {
        std::ofstream f(acc_path);
        f << "t_seconds,ax,ay,az\n";
        for (int i = 0; i < 8; ++i) f << i * 0.25 << ",3,4,0\n";
    }
    const auto acc = read_accel_csv(acc_path);
    CHECK(acc.ax.size() == 8);
    CHECK(acc.sample_rate_hz == doctest::Approx(4.0));

    std::filesystem::remove(ecg_path);
    std::filesystem::remove(ibi_path);
    std::filesystem::remove(acc_path);
}

TEST_SUITE_END();
