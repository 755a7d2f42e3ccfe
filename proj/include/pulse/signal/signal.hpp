#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pulse::signal {

struct EcgTrace {
    std::vector<double> samples;  // amplitude, arbitrary units
    double sample_rate_hz = 0.0;
    std::string lead_name;
};

struct IbiSequence {
    std::vector<double> intervals_ms;
};

struct HrSeries {
    std::vector<double> rates_bpm;
};

enum class RhythmLabel {
    normal_sinus,
    atrial_fibrillation,
    sinus_bradycardia,
    sinus_tachycardia,
};

const char* rhythm_name(RhythmLabel label);

struct AccelWindow {
    std::vector<double> magnitudes_mps2;  // one per second
    int window_seconds = 0;
};

// Throwing validators; every consumer of these types funnels through them.
void validate(const EcgTrace& ecg);
void validate(const IbiSequence& ibis);
void validate(const HrSeries& hr);
void validate(const AccelWindow& w);

double mean_hr(const HrSeries& hr);

// 60000 / mean(intervals_ms). Table-style 60/mu with IBIs in ms is
// dimensionally off by 1000; this is the bpm reading.
double ibi_to_hr(const IbiSequence& ibis);

// < 60 brady, > 100 tachy, boundaries fall to normal sinus. A.Fib. is never
// produced by this rule.
RhythmLabel classify_rhythm_rule(double mean_hr_bpm);

// QRS detection: difference-of-moving-averages bandpass (~5-15 Hz),
// derivative, squaring, 150 ms moving-window integration, adaptive threshold
// at 0.5 x running peak estimate, 250 ms refractory, peak refinement on the
// bandpassed signal.
std::vector<size_t> detect_r_peaks(const EcgTrace& ecg);

IbiSequence peaks_to_ibis(const std::vector<size_t>& peaks, double sample_rate_hz);

// Windowed-sinc (Kaiser) resampler; output length is
// round(input_length * target_hz / source_hz).
EcgTrace resample(const EcgTrace& ecg, double target_hz);

// Per-sample magnitude sqrt(ax^2+ay^2+az^2), mean over non-overlapping
// 1-second blocks, first window_seconds blocks returned.
AccelWindow accel_magnitude_windows(const std::vector<double>& ax,
                                    const std::vector<double>& ay,
                                    const std::vector<double>& az, double sample_rate_hz,
                                    int window_seconds);

// --- CSV readers -----------------------------------------------------------
// All readers expect a header row and reject NaN/inf with a row-numbered
// error message.

// columns: t_seconds,amplitude
EcgTrace read_ecg_csv(const std::string& path);

struct AccelCsv {
    std::vector<double> t_seconds, ax, ay, az;
    double sample_rate_hz = 0.0;  // inferred from timestamps
};
// columns: t_seconds,ax,ay,az
AccelCsv read_accel_csv(const std::string& path);

// single column: ibi_ms
IbiSequence read_ibi_csv(const std::string& path);

}  // namespace pulse::signal
