#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pulse/signal/signal.hpp"

namespace pulse::synth {

enum class Activity { walking, biking, running };

const char* activity_name(Activity a);
Activity activity_from_name(const std::string& name);

struct RhythmGenSpec {
    signal::RhythmLabel label = signal::RhythmLabel::normal_sinus;
    double mean_rr_ms = 800.0;
    double cv = 0.05;        // coefficient of variation
    double lag1_corr = 0.0;  // AR(1) coefficient of successive intervals
    int n_beats = 32;
};

// Defaults from the harness configuration: NSR 800ms/cv .05/lag1 .4,
// AF 800ms/cv .25/lag1 0 (mixture spread), Brady 1200ms, Tachy 500ms.
RhythmGenSpec default_rhythm_spec(signal::RhythmLabel label, int n_beats);

struct CalorieRecord {
    Activity activity = Activity::walking;
    double duration_min = 0.0;
    double weight_lbs = 0.0;
    double calories = 0.0;  // met * duration * weight / 200, exact
};

struct WearableDay {
    int64_t steps = 0;
    double rhr_bpm = 0.0;
    double sleep_minutes = 0.0;
    double nrem_hr_bpm = 0.0;
    int mood = 3;  // 1..5
    bool stressed = false;
};

struct PhqRecord {
    WearableDay four_week_means;  // stress fields unused
    int phq_score = 0;            // 0..24
    bool at_or_above_threshold = false;
};

signal::IbiSequence gen_ibi_sequence(const RhythmGenSpec& spec, uint64_t seed);

struct EcgWithTruth {
    signal::EcgTrace trace;
    std::vector<size_t> true_peaks;
};

// Gaussian R waves (sigma 12 ms, unit amplitude) at cumulative beat times,
// plus optional white noise. True peak indices come back exactly.
EcgWithTruth gen_ecg_from_ibis(const signal::IbiSequence& ibis, double sample_rate_hz,
                               double noise_sd, uint64_t seed);

// Per-second magnitudes: walking N(10.5, 0.6), running N(16.0, 2.5), both
// truncated at 0.
signal::AccelWindow gen_accel(Activity activity, int seconds, uint64_t seed);

double met_value(Activity activity);
double calories_burned(Activity activity, double duration_min, double weight_lbs);

CalorieRecord gen_calorie_record(uint64_t seed);

WearableDay gen_wearable_day(uint64_t seed);
// Rejection-sample until the label matches.
WearableDay gen_wearable_day_with_label(bool stressed, uint64_t seed);

// Logistic stress model over z-scored features (fixed population stats):
// steps -0.8, rhr +0.9, sleep -0.7, nrem_hr +0.6, mood -1.0.
double stress_logit(const WearableDay& day);

PhqRecord gen_phq_record(uint64_t seed);
PhqRecord gen_phq_record_with_class(bool at_or_above, uint64_t seed);

// Linear PHQ score model (same feature directions, noise sd 2.0) before
// clamping to [0, 24].
double phq_score_mean(const WearableDay& means);

}  // namespace pulse::synth
