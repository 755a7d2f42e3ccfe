#include "pulse/synth/synth.hpp"

#include <algorithm>
#include <cmath>

#include "pulse/util/errors.hpp"
#include "pulse/util/rng.hpp"

namespace pulse::synth {

const char* activity_name(Activity a) {
    switch (a) {
        case Activity::walking: return "walking";
        case Activity::biking: return "biking";
        case Activity::running: return "running";
    }
    return "?";
}

Activity activity_from_name(const std::string& name) {
    if (name == "walking") return Activity::walking;
    if (name == "biking") return Activity::biking;
    if (name == "running") return Activity::running;
    raise(Err::unknown_activity, "'" + name + "'");
}

RhythmGenSpec default_rhythm_spec(signal::RhythmLabel label, int n_beats) {
    using signal::RhythmLabel;
    RhythmGenSpec s;
    s.label = label;
    s.n_beats = n_beats;
    switch (label) {
        case RhythmLabel::normal_sinus:
            s.mean_rr_ms = 800.0;
            s.cv = 0.05;
            s.lag1_corr = 0.4;
            break;
        case RhythmLabel::atrial_fibrillation:
            s.mean_rr_ms = 800.0;
            s.cv = 0.25;
            s.lag1_corr = 0.0;
            break;
        case RhythmLabel::sinus_bradycardia:
            s.mean_rr_ms = 1200.0;
            s.cv = 0.05;
            s.lag1_corr = 0.4;
            break;
        case RhythmLabel::sinus_tachycardia:
            s.mean_rr_ms = 500.0;
            s.cv = 0.05;
            s.lag1_corr = 0.4;
            break;
    }
    return s;
}

signal::IbiSequence gen_ibi_sequence(const RhythmGenSpec& spec, uint64_t seed) {
    if (!(spec.mean_rr_ms > 300.0 && spec.mean_rr_ms < 2000.0))
        raise(Err::invalid_spec, "mean_rr_ms outside (300, 2000)");
    if (!(spec.cv >= 0.0 && spec.cv <= 0.5)) raise(Err::invalid_spec, "cv outside [0, 0.5]");
    if (!(spec.lag1_corr >= -1.0 && spec.lag1_corr <= 1.0))
        raise(Err::invalid_spec, "lag1_corr outside [-1, 1]");
    if (spec.n_beats < 1) raise(Err::invalid_spec, "n_beats must be positive");

    CounterRng rng = CounterRng(seed).fork("ibi");
    const double mu = spec.mean_rr_ms;
    const double sd = spec.cv * mu;
    signal::IbiSequence out;
    out.intervals_ms.reserve(static_cast<size_t>(spec.n_beats));

    auto clamp_range = [](double v) { return std::clamp(v, 200.0 + 1e-6, 4000.0 - 1e-6); };

    if (sd == 0.0) {
        out.intervals_ms.assign(static_cast<size_t>(spec.n_beats), mu);
        return out;
    }

    if (spec.label == signal::RhythmLabel::atrial_fibrillation) {
        // irregularly irregular: iid two-component mixture at mu +/- 0.8 sd
        // with component sd 0.6 sd; total variance = (0.64 + 0.36) sd^2
        for (int i = 0; i < spec.n_beats; ++i) {
            const double center = rng.bernoulli(0.5) ? mu + 0.8 * sd : mu - 0.8 * sd;
            out.intervals_ms.push_back(clamp_range(rng.normal(center, 0.6 * sd)));
        }
        return out;
    }

    // AR(1) with stationary mean mu and sd
    const double phi = spec.lag1_corr;
    const double innov_sd = sd * std::sqrt(std::max(0.0, 1.0 - phi * phi));
    double x = rng.normal(mu, sd);
    out.intervals_ms.push_back(clamp_range(x));
    for (int i = 1; i < spec.n_beats; ++i) {
        x = mu + phi * (x - mu) + rng.normal(0.0, innov_sd);
        out.intervals_ms.push_back(clamp_range(x));
    }
    return out;
}

EcgWithTruth gen_ecg_from_ibis(const signal::IbiSequence& ibis, double sample_rate_hz,
                               double noise_sd, uint64_t seed) {
    signal::validate(ibis);
    if (!(sample_rate_hz > 0)) raise(Err::invalid_rate, "sample rate must be positive");

    // beats at t = 0 and after each interval
    std::vector<double> beat_times{0.0};
    double t = 0.0;
    for (double iv : ibis.intervals_ms) {
        t += iv / 1000.0;
        beat_times.push_back(t);
    }

    const double tail_s = 0.3;
    const size_t n = static_cast<size_t>(std::lround((t + tail_s) * sample_rate_hz)) + 1;

    EcgWithTruth out;
    out.trace.sample_rate_hz = sample_rate_hz;
    out.trace.lead_name = "synthetic";
    out.trace.samples.assign(n, 0.0);

    const double sigma_s = 0.012;  // 12 ms R-wave width
    const int support = static_cast<int>(std::ceil(5.0 * sigma_s * sample_rate_hz));
    for (double bt : beat_times) {
        const int center = static_cast<int>(std::lround(bt * sample_rate_hz));
        out.true_peaks.push_back(static_cast<size_t>(center));
        for (int d = -support; d <= support; ++d) {
            const int idx = center + d;
            if (idx < 0 || idx >= static_cast<int>(n)) continue;
            const double dt = static_cast<double>(idx) / sample_rate_hz - bt;
            out.trace.samples[static_cast<size_t>(idx)] +=
                std::exp(-0.5 * (dt / sigma_s) * (dt / sigma_s));
        }
    }

    if (noise_sd > 0.0) {
        CounterRng rng = CounterRng(seed).fork("ecg-noise");
        for (auto& v : out.trace.samples) v += rng.normal(0.0, noise_sd);
    }
    return out;
}

signal::AccelWindow gen_accel(Activity activity, int seconds, uint64_t seed) {
    if (seconds < 1) raise(Err::invalid_spec, "seconds must be >= 1");
    double mean = 10.5, sd = 0.6;
    if (activity == Activity::running) {
        mean = 16.0;
        sd = 2.5;
    } else if (activity == Activity::biking) {
        raise(Err::unknown_activity, "accelerometer generator covers walking/running only");
    }
    CounterRng rng = CounterRng(seed).fork("accel");
    signal::AccelWindow out;
    out.window_seconds = seconds;
    out.magnitudes_mps2.reserve(static_cast<size_t>(seconds));
    for (int i = 0; i < seconds; ++i)
        out.magnitudes_mps2.push_back(std::max(0.0, rng.normal(mean, sd)));
    return out;
}

double met_value(Activity activity) {
    switch (activity) {
        case Activity::walking: return 3.5;
        case Activity::biking: return 7.5;
        case Activity::running: return 8.5;
    }
    raise(Err::unknown_activity, "bad activity enum");
}

double calories_burned(Activity activity, double duration_min, double weight_lbs) {
    if (duration_min < 0) raise(Err::negative_duration, "duration must be >= 0");
    if (!(weight_lbs > 0)) raise(Err::invalid_spec, "weight must be positive");
    return met_value(activity) * duration_min * weight_lbs / 200.0;
}

CalorieRecord gen_calorie_record(uint64_t seed) {
    CounterRng rng = CounterRng(seed).fork("calorie");
    CalorieRecord rec;
    const int pick = static_cast<int>(rng.uniform_int(0, 2));
    rec.activity = pick == 0 ? Activity::walking : (pick == 1 ? Activity::biking
                                                              : Activity::running);
    rec.duration_min = static_cast<double>(rng.uniform_int(10, 90));
    rec.weight_lbs = static_cast<double>(rng.uniform_int(100, 250));
    rec.calories = calories_burned(rec.activity, rec.duration_min, rec.weight_lbs);
    return rec;
}

namespace {

// Population statistics the z-scores are defined against. Fixed by the
// harness, not fitted.
constexpr double kStepsMean = 8000.0, kStepsSd = 3000.0;
constexpr double kRhrMean = 64.0, kRhrSd = 7.0;
constexpr double kSleepMean = 420.0, kSleepSd = 60.0;
constexpr double kNremMean = 58.0, kNremSd = 7.0;
constexpr double kMoodMean = 3.0, kMoodSd = 1.2;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

WearableDay draw_day(CounterRng& rng) {
    WearableDay d;
    d.steps = std::max<int64_t>(0, static_cast<int64_t>(std::lround(rng.normal(kStepsMean, kStepsSd))));
    d.rhr_bpm = std::clamp(std::round(rng.normal(kRhrMean, kRhrSd) * 10.0) / 10.0, 40.0, 100.0);
    d.sleep_minutes =
        std::clamp(std::round(rng.normal(kSleepMean, kSleepSd)), 0.0, 1440.0);
    d.nrem_hr_bpm = std::clamp(std::round((d.rhr_bpm - rng.uniform(2.0, 12.0)) * 10.0) / 10.0,
                               35.0, d.rhr_bpm + 30.0);
    d.mood = static_cast<int>(rng.uniform_int(1, 5));
    return d;
}

}  // namespace

double stress_logit(const WearableDay& day) {
    const double z_steps = (static_cast<double>(day.steps) - kStepsMean) / kStepsSd;
    const double z_rhr = (day.rhr_bpm - kRhrMean) / kRhrSd;
    const double z_sleep = (day.sleep_minutes - kSleepMean) / kSleepSd;
    const double z_nrem = (day.nrem_hr_bpm - kNremMean) / kNremSd;
    const double z_mood = (static_cast<double>(day.mood) - kMoodMean) / kMoodSd;
    return -0.8 * z_steps + 0.9 * z_rhr - 0.7 * z_sleep + 0.6 * z_nrem - 1.0 * z_mood;
}

WearableDay gen_wearable_day(uint64_t seed) {
    CounterRng rng = CounterRng(seed).fork("wearable");
    WearableDay d = draw_day(rng);
    d.stressed = rng.bernoulli(logistic(stress_logit(d)));
    return d;
}

WearableDay gen_wearable_day_with_label(bool stressed, uint64_t seed) {
    CounterRng base = CounterRng(seed).fork("wearable-label");
    for (uint64_t attempt = 0;; ++attempt) {
        CounterRng rng = base.fork(attempt);
        WearableDay d = draw_day(rng);
        d.stressed = rng.bernoulli(logistic(stress_logit(d)));
        if (d.stressed == stressed) return d;
    }
}

double phq_score_mean(const WearableDay& means) {
    // same directions as the stress model, gain 3, centered at 9
    return 9.0 + 3.0 * stress_logit(means);
}

namespace {

PhqRecord draw_phq(CounterRng& rng) {
    PhqRecord rec;
    rec.four_week_means = draw_day(rng);
    rec.four_week_means.stressed = false;
    const double noisy = phq_score_mean(rec.four_week_means) + rng.normal(0.0, 2.0);
    rec.phq_score = static_cast<int>(std::clamp(std::lround(noisy), 0L, 24L));
    rec.at_or_above_threshold = rec.phq_score >= 10;
    return rec;
}

}  // namespace

PhqRecord gen_phq_record(uint64_t seed) {
    CounterRng rng = CounterRng(seed).fork("phq");
    return draw_phq(rng);
}

PhqRecord gen_phq_record_with_class(bool at_or_above, uint64_t seed) {
    CounterRng base = CounterRng(seed).fork("phq-label");
    for (uint64_t attempt = 0;; ++attempt) {
        CounterRng rng = base.fork(attempt);
        PhqRecord rec = draw_phq(rng);
        if (rec.at_or_above_threshold == at_or_above) return rec;
    }
}

}  // namespace pulse::synth
