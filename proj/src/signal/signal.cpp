#include "pulse/signal/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pulse/util/errors.hpp"
#include "pulse/util/textio.hpp"

namespace pulse::signal {

const char* rhythm_name(RhythmLabel label) {
    switch (label) {
        case RhythmLabel::normal_sinus: return "Normal Sinus";
        case RhythmLabel::atrial_fibrillation: return "Atrial Fibrillation";
        case RhythmLabel::sinus_bradycardia: return "Sinus Bradycardia";
        case RhythmLabel::sinus_tachycardia: return "Sinus Tachycardia";
    }
    return "?";
}

void validate(const EcgTrace& ecg) {
    if (ecg.samples.empty()) raise(Err::empty_series, "ECG trace has no samples");
    if (!(ecg.sample_rate_hz > 0)) raise(Err::invalid_rate, "sample rate must be positive");
    for (double v : ecg.samples)
        if (!std::isfinite(v)) raise(Err::empty_series, "non-finite ECG sample");
}

void validate(const IbiSequence& ibis) {
    if (ibis.intervals_ms.empty()) raise(Err::empty_series, "IBI sequence is empty");
    for (double v : ibis.intervals_ms)
        if (!(v > 200.0 && v < 4000.0))
            raise(Err::invalid_spec, "IBI outside (200, 4000) ms: " + format_fixed(v, 1));
}

void validate(const HrSeries& hr) {
    if (hr.rates_bpm.empty()) raise(Err::empty_series, "HR series is empty");
    for (double v : hr.rates_bpm)
        if (!(v > 20.0 && v < 300.0))
            raise(Err::invalid_spec, "HR outside (20, 300) bpm: " + format_fixed(v, 1));
}

void validate(const AccelWindow& w) {
    if (w.window_seconds <= 0) raise(Err::invalid_spec, "window_seconds must be positive");
    if (static_cast<int>(w.magnitudes_mps2.size()) != w.window_seconds)
        raise(Err::length_mismatch, "accel window length != window_seconds");
    for (double v : w.magnitudes_mps2)
        if (!(v >= 0.0) || !std::isfinite(v))
            raise(Err::invalid_spec, "accel magnitude must be finite and >= 0");
}

double mean_hr(const HrSeries& hr) {
    if (hr.rates_bpm.empty()) raise(Err::empty_series, "mean_hr of empty series");
    double acc = 0.0;
    for (double v : hr.rates_bpm) acc += v;
    return acc / static_cast<double>(hr.rates_bpm.size());
}

double ibi_to_hr(const IbiSequence& ibis) {
    if (ibis.intervals_ms.empty()) raise(Err::empty_series, "ibi_to_hr of empty sequence");
    double acc = 0.0;
    for (double v : ibis.intervals_ms) acc += v;
    const double mean_ms = acc / static_cast<double>(ibis.intervals_ms.size());
    return 60000.0 / mean_ms;
}

RhythmLabel classify_rhythm_rule(double mean_hr_bpm) {
    if (mean_hr_bpm < 60.0) return RhythmLabel::sinus_bradycardia;
    if (mean_hr_bpm > 100.0) return RhythmLabel::sinus_tachycardia;
    return RhythmLabel::normal_sinus;
}

namespace {

// Centered moving average with a shrinking window at the edges (divide by
// covered count, not nominal width). Zero phase, so the detector needs no
// group-delay bookkeeping, and beats at the very first/last samples keep
// their energy.
std::vector<double> moving_average_centered(const std::vector<double>& x, int window) {
    const int n = static_cast<int>(x.size());
    const int half = window / 2;
    std::vector<double> prefix(static_cast<size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    std::vector<double> out(x.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + (window - 1 - half));
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace

std::vector<size_t> detect_r_peaks(const EcgTrace& ecg) {
    validate(ecg);
    const double fs = ecg.sample_rate_hz;
    const int n = static_cast<int>(ecg.samples.size());
    if (static_cast<double>(n) / fs < 2.0)
        raise(Err::too_short, "need at least 2 seconds of ECG");

    // ~5-15 Hz bandpass: cascaded short averagers (QRS-width smoothing) minus
    // a 0.2 s baseline average
    const int w_qrs = std::max(2, static_cast<int>(std::lround(0.040 * fs)));
    const int w_base = std::max(w_qrs + 2, static_cast<int>(std::lround(fs / 5.0)));
    const auto smooth = moving_average_centered(
        moving_average_centered(ecg.samples, w_qrs), w_qrs);
    const auto base = moving_average_centered(ecg.samples, w_base);
    std::vector<double> bp(ecg.samples.size());
    for (int i = 0; i < n; ++i) bp[i] = smooth[i] - base[i];

    // centered derivative (one-sided at the edges), squared
    std::vector<double> sq(ecg.samples.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - 1);
        const int hi = std::min(n - 1, i + 1);
        const double d = (bp[hi] - bp[lo]) / static_cast<double>(hi - lo);
        sq[i] = d * d;
    }

    // 150 ms moving-window integration proposes candidate neighborhoods
    const int w_mwi = std::max(3, static_cast<int>(std::lround(0.150 * fs)));
    const auto mwi = moving_average_centered(sq, w_mwi);

    if (!(*std::max_element(mwi.begin(), mwi.end()) > 0.0))
        raise(Err::no_peaks_found, "no energy above baseline");

    const int refractory = std::max(1, static_cast<int>(std::lround(0.250 * fs)));
    const int refine_half = std::max(1, static_cast<int>(std::lround(0.040 * fs)));

    auto refine_on_bp = [&](int center) {
        const int lo = std::max(0, center - refine_half);
        const int hi = std::min(n - 1, center + refine_half);
        int r = lo;
        for (int t = lo; t <= hi; ++t)
            if (bp[t] > bp[r]) r = t;
        return r;
    };

    // candidate = local max of the integrated energy, located on bp
    std::vector<int> candidates;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || mwi[i] >= mwi[i - 1];
        const bool right_ok = (i == n - 1) || mwi[i] > mwi[i + 1];
        if (left_ok && right_ok && mwi[i] > 0.0) candidates.push_back(refine_on_bp(i));
    }
    if (candidates.empty()) raise(Err::no_peaks_found, "no candidate peaks");

    // running peak estimate of the bandpassed R amplitude, seeded with the
    // median of per-2s-block maxima so one big beat cannot mask the others
    double running_peak;
    {
        const int block = std::max(1, static_cast<int>(std::lround(2.0 * fs)));
        std::vector<double> block_max;
        for (int s = 0; s < n; s += block) {
            const int e = std::min(n, s + block);
            block_max.push_back(*std::max_element(bp.begin() + s, bp.begin() + e));
        }
        std::sort(block_max.begin(), block_max.end());
        running_peak = block_max[block_max.size() / 2];
    }
    if (!(running_peak > 0.0)) raise(Err::no_peaks_found, "no positive R amplitude");

    std::vector<int> peaks;
    std::vector<double> heights;
    auto accept = [&](int r, double threshold_scale) {
        const double h = bp[r];
        if (!(h > threshold_scale * running_peak)) return;
        if (!peaks.empty() && r - peaks.back() < refractory) {
            if (h > heights.back()) {
                peaks.back() = r;
                heights.back() = h;
                running_peak = 0.875 * running_peak + 0.125 * h;
            }
            return;
        }
        peaks.push_back(r);
        heights.push_back(h);
        running_peak = 0.875 * running_peak + 0.125 * h;
    };
    for (int r : candidates) accept(r, 0.5);

    // search back through long gaps with the threshold halved
    if (peaks.size() >= 3) {
        std::vector<int> rr;
        for (size_t q = 1; q < peaks.size(); ++q) rr.push_back(peaks[q] - peaks[q - 1]);
        std::nth_element(rr.begin(), rr.begin() + rr.size() / 2, rr.end());
        const int median_rr = rr[rr.size() / 2];
        std::vector<int> found;
        for (size_t q = 1; q < peaks.size(); ++q) {
            if (peaks[q] - peaks[q - 1] <= static_cast<int>(1.66 * median_rr)) continue;
            const int lo = peaks[q - 1] + refractory;
            const int hi = peaks[q] - refractory;
            if (lo >= hi) continue;
            int best = lo;
            for (int t = lo; t <= hi; ++t)
                if (bp[t] > bp[best]) best = t;
            if (bp[best] > 0.25 * running_peak) found.push_back(best);
        }
        peaks.insert(peaks.end(), found.begin(), found.end());
        std::sort(peaks.begin(), peaks.end());
    }

    if (peaks.empty()) raise(Err::no_peaks_found, "threshold never crossed");
    return std::vector<size_t>(peaks.begin(), peaks.end());
}

IbiSequence peaks_to_ibis(const std::vector<size_t>& peaks, double sample_rate_hz) {
    if (peaks.size() < 2) raise(Err::too_few_peaks, "need at least 2 peaks");
    if (!(sample_rate_hz > 0)) raise(Err::invalid_rate, "sample rate must be positive");
    IbiSequence out;
    out.intervals_ms.reserve(peaks.size() - 1);
    for (size_t i = 0; i + 1 < peaks.size(); ++i) {
        if (peaks[i + 1] <= peaks[i])
            raise(Err::too_few_peaks, "peak indices must be strictly increasing");
        out.intervals_ms.push_back(
            static_cast<double>(peaks[i + 1] - peaks[i]) / sample_rate_hz * 1000.0);
    }
    return out;
}

EcgTrace resample(const EcgTrace& ecg, double target_hz) {
    validate(ecg);
    if (!(target_hz > 0.0) || target_hz > ecg.sample_rate_hz)
        raise(Err::invalid_rate, "target rate must be in (0, source]");
    if (target_hz == ecg.sample_rate_hz) return ecg;

    const double fs = ecg.sample_rate_hz;
    const double ratio = target_hz / fs;
    const int n_in = static_cast<int>(ecg.samples.size());
    const int n_out = static_cast<int>(std::lround(n_in * ratio));

    // cutoff at 0.45 x target Nyquist, Kaiser beta 8, 10 sinc lobes per side
    const double fc = 0.45 * (target_hz / 2.0);
    const double fc_norm = fc / fs;  // cycles per input sample
    const int half = static_cast<int>(std::ceil(10.0 / (2.0 * fc_norm)));
    const double beta = 8.0;

    auto bessel_i0 = [](double x) {
        double acc = 1.0, term = 1.0;
        for (int k = 1; k < 40; ++k) {
            term *= (x / (2.0 * k)) * (x / (2.0 * k));
            acc += term;
            if (term < 1e-18 * acc) break;
        }
        return acc;
    };
    const double i0_beta = bessel_i0(beta);

    EcgTrace out;
    out.sample_rate_hz = target_hz;
    out.lead_name = ecg.lead_name;
    out.samples.resize(static_cast<size_t>(n_out));

    for (int j = 0; j < n_out; ++j) {
        const double center = static_cast<double>(j) / ratio;
        const int lo = std::max(0, static_cast<int>(std::ceil(center)) - half);
        const int hi = std::min(n_in - 1, static_cast<int>(std::floor(center)) + half);
        double acc = 0.0, ksum = 0.0;
        for (int t = lo; t <= hi; ++t) {
            const double u = static_cast<double>(t) - center;
            const double x = 2.0 * fc_norm * u;
            const double sinc = (x == 0.0) ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
            const double w = u / static_cast<double>(half);
            const double kaiser = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - w * w))) / i0_beta;
            const double k = sinc * kaiser;
            acc += ecg.samples[static_cast<size_t>(t)] * k;
            ksum += k;
        }
        out.samples[static_cast<size_t>(j)] = (ksum != 0.0) ? acc / ksum : 0.0;
    }
    return out;
}

AccelWindow accel_magnitude_windows(const std::vector<double>& ax,
                                    const std::vector<double>& ay,
                                    const std::vector<double>& az, double sample_rate_hz,
                                    int window_seconds) {
    if (ax.size() != ay.size() || ay.size() != az.size())
        raise(Err::length_mismatch, "accelerometer axes differ in length");
    if (!(sample_rate_hz > 0)) raise(Err::invalid_rate, "sample rate must be positive");
    if (window_seconds <= 0) raise(Err::invalid_spec, "window_seconds must be positive");
    const size_t per_block = static_cast<size_t>(std::lround(sample_rate_hz));
    if (per_block == 0) raise(Err::invalid_rate, "sample rate below 1 Hz");
    if (ax.size() < per_block * static_cast<size_t>(window_seconds))
        raise(Err::too_short, "need window_seconds x sample_rate samples");

    AccelWindow out;
    out.window_seconds = window_seconds;
    out.magnitudes_mps2.reserve(static_cast<size_t>(window_seconds));
    for (int b = 0; b < window_seconds; ++b) {
        double acc = 0.0;
        for (size_t i = 0; i < per_block; ++i) {
            const size_t t = static_cast<size_t>(b) * per_block + i;
            acc += std::sqrt(ax[t] * ax[t] + ay[t] * ay[t] + az[t] * az[t]);
        }
        out.magnitudes_mps2.push_back(acc / static_cast<double>(per_block));
    }
    return out;
}

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) raise(Err::io_error, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) raise(Err::io_error, path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line) != expected_header)
        raise(Err::io_error, path + ": expected header '" + expected_header + "', got '" +
                                 trim(line) + "'");
    const size_t ncols = split(expected_header, ',').size();
    std::vector<std::vector<double>> cols(ncols);
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != ncols)
            raise(Err::io_error,
                  path + " row " + std::to_string(row) + ": expected " +
                      std::to_string(ncols) + " columns");
        for (size_t c = 0; c < ncols; ++c) {
            double v;
            try {
                v = parse_double(fields[c]);
            } catch (const PulseError&) {
                raise(Err::io_error,
                      path + " row " + std::to_string(row) + ": bad numeric value '" +
                          trim(fields[c]) + "'");
            }
            if (!std::isfinite(v))
                raise(Err::io_error,
                      path + " row " + std::to_string(row) + ": non-finite value");
            cols[c].push_back(v);
        }
    }
    if (cols[0].empty()) raise(Err::io_error, path + ": no data rows");
    return cols;
}

double infer_rate(const std::vector<double>& t, const std::string& path) {
    if (t.size() < 2) raise(Err::io_error, path + ": need at least 2 rows");
    std::vector<double> dt;
    dt.reserve(t.size() - 1);
    for (size_t i = 0; i + 1 < t.size(); ++i) dt.push_back(t[i + 1] - t[i]);
    std::nth_element(dt.begin(), dt.begin() + dt.size() / 2, dt.end());
    const double med = dt[dt.size() / 2];
    if (!(med > 0)) raise(Err::io_error, path + ": timestamps not increasing");
    return 1.0 / med;
}

}  // namespace

EcgTrace read_ecg_csv(const std::string& path) {
    const auto cols = read_numeric_csv(path, "t_seconds,amplitude");
    EcgTrace out;
    out.samples = cols[1];
    out.sample_rate_hz = infer_rate(cols[0], path);
    out.lead_name = "csv";
    return out;
}

AccelCsv read_accel_csv(const std::string& path) {
    const auto cols = read_numeric_csv(path, "t_seconds,ax,ay,az");
    AccelCsv out;
    out.t_seconds = cols[0];
    out.ax = cols[1];
    out.ay = cols[2];
    out.az = cols[3];
    out.sample_rate_hz = infer_rate(cols[0], path);
    return out;
}

IbiSequence read_ibi_csv(const std::string& path) {
    const auto cols = read_numeric_csv(path, "ibi_ms");
    return IbiSequence{cols[0]};
}

}  // namespace pulse::signal
