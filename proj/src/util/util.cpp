#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pulse/util/errors.hpp"
#include "pulse/util/hash.hpp"
#include "pulse/util/rng.hpp"
#include "pulse/util/textio.hpp"

namespace pulse {

const char* err_name(Err e) {
    switch (e) {
        case Err::empty_series: return "EmptySeries";
        case Err::too_short: return "TooShort";
        case Err::no_peaks_found: return "NoPeaksFound";
        case Err::too_few_peaks: return "TooFewPeaks";
        case Err::invalid_rate: return "InvalidRate";
        case Err::length_mismatch: return "LengthMismatch";
        case Err::invalid_spec: return "InvalidSpec";
        case Err::unknown_activity: return "UnknownActivity";
        case Err::negative_duration: return "NegativeDuration";
        case Err::shape_mismatch: return "ShapeMismatch";
        case Err::variant_unsupported: return "VariantUnsupported";
        case Err::insufficient_pool: return "InsufficientPool";
        case Err::context_overflow: return "ContextOverflow";
        case Err::divergence: return "Divergence";
        case Err::empty_train_set: return "EmptyTrainSet";
        case Err::checkpoint_format: return "CheckpointFormat";
        case Err::empty_input: return "Empty";
        case Err::zero_reference: return "ZeroReference";
        case Err::mixed_datasets: return "MixedDatasets";
        case Err::no_runs_found: return "NoRunsFound";
        case Err::io_error: return "IoError";
        case Err::config_error: return "ConfigError";
        case Err::missing_checkpoint: return "MissingCheckpoint";
    }
    return "Unknown";
}

std::string hash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Err::io_error, "cannot open " + path);
    Fnv1a64 h;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h.update(buf, static_cast<size_t>(in.gcount()));
        if (!in) break;
    }
    return h.digest();
}

double portable_log(double x) {
    if (x <= 0.0 || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(x)) return x;
    int e = 0;
    double m = std::frexp(x, &e);  // m in [0.5, 1)
    // shift mantissa into [sqrt(1/2), sqrt(2))
    if (m < 0.70710678118654752440) {
        m *= 2.0;
        e -= 1;
    }
    // ln(m) = 2 atanh((m-1)/(m+1))
    const double s = (m - 1.0) / (m + 1.0);
    const double s2 = s * s;
    double term = s;
    double acc = 0.0;
    for (int k = 1; k <= 27; k += 2) {
        acc += term / static_cast<double>(k);
        term *= s2;
    }
    constexpr double ln2 = 0.69314718055994530942;
    return 2.0 * acc + static_cast<double>(e) * ln2;
}

double CounterRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s <= 0.0 || s >= 1.0) continue;
        const double f = std::sqrt(-2.0 * portable_log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string s(buf);
    if (s == "-0" || s.rfind("-0.", 0) == 0) {
        bool all_zero = true;
        for (char c : s)
            if (c >= '1' && c <= '9') all_zero = false;
        if (all_zero) s.erase(0, 1);  // "-0.0" -> "0.0"
    }
    return s;
}

std::string format_number(double v, int decimals) {
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-12 && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", r);
        return std::string(buf);
    }
    return format_fixed(v, decimals);
}

double round_decimals(double v, int decimals) {
    double scale = 1.0;
    for (int i = 0; i < decimals; ++i) scale *= 10.0;
    return std::round(v * scale) / scale;
}

std::string join_csv(const std::vector<double>& values, int decimals) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_fixed(values[i], decimals);
    }
    return out;
}

std::string join_csv_int(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_number(values[i], 0);
    }
    return out;
}

double parse_double(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) raise(Err::io_error, "empty numeric field");
    double v = 0.0;
    const char* b = t.data();
    const char* e = b + t.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
        raise(Err::io_error, "bad numeric field '" + t + "'");
    return v;
}

int64_t parse_int(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) raise(Err::io_error, "empty integer field");
    int64_t v = 0;
    const char* b = t.data();
    const char* e = b + t.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
        raise(Err::io_error, "bad integer field '" + t + "'");
    return v;
}

bool scan_first_number(const std::string& text, double* out) {
    const size_t n = text.size();
    for (size_t i = 0; i < n; ++i) {
        const char c = text[i];
        const bool digit = std::isdigit(static_cast<unsigned char>(c)) != 0;
        const bool sign_start =
            (c == '-' || c == '+') && i + 1 < n &&
            (std::isdigit(static_cast<unsigned char>(text[i + 1])) != 0 ||
             (text[i + 1] == '.' && i + 2 < n &&
              std::isdigit(static_cast<unsigned char>(text[i + 2])) != 0));
        const bool dot_start = c == '.' && i + 1 < n &&
                               std::isdigit(static_cast<unsigned char>(text[i + 1])) != 0;
        if (!digit && !sign_start && !dot_start) continue;
        size_t j = i;
        if (text[j] == '-' || text[j] == '+') ++j;
        bool seen_dot = false;
        size_t end = j;
        while (end < n) {
            if (std::isdigit(static_cast<unsigned char>(text[end]))) {
                ++end;
            } else if (text[end] == '.' && !seen_dot) {
                seen_dot = true;
                ++end;
            } else {
                break;
            }
        }
        // bare "." after digits is fine ("214." parses as 214)
        const std::string span = text.substr(i, end - i);
        char* endp = nullptr;
        const double v = std::strtod(span.c_str(), &endp);
        if (endp != span.c_str()) {
            *out = v;
            return true;
        }
    }
    return false;
}

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Err::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Err::io_error, "cannot write " + path);
    out << content;
    if (!out) raise(Err::io_error, "short write to " + path);
}

}  // namespace pulse
