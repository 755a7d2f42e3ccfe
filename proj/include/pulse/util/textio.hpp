#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pulse {

// Fixed-point rendering, e.g. format_fixed(136.5, 1) == "136.5".
// All prompt/answer text goes through these so files are byte-stable.
std::string format_fixed(double v, int decimals);

// Integer when integral, otherwise fixed point with the given decimals.
std::string format_number(double v, int decimals);

// Round to a fixed number of decimals (ties away from zero, matching the
// printf rendering used above).
double round_decimals(double v, int decimals);

// "896,1192,592" — no spaces, matching the prompt examples.
std::string join_csv(const std::vector<double>& values, int decimals);
std::string join_csv_int(const std::vector<double>& values);

// Strict full-string numeric parses; throw PulseError(data_error) on junk.
double parse_double(const std::string& s);
int64_t parse_int(const std::string& s);

// Scan text for the first decimal number (sign and decimal point honored).
// Returns false when no digits are present.
bool scan_first_number(const std::string& text, double* out);

std::string lowercase(const std::string& s);
std::vector<std::string> split(const std::string& s, char delim);
std::string trim(const std::string& s);

// Whole-file helpers.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pulse
