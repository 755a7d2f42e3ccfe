#pragma once

#include <stdexcept>
#include <string>

namespace pulse {

// Exit codes used by the CLI. Library code throws PulseError with the
// matching code; main() translates.
enum class ExitCode : int {
    ok = 0,
    config_error = 2,
    data_error = 3,
    training_divergence = 4,
    missing_artifact = 5,
};

enum class Err {
    // signal
    empty_series,
    too_short,
    no_peaks_found,
    too_few_peaks,
    invalid_rate,
    length_mismatch,
    // synth
    invalid_spec,
    unknown_activity,
    negative_duration,
    // task
    shape_mismatch,
    variant_unsupported,
    insufficient_pool,
    // lm / training
    context_overflow,
    divergence,
    empty_train_set,
    checkpoint_format,
    // eval / report
    empty_input,
    zero_reference,
    mixed_datasets,
    no_runs_found,
    // io / config
    io_error,
    config_error,
    missing_checkpoint,
};

const char* err_name(Err e);

class PulseError : public std::runtime_error {
public:
    PulseError(Err kind, const std::string& what)
        : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}

    Err kind() const { return kind_; }

    ExitCode exit_code() const {
        switch (kind_) {
            case Err::config_error:
                return ExitCode::config_error;
            case Err::divergence:
                return ExitCode::training_divergence;
            case Err::missing_checkpoint:
            case Err::no_runs_found:
                return ExitCode::missing_artifact;
            default:
                return ExitCode::data_error;
        }
    }

private:
    Err kind_;
};

[[noreturn]] inline void raise(Err kind, const std::string& what) {
    throw PulseError(kind, what);
}

}  // namespace pulse
