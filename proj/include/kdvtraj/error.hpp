#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdvtraj {

/// Failure categories raised by the library. Every throwing operation uses
/// kdvtraj::Error carrying one of these codes.
enum class ErrorCode {
    NonPositiveFluidParam,
    NonPositiveAmplitude,
    EqualAmplitudes,
    TooManySolitons,
    EmptySystem,
    PoleProximity,
    OutOfDomain,
    BadPermutation,
    EmptyTrajectory,
    ParticleInInteraction,
    ConditionNotMet,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kdvtraj
