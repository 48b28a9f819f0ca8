#pragma once

#include <stdexcept>
#include <string>

namespace wavekin {

// Scientific failures: the computation is well formed but the mathematics
// rejected it (unverified growth assumptions, blown-up step, ...).
struct ScientificError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Usage / IO failures: malformed configuration, bad file, inconsistent shapes.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterOutOfRange : UsageError {
    using UsageError::UsageError;
};

struct FormatError : UsageError {
    using UsageError::UsageError;
};

struct LevelMismatch : UsageError {
    using UsageError::UsageError;
};

struct MissingLevel : UsageError {
    using UsageError::UsageError;
};

struct UnnormalizedWeights : UsageError {
    using UsageError::UsageError;
};

struct UnverifiedDispersion : ScientificError {
    using ScientificError::ScientificError;
};

struct RootNotBracketed : ScientificError {
    using ScientificError::ScientificError;
};

struct BalanceViolated : ScientificError {
    using ScientificError::ScientificError;
};

struct StepRejected : ScientificError {
    using ScientificError::ScientificError;
};

}  // namespace wavekin
