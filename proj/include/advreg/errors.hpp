#pragma once

#include <stdexcept>
#include <string>

namespace advreg {

// Shape disagreement between operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad value content: invalid distribution, degenerate table, label out of range.
struct ValueError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input file; the message carries the offending line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance cannot be encoded (an entity falls beyond the maximum sentence
// length). Batch consumers catch this, count the skip and continue.
struct EncodeSkipError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Training aborted on a non-finite loss.
struct TrainingDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unusable configuration value or key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace advreg
