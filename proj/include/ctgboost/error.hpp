#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctgboost {

enum class ErrorKind {
    // input data and schema
    Io,
    MissingColumn,
    UnparsableCell,
    InvalidLabel,
    NonFiniteValue,
    EmptyDataset,
    EmptyInput,
    LengthMismatch,
    LabelOutOfRange,
    NonFiniteInput,
    // configuration
    InvalidConfig,
    UnknownParam,
    FoldsExceedClassCount,
    // training / evaluation
    TooFewSamples,
    SingleClassDataset,
    EmptyMatrix,
    // model persistence
    VersionMismatch,
    CorruptModel,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Broad grouping used by the command line to pick an exit status.
enum class ErrorCategory { Data, Config, Training };

ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_of(kind_); }

private:
    ErrorKind kind_;
};

}  // namespace ctgboost
