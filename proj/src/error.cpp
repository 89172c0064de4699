#include "ctgboost/error.hpp"

namespace ctgboost {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Io: return "Io";
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::UnparsableCell: return "UnparsableCell";
        case ErrorKind::InvalidLabel: return "InvalidLabel";
        case ErrorKind::NonFiniteValue: return "NonFiniteValue";
        case ErrorKind::EmptyDataset: return "EmptyDataset";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorKind::NonFiniteInput: return "NonFiniteInput";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::UnknownParam: return "UnknownParam";
        case ErrorKind::FoldsExceedClassCount: return "FoldsExceedClassCount";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::SingleClassDataset: return "SingleClassDataset";
        case ErrorKind::EmptyMatrix: return "EmptyMatrix";
        case ErrorKind::VersionMismatch: return "VersionMismatch";
        case ErrorKind::CorruptModel: return "CorruptModel";
    }
    return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Io:
        case ErrorKind::MissingColumn:
        case ErrorKind::UnparsableCell:
        case ErrorKind::InvalidLabel:
        case ErrorKind::NonFiniteValue:
        case ErrorKind::EmptyDataset:
        case ErrorKind::EmptyInput:
        case ErrorKind::LengthMismatch:
        case ErrorKind::LabelOutOfRange:
        case ErrorKind::NonFiniteInput:
        case ErrorKind::VersionMismatch:
        case ErrorKind::CorruptModel:
            return ErrorCategory::Data;
        case ErrorKind::InvalidConfig:
        case ErrorKind::UnknownParam:
        case ErrorKind::FoldsExceedClassCount:
            return ErrorCategory::Config;
        case ErrorKind::TooFewSamples:
        case ErrorKind::SingleClassDataset:
        case ErrorKind::EmptyMatrix:
            return ErrorCategory::Training;
    }
    return ErrorCategory::Training;
}

}  // namespace ctgboost
