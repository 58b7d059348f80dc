#include "lsaps/error.hpp"

namespace lsaps {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidSize: return "invalid-size";
        case ErrorKind::InvalidConfig: return "invalid-config";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
        case ErrorKind::DegenerateSignal: return "degenerate-signal";
        case ErrorKind::LeverageSaturation: return "leverage-saturation";
        case ErrorKind::SelectionFailed: return "selection-failed";
        case ErrorKind::UndefinedMetric: return "undefined-metric";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Schema: return "schema";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace lsaps
