#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsaps {

enum class ErrorKind {
    InvalidSize,
    InvalidConfig,
    Singular,
    NotPositiveDefinite,
    DegenerateSignal,
    LeverageSaturation,
    SelectionFailed,
    UndefinedMetric,
    Precondition,
    Parse,
    Schema,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace lsaps
