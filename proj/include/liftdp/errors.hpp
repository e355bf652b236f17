#pragma once

#include <stdexcept>
#include <string>

namespace liftdp {

/// Bad configuration, malformed input data, or violated preconditions.
/// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A resource limit (reachable-state budget) was exceeded. Exit code 3.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem trouble: missing file, unwritable output. Exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace liftdp
