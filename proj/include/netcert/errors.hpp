#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netcert {

/// Raised when expectation data does not cover every term of a decomposition.
class IncompleteDataError : public std::runtime_error {
public:
    IncompleteDataError(const std::string& what, std::vector<std::vector<int>> missing)
        : std::runtime_error(what), missing_(std::move(missing)) {}

    const std::vector<std::vector<int>>& missing() const noexcept { return missing_; }

private:
    std::vector<std::vector<int>> missing_;
};

/// Raised when a requested enumeration is too large for the chosen method.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a JSON document does not match the expected schema; path() is a JSON pointer.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace netcert
