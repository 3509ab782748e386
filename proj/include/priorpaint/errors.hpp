#pragma once

#include <stdexcept>
#include <string>

namespace priorpaint {

/// Invalid argument to a library operation (shape mismatch, bad range, ...).
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Training produced a non-finite loss. Carries the offending step index.
class TrainingDivergedError : public std::runtime_error {
public:
    TrainingDivergedError(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

/// A required checkpoint or dataset is missing or incompatible.
class DependencyError : public std::runtime_error {
public:
    explicit DependencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad or inconsistent run configuration (unknown keys, missing variant, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace priorpaint
