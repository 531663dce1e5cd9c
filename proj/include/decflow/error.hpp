#pragma once

#include <stdexcept>
#include <string>

namespace decflow {

/// Base class for all errors raised by the library. The category decides the
/// process exit code used by the command line tool.
class Error : public std::runtime_error {
public:
    enum class Category { Config = 1, Mesh = 2, Solver = 3 };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    Category category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(Category::Config, what) {}
};

class MeshError : public Error {
public:
    explicit MeshError(const std::string& what) : Error(Category::Mesh, what) {}
};

class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(Category::Solver, what) {}
};

} // namespace decflow
