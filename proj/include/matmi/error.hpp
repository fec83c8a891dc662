#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace matmi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad mesh size, non-positive
/// conductivity, mismatched meshes, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class DegenerateElementError : public PreconditionError {
public:
    DegenerateElementError(std::size_t element, double signed_area);

    std::size_t element() const noexcept { return element_; }
    double signed_area() const noexcept { return signed_area_; }

private:
    std::size_t element_;
    double signed_area_;
};

/// A conductivity coefficient is not strictly positive (or below a floor).
class InadmissibleConductivityError : public PreconditionError {
public:
    InadmissibleConductivityError(const std::string& what, std::size_t node, double value);

    std::size_t node() const noexcept { return node_; }
    double value() const noexcept { return value_; }

private:
    std::size_t node_;
    double value_;
};

/// A linear solve did not reach its residual contract.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::vector<double> residual_history);

    const std::vector<double>& residual_history() const noexcept { return history_; }
    double final_residual() const noexcept { return history_.empty() ? 0.0 : history_.back(); }

private:
    std::vector<double> history_;
};

/// Invalid run configuration; carries the offending key and line when known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string key = {}, int line = 0);

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace matmi
