#pragma once

#include <stdexcept>
#include <string>

namespace qinsch {

/// Base class for all qinsch run-time failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// inv_laplacian_zero_mean received a field with non-negligible mean.
class MeanNotZeroError : public Error {
public:
    explicit MeanNotZeroError(const std::string& msg) : Error(msg) {}
};

/// Configuration text could not be parsed or violates a range rule.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Checkpoint bytes are malformed (bad header, truncated payload, grid mismatch).
class CheckpointError : public Error {
public:
    explicit CheckpointError(const std::string& msg) : Error(msg) {}
};

/// Nonlinear solve failures (Picard stagnation, exhausted dt backoffs).
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

class PicardDivergedError : public SolverError {
public:
    PicardDivergedError(const std::string& msg, int iters, double residual)
        : SolverError(msg), iterations(iters), final_residual(residual) {}
    int iterations;
    double final_residual;
};

} // namespace qinsch
