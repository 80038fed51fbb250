#pragma once

#include <stdexcept>
#include <string>

namespace wtar {

/// Argument outside the domain of an operation (u not in [0,1), bad lag, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested (family, vanishing moments) pair is not shipped.
class UnsupportedWavelet : public std::invalid_argument {
public:
    explicit UnsupportedWavelet(const std::string& what) : std::invalid_argument(what) {}
};

/// Projection grid too coarse for the requested resolution level.
class InsufficientResolution : public std::invalid_argument {
public:
    explicit InsufficientResolution(const std::string& what) : std::invalid_argument(what) {}
};

/// Simulation request violates the ergodicity conditions.
class NonergodicModel : public std::invalid_argument {
public:
    explicit NonergodicModel(const std::string& what) : std::invalid_argument(what) {}
};

/// Innovation variance is negative.
class InvalidVariance : public std::invalid_argument {
public:
    explicit InvalidVariance(const std::string& what) : std::invalid_argument(what) {}
};

/// Series with zero variance where autocorrelations are requested.
class ConstantSeries : public std::invalid_argument {
public:
    explicit ConstantSeries(const std::string& what) : std::invalid_argument(what) {}
};

/// No candidate threshold produced a well-posed regression.
class FitFailed : public std::runtime_error {
public:
    explicit FitFailed(const std::string& what) : std::runtime_error(what) {}
};

/// Too many bootstrap replicates failed to refit.
class BootstrapUnstable : public std::runtime_error {
public:
    explicit BootstrapUnstable(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wtar
