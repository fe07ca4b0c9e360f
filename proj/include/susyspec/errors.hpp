#pragma once

#include <stdexcept>
#include <string>

namespace susyspec {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Config text could not be tokenized / does not follow the grammar.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Config parsed but violates a model invariant (non-Hermitian matrix,
// segment gap/overlap, dimension mismatch, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Energy parameter too close to the essential-spectrum axis [0,inf).
struct SpectrumProximity : Error {
    explicit SpectrumProximity(const std::string& msg) : Error(msg) {}
};

// A linear solve was refused (condition estimate above threshold) or a
// propagator product overflowed.
struct IllConditioned : Error {
    explicit IllConditioned(const std::string& msg) : Error(msg) {}
};

// Parseval window cannot reach the requested tolerance.
struct WindowTooSmall : Error {
    explicit WindowTooSmall(const std::string& msg) : Error(msg) {}
};

// Decay-rate fit has fewer than the minimum number of usable points.
struct DegenerateFit : Error {
    explicit DegenerateFit(const std::string& msg) : Error(msg) {}
};

} // namespace susyspec
