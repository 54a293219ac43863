#pragma once

#include <stdexcept>
#include <string>

namespace gravphase {

// Base class for everything this library throws.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite, negative, or otherwise out-of-contract inputs.
struct invalid_parameter : error {
    explicit invalid_parameter(const std::string& msg) : error(msg) {}
};

// Inputs outside the physical domain of a formula (e.g. inside a horizon).
struct domain_error : error {
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// A wavepacket touched the grid boundary, or the grid cannot hold it.
struct containment_error : error {
    explicit containment_error(const std::string& msg) : error(msg) {}
};

// Two states have too little overlap for a relative phase to mean anything.
struct no_overlap_error : error {
    explicit no_overlap_error(const std::string& msg) : error(msg) {}
};

// An iterative numerical procedure failed to converge or lost precision.
struct numerical_error : error {
    explicit numerical_error(const std::string& msg) : error(msg) {}
};

// Config file problems; carries no line info itself, the parser reports those.
struct config_error : error {
    explicit config_error(const std::string& msg) : error(msg) {}
};

// Filesystem trouble: unreadable inputs, unwritable outputs.
struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg) {}
};

}  // namespace gravphase
