#include "orbitcarve/common/error.hpp"

#include <fmt/format.h>

namespace orbitcarve {

ParseError::ParseError(const std::string& path, const std::string& what_arg, long long location,
                       bool is_byte_offset)
    : Error(fmt::format("{}:{}{}: {}", path, is_byte_offset ? "byte " : "", location, what_arg)),
      location_(location),
      is_byte_offset_(is_byte_offset) {}

IndexError::IndexError(const std::string& what_arg, long long face)
    : Error(fmt::format("face {}: {}", face, what_arg)), face_(face) {}

ConvergenceError::ConvergenceError(const std::string& what_arg, int iterations, double residual)
    : Error(fmt::format("{} (after {} iterations, relative residual {:.3e})", what_arg, iterations,
                        residual)),
      iterations_(iterations),
      residual_(residual) {}

NumericalError::NumericalError(const std::string& what_arg, int iteration, int view)
    : Error(fmt::format("iteration {}, view {}: {}", iteration, view, what_arg)),
      iteration_(iteration),
      view_(view) {}

FrameError::FrameError(int frame, const std::string& message)
    : Error(fmt::format("frame {}: {}", frame, message)), frame_(frame) {}

}  // namespace orbitcarve
