#pragma once

#include <stdexcept>
#include <string>

namespace orbitcarve {

// Base of every exception thrown by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `location` is a 1-based line number for text formats
// and a byte offset for binary ones.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what_arg, long long location,
             bool is_byte_offset);

  long long location() const { return location_; }
  bool is_byte_offset() const { return is_byte_offset_; }

 private:
  long long location_;
  bool is_byte_offset_;
};

// A face references a vertex that does not exist.
class IndexError : public Error {
 public:
  IndexError(const std::string& what_arg, long long face);
  long long face() const { return face_; }

 private:
  long long face_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A data-type invariant does not hold (mesh, camera, config, grid ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class EmptyMeshError : public Error {
 public:
  using Error::Error;
};

// Iterative solver ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what_arg, int iterations, double residual);
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

// Non-finite loss during optimization; records where it happened.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what_arg, int iteration, int view);
  int iteration() const { return iteration_; }
  int view() const { return view_; }

 private:
  int iteration_;
  int view_;
};

// Dataset problem attributable to a single frame.
class FrameError : public Error {
 public:
  FrameError(int frame, const std::string& message);
  int frame() const { return frame_; }

 private:
  int frame_;
};

}  // namespace orbitcarve
