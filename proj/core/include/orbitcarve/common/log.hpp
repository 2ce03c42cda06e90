#pragma once

#include <string>
#include <vector>

namespace orbitcarve::log {

void info(const std::string& message);
void warn(const std::string& message);
void debug(const std::string& message);

// Silences stdout/stderr logging below warnings (used by tests and --quiet).
void set_verbose(bool verbose);

// Records every warning emitted while alive, in emission order. Captures nest;
// each live capture sees all warnings.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  std::vector<std::string> messages() const;
  bool contains(const std::string& needle) const;

 private:
  friend void warn(const std::string&);
  std::vector<std::string> messages_;
};

}  // namespace orbitcarve::log
