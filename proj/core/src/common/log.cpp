#include "orbitcarve/common/log.hpp"

#include <algorithm>
#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace orbitcarve::log {
namespace {

std::mutex& capture_mutex() {
  static std::mutex m;
  return m;
}

std::vector<WarningCapture*>& captures() {
  static std::vector<WarningCapture*> c;
  return c;
}

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> l = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_color_sink_mt>();
    auto lg = std::make_shared<spdlog::logger>("orbitcarve", sink);
    lg->set_pattern("[%l] %v");
    lg->set_level(spdlog::level::info);
    return lg;
  }();
  return l;
}

}  // namespace

void info(const std::string& message) { logger()->info(message); }
void debug(const std::string& message) { logger()->debug(message); }

void warn(const std::string& message) {
  {
    std::lock_guard lock(capture_mutex());
    for (WarningCapture* c : captures()) c->messages_.push_back(message);
  }
  logger()->warn(message);
}

void set_verbose(bool verbose) {
  logger()->set_level(verbose ? spdlog::level::info : spdlog::level::err);
}

WarningCapture::WarningCapture() {
  std::lock_guard lock(capture_mutex());
  captures().push_back(this);
}

WarningCapture::~WarningCapture() {
  std::lock_guard lock(capture_mutex());
  auto& c = captures();
  c.erase(std::remove(c.begin(), c.end(), this), c.end());
}

std::vector<std::string> WarningCapture::messages() const {
  std::lock_guard lock(capture_mutex());
  return messages_;
}

bool WarningCapture::contains(const std::string& needle) const {
  std::lock_guard lock(capture_mutex());
  return std::any_of(messages_.begin(), messages_.end(),
                     [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

}  // namespace orbitcarve::log
