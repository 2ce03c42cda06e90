#include <malloc.h>

#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char** argv) {
  // Keep freed per-view buffers in the heap instead of returning them to the OS.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  return orbitcarve::cli::run(std::vector<std::string>(argv, argv + argc));
}
