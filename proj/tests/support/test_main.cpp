#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <malloc.h>

#include "orbitcarve/common/log.hpp"

int main(int argc, char** argv) {
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  orbitcarve::log::set_verbose(false);
  doctest::Context context(argc, argv);
  return context.run();
}
