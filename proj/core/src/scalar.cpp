#include "rootflow/scalar.hpp"

#include <cstdio>

namespace rootflow {

std::string ScalarTraits<Complex>::str(const Complex& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
  return buf;
}

}  // namespace rootflow
