// The integers as a one-generator group context: the standard unique product
// group used as a control in tests and sweeps.

#pragma once

#include <string>
#include <vector>

namespace uprod {

struct ZGroup {
  using element_type = long long;
  int rank() const { return 1; }
  long long identity() const { return 0; }
  long long multiply(long long a, long long b) const { return a + b; }
  long long invert(long long a) const { return -a; }
  std::string canonical_key(long long a) const { return std::to_string(a); }
  std::vector<long long> generators() const { return {1}; }
};

}  // namespace uprod
