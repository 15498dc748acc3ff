// Runtime group selection for the CLI and witness files: `chw:<n>` for the
// generalized Hantzsche-Wendt group G_n, `fp:<n>` for the free product of n
// C_2's, `z` for the integers.

#pragma once

#include <string>
#include <utility>

#include "uprod/chw.hpp"
#include "uprod/free_product.hpp"
#include "uprod/zgroup.hpp"

namespace uprod {

struct GroupSpecifier {
  enum class Kind { Chw, Fp, Z };
  Kind kind = Kind::Chw;
  int n = 0;
  std::string text;
};

GroupSpecifier parse_group_specifier(const std::string& text);

template <class F>
decltype(auto) with_group(const GroupSpecifier& spec, F&& f) {
  switch (spec.kind) {
    case GroupSpecifier::Kind::Chw: return f(ChwContext(spec.n));
    case GroupSpecifier::Kind::Fp: return f(FpContext(spec.n));
    case GroupSpecifier::Kind::Z: return f(ZGroup{});
  }
  fail("unreachable group kind");
}

}  // namespace uprod
