#include "uprod/group_registry.hpp"

namespace uprod {

GroupSpecifier parse_group_specifier(const std::string& text) {
  GroupSpecifier spec;
  spec.text = text;
  if (text == "z" || text == "Z") {
    spec.kind = GroupSpecifier::Kind::Z;
    spec.n = 1;
    return spec;
  }
  auto colon = text.find(':');
  if (colon == std::string::npos)
    fail("bad group '" + text + "': expected chw:<n>, fp:<n>, or z");
  std::string family = text.substr(0, colon);
  std::string rank_text = text.substr(colon + 1);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(rank_text, &used);
    if (used != rank_text.size()) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    fail("bad group rank in '" + text + "'");
  }
  if (n < 0 || n > 64) fail("group rank out of range in '" + text + "'");
  if (family == "chw")
    spec.kind = GroupSpecifier::Kind::Chw;
  else if (family == "fp")
    spec.kind = GroupSpecifier::Kind::Fp;
  else
    fail("unknown group family '" + family + "'");
  spec.n = n;
  return spec;
}

}  // namespace uprod
