#include "uprod/witness_io.hpp"

#include <fstream>
#include <sstream>

namespace uprod {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

WitnessFile parse_witness_text(const std::string& text) {
  WitnessFile file;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("group:", 0) == 0) {
      if (!file.group.empty()) fail("duplicate group header in witness file");
      file.group = trim(t.substr(6));
      if (file.group.empty()) fail("empty group header in witness file");
      continue;
    }
    file.words.push_back(t);
  }
  return file;
}

WitnessFile load_witness_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open witness file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_witness_text(ss.str());
}

std::string render_witness_text(const std::string& group,
                                const std::vector<std::string>& words) {
  std::string out = "group: " + group + "\n";
  for (const std::string& w : words) out += w + "\n";
  return out;
}

}  // namespace uprod
