// numdiff a b: compares two text files token by token; numbers within 1e-12 + 1e-11 |x|.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "cannot read %s\n", path.c_str());
    std::exit(2);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  for (char& c : text)
    if (c == ',' || c == '[' || c == ']' || c == '{' || c == '}' || c == ':') c = ' ';
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

bool number(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && !s.empty();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: numdiff a b\n");
    return 2;
  }
  const auto a = tokens(argv[1]);
  const auto b = tokens(argv[2]);
  if (a.size() != b.size()) {
    std::fprintf(stderr, "token counts differ: %zu vs %zu\n", a.size(), b.size());
    return 1;
  }
  for (size_t i = 0; i < a.size(); ++i) {
    double x, y;
    if (number(a[i], x) && number(b[i], y)) {
      const bool both_nan = std::isnan(x) && std::isnan(y);
      if (!both_nan && !(std::abs(x - y) <= 1e-12 + 1e-11 * std::max(std::abs(x), std::abs(y)))) {
        std::fprintf(stderr, "token %zu: %s vs %s\n", i, a[i].c_str(), b[i].c_str());
        return 1;
      }
    } else if (a[i] != b[i]) {
      std::fprintf(stderr, "token %zu: '%s' vs '%s'\n", i, a[i].c_str(), b[i].c_str());
      return 1;
    }
  }
  return 0;
}
