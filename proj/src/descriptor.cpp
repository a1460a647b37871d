#include "warpcheck/descriptor.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "warpcheck/error.hpp"

namespace warpcheck {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Descriptor parse_descriptor(const std::string& key) {
  const std::string k = trim(key);
  Descriptor d;
  const auto open = k.find('(');
  if (open == std::string::npos) {
    d.name = k;
  } else {
    if (k.back() != ')') throw Error(ErrorKind::validation, "unbalanced parentheses in '" + key + "'");
    d.name = trim(k.substr(0, open));
    const std::string body = k.substr(open + 1, k.size() - open - 2);
    std::size_t pos = 0;
    while (pos <= body.size() && !trim(body).empty()) {
      const auto comma = body.find(',', pos);
      const std::string tok = trim(body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (tok.empty()) throw Error(ErrorKind::validation, "empty argument in '" + key + "'");
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        throw Error(ErrorKind::validation, "non-numeric argument '" + tok + "' in '" + key + "'");
      d.args.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (d.name.empty()) throw Error(ErrorKind::validation, "empty catalog key");
  for (char c : d.name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
      throw Error(ErrorKind::validation, "bad character in catalog key '" + key + "'");
  return d;
}

std::size_t descriptor_count(const Descriptor& d, std::size_t i, std::size_t fallback) {
  if (i >= d.args.size()) return fallback;
  const double v = d.args[i];
  if (v < 0.0 || v != std::floor(v) || v > 1e6)
    throw Error(ErrorKind::validation, d.name + ": argument " + std::to_string(i) + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace warpcheck
