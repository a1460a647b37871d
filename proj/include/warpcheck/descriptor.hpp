#pragma once

#include <string>
#include <vector>

namespace warpcheck {

/// A catalog key such as "kmu-space-form(2,0.5,1,-1)" split into its name
/// and positional numeric arguments.
struct Descriptor {
  std::string name;
  std::vector<double> args;
};

/// Throws a validation error on malformed keys.
Descriptor parse_descriptor(const std::string& key);

/// Integer argument `i`, or `fallback` when absent. Throws when the value is
/// not a non-negative integer.
std::size_t descriptor_count(const Descriptor& d, std::size_t i, std::size_t fallback);

}  // namespace warpcheck
