#pragma once

#include <stdexcept>
#include <string>

#include "nslice/instance.hpp"

namespace nslice {

/// Raised on malformed instance/solution files; the message carries the
/// offending field or byte position.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal string that parses back to exactly `v`.
std::string format_number(double v);
/// Strict inverse of format_number; throws ParseError on trailing garbage.
double parse_number(const std::string& text, const std::string& context);

/// Instance files are UTF-8 JSON with a schema_version field. All numbers are
/// written as decimal strings so values round-trip bit-exactly, and unlimited
/// capacities are written as the token "inf".
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace nslice
