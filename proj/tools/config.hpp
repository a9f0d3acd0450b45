#pragma once

#include <map>
#include <string>
#include <string_view>

#include "xyzbethe/errors.hpp"

namespace xyzbethe::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Flat "key = value" lines; '#' starts a comment. Keys are normalised to the
// flag spelling (underscores become dashes). Throws ConfigError.
std::map<std::string, std::string> parse_config(std::string_view text);
std::map<std::string, std::string> load_config_file(const std::string& path);

}  // namespace xyzbethe::cli
