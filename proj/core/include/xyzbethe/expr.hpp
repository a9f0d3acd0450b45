#pragma once

#include <string_view>

#include "xyzbethe/errors.hpp"
#include "xyzbethe/linalg.hpp"

namespace xyzbethe {

class ExpressionError : public Error {
 public:
  using Error::Error;
};

// Complex constant expressions: numbers, pi, e, i, + - * / ^ and
// parentheses. Juxtaposition multiplies and binds tighter than * and /, so
// "pi/(5e)" and "pi/5e" agree and "0.6i" is 0.6 i. Throws ExpressionError.
cplx parse_complex(std::string_view text);

}  // namespace xyzbethe
