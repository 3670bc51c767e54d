#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "owcad/mpoly.hpp"

namespace owcad {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, unsigned line, unsigned column);
  unsigned line() const { return line_; }
  unsigned column() const { return column_; }
  /// Message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  unsigned line_;
  unsigned column_;
};

/// Thrown for identifiers missing from the variable order.
class UndeclaredVariable : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Parses expr := term (('+'|'-') term)*, term := factor ('*' factor)*,
/// factor := base ('^' uint)?, base := integer | ident | '(' expr ')'.
/// A leading unary minus is accepted on terms.
MPoly parse_poly(std::string_view text, const Context& ctx);

}  // namespace owcad
