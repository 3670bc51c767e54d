#include "owcad/parse.hpp"

#include <cctype>

namespace owcad {

ParseError::ParseError(const std::string& msg, unsigned line, unsigned column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      detail_(msg),
      line_(line),
      column_(column) {}

namespace {

class Parser {
 public:
  Parser(std::string_view s, const Context& ctx) : s_(s), ctx_(ctx) {}

  MPoly parse() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    MPoly r = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) {
    auto [line, col] = position(at);
    throw ParseError(msg, line, col);
  }

  std::pair<unsigned, unsigned> position(std::size_t at) const {
    unsigned line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly expr() {
    MPoly r(ctx_.size());
    bool neg = eat('-');
    if (!neg) eat('+');
    MPoly t = term();
    r = neg ? -t : t;
    while (true) {
      if (eat('+')) r += term();
      else if (eat('-')) r -= term();
      else break;
    }
    return r;
  }

  MPoly term() {
    MPoly r = factor();
    while (eat('*')) r *= factor();
    return r;
  }

  MPoly factor() {
    MPoly b = base();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      std::string_view digits = s_.substr(start, pos_ - start);
      if (digits.size() > 6) fail_at("exponent too large", start);
      b = b.pow(static_cast<unsigned>(std::stoul(std::string(digits))));
    }
    return b;
  }

  MPoly base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return MPoly::constant(ctx_.size(), Int(std::string(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto v = ctx_.find(name);
      if (!v) {
        auto [line, col] = position(start);
        throw UndeclaredVariable("undeclared variable '" + std::string(name) + "'", line, col);
      }
      return MPoly::variable(ctx_.size(), *v);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  const Context& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_poly(std::string_view text, const Context& ctx) { return Parser(text, ctx).parse(); }

}  // namespace owcad
