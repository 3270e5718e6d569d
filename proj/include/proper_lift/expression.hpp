#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace proper_lift {

/// Small arithmetic expression used for analytic metrics in config files, e.g.
/// "(1 + 0.1*(t/100)^2)^2". Supports + - * / ^, unary minus, parentheses,
/// sin cos tan exp log sqrt abs, and the constants pi and e.
class Expression {
 public:
  /// Throws ParseError on malformed input or unknown identifiers.
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  double operator()(std::span<const double> values) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace proper_lift
