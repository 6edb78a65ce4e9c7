#include "plcomp/arithmetic.hpp"

#include <cctype>
#include <charconv>

namespace plcomp {

namespace {

struct Token {
  bool is_op = false;
  char op = 0;
  std::int64_t value = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (std::isdigit(c)) {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
      if (ec != std::errc()) throw ParseError("bad literal in expression");
      i = static_cast<std::size_t>(ptr - s.data());
      out.push_back({false, 0, v});
    } else if (c == '+' || c == '-' || c == '*') {
      out.push_back({true, static_cast<char>(c), 0});
      ++i;
    } else if (s.substr(i, 2) == "\xC3\x97") {  // U+00D7 multiplication sign
      out.push_back({true, '*', 0});
      i += 2;
    } else if (s.substr(i, 3) == "\xE2\x88\x92") {  // U+2212 minus sign
      out.push_back({true, '-', 0});
      i += 3;
    } else {
      throw ParseError(std::string("unexpected character in expression: '") + s[i] + "'");
    }
  }
  return out;
}

}  // namespace

std::int64_t eval_arithmetic(std::string_view expression) {
  const auto tokens = tokenize(expression);
  if (tokens.empty() || tokens.size() % 2 == 0) throw ParseError("expression must alternate literal/operator");
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i].is_op != (i % 2 == 1)) throw ParseError("expression must alternate literal/operator");

  // Sum of signed products.
  std::int64_t total = 0;
  std::int64_t term = tokens[0].value;
  int sign = 1;
  for (std::size_t i = 1; i < tokens.size(); i += 2) {
    const char op = tokens[i].op;
    const std::int64_t v = tokens[i + 1].value;
    if (op == '*') {
      term *= v;
    } else {
      total += sign * term;
      sign = op == '+' ? 1 : -1;
      term = v;
    }
  }
  return total + sign * term;
}

std::string arithmetic_prompt(std::string_view expression) {
  return "User: Calculate " + std::string(expression) + ".\nAssistant:\\boxed{";
}

std::string arithmetic_label(std::int64_t answer) { return " " + std::to_string(answer) + "}"; }

std::vector<ArithmeticRecord> gen_arithmetic(const ArithmeticOptions& options,
                                             const SkillDistribution& dist, std::size_t n, Rng& rng) {
  if (options.operand_max < options.operand_min)
    throw std::invalid_argument("gen_arithmetic: empty operand range");
  const auto range = static_cast<std::size_t>(options.operand_max - options.operand_min + 1);
  if (dist.size() != range) throw std::invalid_argument("gen_arithmetic: distribution size != operand range");
  static constexpr char kOps[3] = {'+', '-', '*'};
  std::vector<ArithmeticRecord> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    ArithmeticRecord rec;
    for (std::size_t i = 0; i <= options.num_ops; ++i) {
      const std::size_t s = dist.sample(rng);
      rec.skills.push_back(s);
      rec.operands.push_back(options.operand_min + static_cast<std::int64_t>(s));
      if (i < options.num_ops) rec.operators.push_back(kOps[rng.below(3)]);
    }
    for (std::size_t i = 0; i < rec.operands.size(); ++i) {
      if (i) {
        rec.expression += ' ';
        rec.expression += rec.operators[i - 1];
        rec.expression += ' ';
      }
      rec.expression += std::to_string(rec.operands[i]);
    }
    rec.answer = eval_arithmetic(rec.expression);
    rec.prompt = arithmetic_prompt(rec.expression);
    rec.label = arithmetic_label(rec.answer);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace plcomp
