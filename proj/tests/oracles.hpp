#pragma once

// Reference implementations used only by the tests. Each one recomputes a
// quantity the slow, obvious way and shares no code with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

/// Visits every index sequence in [0,d)^k with its probability prod p[i_t].
inline void for_each_sequence(std::size_t d, std::size_t k, const std::vector<double>& p,
                              const std::function<void(const std::vector<std::size_t>&, double)>& fn) {
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    double prob = 1.0;
    for (auto i : idx) prob *= p[i];
    fn(idx, prob);
    std::size_t pos = 0;
    while (pos < k && ++idx[pos] == d) idx[pos++] = 0;
    if (pos == k) break;
  }
}

struct Expectation {
  double loss = 0.0;
  std::vector<double> grad;
};

/// E over all d^k sequences of the per-sample loss 1/2 (f - y)^2 and its
/// gradient, with the gradient formed by explicit leave-one-out products.
inline Expectation brute_population(const std::vector<double>& w, const std::vector<double>& wstar,
                                    const std::vector<double>& p, std::size_t k) {
  const std::size_t d = w.size();
  Expectation e;
  e.grad.assign(d, 0.0);
  for_each_sequence(d, k, p, [&](const std::vector<std::size_t>& idx, double prob) {
    double f = 1.0, y = 1.0;
    for (auto i : idx) {
      f *= w[i];
      y *= wstar[i];
    }
    e.loss += prob * 0.5 * (f - y) * (f - y);
    for (std::size_t t = 0; t < k; ++t) {
      double others = 1.0;
      for (std::size_t s = 0; s < k; ++s)
        if (s != t) others *= w[idx[s]];
      e.grad[idx[t]] += prob * (f - y) * others;
    }
  });
  return e;
}

/// Central differences of a scalar function of a vector.
inline std::vector<double> finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double x0 = x[j];
    x[j] = x0 + h;
    const double fp = f(x);
    x[j] = x0 - h;
    const double fm = f(x);
    x[j] = x0;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline std::vector<double> naive_zipf(std::size_t d, double alpha) {
  std::vector<double> p(d);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) total += std::pow(static_cast<double>(j + 1), -alpha);
  for (std::size_t j = 0; j < d; ++j) p[j] = std::pow(static_cast<double>(j + 1), -alpha) / total;
  return p;
}

/// Binomial 5-sigma band check for one cell.
inline bool within_binomial_band(std::uint64_t count, std::uint64_t n, double p, double sigmas = 5.0) {
  const double mean = static_cast<double>(n) * p;
  const double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  return std::abs(static_cast<double>(count) - mean) <= sigmas * sd + 1e-9;
}

/// Shunting-yard evaluation of + - * over non-negative integer literals.
inline long long shunting_yard(const std::string& expr) {
  std::vector<long long> values;
  std::vector<char> ops;
  auto prec = [](char c) { return c == '*' ? 2 : 1; };
  auto reduce = [&] {
    const long long b = values.back();
    values.pop_back();
    const long long a = values.back();
    values.pop_back();
    const char op = ops.back();
    ops.pop_back();
    values.push_back(op == '+' ? a + b : op == '-' ? a - b : a * b);
  };
  for (std::size_t i = 0; i < expr.size();) {
    const char c = expr[i];
    if (c == ' ') {
      ++i;
    } else if (c >= '0' && c <= '9') {
      long long v = 0;
      while (i < expr.size() && expr[i] >= '0' && expr[i] <= '9') v = v * 10 + (expr[i++] - '0');
      values.push_back(v);
    } else {
      while (!ops.empty() && prec(ops.back()) >= prec(c)) reduce();
      ops.push_back(c);
      ++i;
    }
  }
  while (!ops.empty()) reduce();
  return values.at(0);
}

/// Reads back "The <relation> of <entity> is <target>." sentences.
class FactTable {
 public:
  void add_sentence(const std::string& s) {
    const std::string pre = "The ", mid = " of ", is = " is ";
    if (s.rfind(pre, 0) != 0 || s.back() != '.') throw std::runtime_error("bad fact: " + s);
    const auto m = s.find(mid);
    const auto i = s.find(is, m);
    if (m == std::string::npos || i == std::string::npos) throw std::runtime_error("bad fact: " + s);
    const std::string rel = s.substr(pre.size(), m - pre.size());
    const std::string ent = s.substr(m + mid.size(), i - m - mid.size());
    const std::string tgt = s.substr(i + is.size(), s.size() - 1 - i - is.size());
    table_[{ent, rel}] = tgt;
  }

  /// Answers "Who is the rN of ... the r1 of X?" by walking outward from X.
  std::string answer(const std::string& question) const {
    const std::string pre = "Who is the ";
    if (question.rfind(pre, 0) != 0 || question.back() != '?') throw std::runtime_error("bad question");
    std::string body = question.substr(pre.size(), question.size() - pre.size() - 1);
    std::vector<std::string> parts;
    const std::string sep = " of the ";
    std::size_t pos = 0;
    while (true) {
      const auto next = body.find(sep, pos);
      if (next == std::string::npos) break;
      parts.push_back(body.substr(pos, next - pos));
      pos = next + sep.size();
    }
    const std::string tail = body.substr(pos);
    const auto of = tail.rfind(" of ");
    parts.push_back(tail.substr(0, of));
    std::string entity = tail.substr(of + 4);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) entity = table_.at({entity, *it});
    return entity;
  }

 private:
  std::map<std::pair<std::string, std::string>, std::string> table_;
};

}  // namespace oracle
