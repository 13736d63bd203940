#include "ittail/literal.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ittail/errors.hpp"

namespace ittail {
namespace {

std::string strip(std::string_view in) {
  std::string out;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::string s) : s_(std::move(s)) {}

  bool done() const { return i_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[i_]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  bool accept(std::string_view word) {
    if (s_.compare(i_, word.size(), word) != 0) return false;
    i_ += word.size();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  double number() {
    double v = 0.0;
    const char* b = s_.data() + i_;
    const char* e = s_.data() + s_.size();
    // from_chars does not take a leading '+'.
    if (*b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p == b) fail("expected a decimal number");
    i_ = static_cast<std::size_t>(p - s_.data());
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const {
    std::string tok = done() ? "<end>" : s_.substr(i_, 12);
    throw ParseError(what + " at '" + tok + "' (offset " + std::to_string(i_) + ") in \"" + s_ + "\"");
  }
  std::size_t pos() const { return i_; }
  const std::string& text() const { return s_; }

 private:
  std::string s_;
  std::size_t i_ = 0;
};

ExpPoly parse_exppoly_at(Cursor& c) {
  std::vector<ExpTerm> terms;
  bool first = true;
  while (true) {
    double sign = 1.0;
    if (c.accept('-'))
      sign = -1.0;
    else if (!c.accept('+') && !first)
      break;
    double coef = 1.0;
    if (c.accept("e(")) {
      // bare exponential
    } else {
      if (c.accept('(')) {
        coef = c.number();
        c.expect(')');
      } else {
        coef = c.number();
      }
      c.expect('*');
      if (!c.accept("e(")) c.fail("expected 'e('");
    }
    double expo = c.number();
    c.expect(')');
    terms.push_back({sign * coef, -expo});
    first = false;
    if (c.done() || c.peek() == ')') break;
    if (c.peek() != '+' && c.peek() != '-') c.fail("expected '+' or '-' between terms");
  }
  return ExpPoly(std::move(terms));
}

std::vector<double> args(Cursor& c) {
  std::vector<double> out;
  c.expect('(');
  out.push_back(c.number());
  while (c.accept(',')) out.push_back(c.number());
  c.expect(')');
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string format_exppoly(const ExpPoly& p) {
  if (p.is_zero()) return "0*e(0)";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& t = p.terms()[i];
    if (i) out += '+';
    if (t.coef < 0)
      out += "(" + format_number(t.coef) + ")";
    else
      out += format_number(t.coef);
    out += "*e(" + format_number(-t.rate) + ")";
  }
  return out;
}

ExpPoly parse_exppoly(std::string_view text) {
  Cursor c(strip(text));
  if (c.done()) c.fail("empty exponential polynomial");
  ExpPoly p = parse_exppoly_at(c);
  if (!c.done()) c.fail("unexpected trailing input");
  return p;
}

DistributionSpec parse_distribution(std::string_view text) {
  Cursor c(strip(text));
  auto wrap = [&](auto make) -> DistributionSpec {
    try {
      return make();
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string(e.what()) + " in \"" + c.text() + "\"");
    }
  };
  auto want = [&](const std::vector<double>& a, std::size_t lo, std::size_t hi, const char* name) {
    if (a.size() < lo || a.size() > hi)
      throw ParseError(std::string(name) + ": wrong number of parameters in \"" + c.text() + "\"");
  };

  std::optional<DistributionSpec> out;
  if (c.accept("exptail(")) {
    ExpPoly p = parse_exppoly_at(c);
    c.expect(')');
    out = wrap([&] { return DistributionSpec(ExpPolyTail{p}); });
  } else if (c.accept("exp")) {
    auto a = args(c);
    want(a, 1, 1, "exp");
    out = wrap([&] { return DistributionSpec(Exponential{a[0]}); });
  } else if (c.accept("gamma")) {
    auto a = args(c);
    want(a, 1, 2, "gamma");
    out = wrap([&] { return DistributionSpec(Gamma{a[0], a.size() > 1 ? a[1] : 1.0}); });
  } else if (c.accept("weibull")) {
    auto a = args(c);
    want(a, 1, 2, "weibull");
    out = wrap([&] { return DistributionSpec(Weibull{a[0], a.size() > 1 ? a[1] : 1.0}); });
  } else if (c.accept("bpareto")) {
    auto a = args(c);
    want(a, 2, 2, "bpareto");
    out = wrap([&] { return DistributionSpec(BranchedPareto{a[0], a[1]}); });
  } else if (c.accept("polyexp")) {
    auto a = args(c);
    want(a, 1, 1, "polyexp");
    out = wrap([&] { return DistributionSpec(PolyExpExample{a[0]}); });
  } else if (c.accept("maxexp")) {
    auto a = args(c);
    out = wrap([&] { return DistributionSpec(MaxExp{a}); });
  } else {
    c.fail("unknown distribution");
  }
  if (!c.done()) c.fail("unexpected trailing input");
  return *out;
}

}  // namespace ittail
