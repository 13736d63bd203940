#include "ittail/sign_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ittail/errors.hpp"

namespace ittail {

std::string to_string(std::span<const Sign> signs) {
  std::string out;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i) out += ',';
    out += signs[i] == Sign::Plus ? '+' : '-';
  }
  return out;
}

std::string SignPattern::str() const { return to_string(signs); }

void SignPattern::push(Sign s, double witness, double value, Interval bracket) {
  if (!signs.empty() && signs.back() == s) {
    if (std::fabs(value) > std::fabs(witness_values.back())) {
      witnesses.back() = witness;
      witness_values.back() = value;
    }
    return;
  }
  if (!signs.empty()) change_points.push_back(bracket);
  signs.push_back(s);
  witnesses.push_back(witness);
  witness_values.push_back(value);
}

SignSequence parse_signs(std::string_view text) {
  SignSequence out;
  std::size_t i = 0;
  bool expect_sign = true;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == ' ' || c == '\t' || c == '"') {
      ++i;
      continue;
    }
    if (!expect_sign) {
      if (c != ',') throw ParseError("sign list: expected ',' at offset " + std::to_string(i));
      expect_sign = true;
      ++i;
      continue;
    }
    if (c == '+') {
      out.push_back(Sign::Plus);
      ++i;
    } else if (c == '-') {
      out.push_back(Sign::Minus);
      ++i;
    } else if (text.substr(i, 3) == "\xE2\x88\x92") {  // U+2212
      out.push_back(Sign::Minus);
      i += 3;
    } else {
      throw ParseError("sign list: unexpected character at offset " + std::to_string(i));
    }
    expect_sign = false;
  }
  if (expect_sign && !out.empty()) throw ParseError("sign list: trailing ','");
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k] == out[k - 1]) throw ParseError("sign list: adjacent signs must differ");
  return out;
}

SignPattern negated(const SignPattern& p) {
  SignPattern q = p;
  for (auto& s : q.signs) s = flip(s);
  for (auto& v : q.witness_values) v = -v;
  return q;
}

SignPattern concatenate(const SignPattern& head, const SignPattern& tail, Interval seam) {
  SignPattern out = head;
  for (std::size_t i = 0; i < tail.signs.size(); ++i) {
    Interval br = i == 0 ? seam : tail.change_points[i - 1];
    out.push(tail.signs[i], tail.witnesses[i], tail.witness_values[i], br);
  }
  out.uncertain = head.uncertain || tail.uncertain;
  out.confidence = (head.confidence == Confidence::Exact && tail.confidence == Confidence::Exact)
                       ? Confidence::Exact
                       : Confidence::Sampled;
  return out;
}

bool is_final_part(std::span<const Sign> part, std::span<const Sign> full) {
  if (part.size() > full.size()) return false;
  return std::equal(part.begin(), part.end(), full.end() - static_cast<std::ptrdiff_t>(part.size()));
}

bool is_contiguous_part(std::span<const Sign> part, std::span<const Sign> full) {
  if (part.empty()) return true;
  return std::search(full.begin(), full.end(), part.begin(), part.end()) != full.end();
}

bool matches(std::span<const Sign> signs, std::span<const SignSequence> allowed) {
  if (signs.empty()) return true;
  return std::any_of(allowed.begin(), allowed.end(),
                     [&](const SignSequence& a) { return is_contiguous_part(signs, a); });
}

bool matches(const SignPattern& p, std::span<const SignSequence> allowed) {
  return matches(std::span<const Sign>(p.signs), allowed);
}

std::vector<SignSequence> final_parts(std::span<const Sign> signs) {
  std::vector<SignSequence> out;
  for (std::size_t k = 0; k < signs.size(); ++k) out.emplace_back(signs.begin() + static_cast<std::ptrdiff_t>(k), signs.end());
  return out;
}

}  // namespace ittail
