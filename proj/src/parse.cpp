#include "siegel/parse.hpp"

#include <cctype>
#include <charconv>

#include "siegel/errors.hpp"

namespace siegel {

namespace {

constexpr const char* kPiDigits = "3.141592653589793238462643383279502884197";
constexpr const char* kEDigits = "2.718281828459045235360287471352662497757";

mpq_class decimal_to_rational(std::string_view digits, std::string_view frac, long exponent) {
  std::string all(digits);
  all += frac;
  mpz_class mantissa(all.empty() ? std::string("0") : all, 10);
  long shift = exponent - static_cast<long>(frac.size());
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  mpq_class q = shift >= 0 ? mpq_class(mantissa * ten_pow) : mpq_class(mantissa, ten_pow);
  q.canonicalize();
  return q;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParsedReal parse() {
    ParsedReal out;
    out.value = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    out.warnings = std::move(warnings_);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::InvalidInput,
                "cannot parse real \"" + std::string(text_) + "\" at offset " +
                    std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  SurdNumber expression() {
    SurdNumber v = term();
    for (;;) {
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }

  SurdNumber term() {
    SurdNumber v = factor();
    for (;;) {
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        SurdNumber d = factor();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  SurdNumber factor() {
    skip_space();
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    if (accept('(')) {
      SurdNumber v = expression();
      expect(')');
      return v;
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                text_[pos_] == '.')) {
      return SurdNumber(number());
    }
    std::string name = identifier();
    if (name == "sqrt") {
      expect('(');
      skip_space();
      mpq_class n = number();
      expect(')');
      if (n.get_den() != 1 || n < 0 || !n.get_num().fits_ulong_p()) {
        fail("sqrt takes a nonnegative integer");
      }
      return SurdNumber::sqrt_of(n.get_num().get_ui());
    }
    if (name == "golden") return (SurdNumber::sqrt_of(5) - SurdNumber(1)) / SurdNumber(2);
    if (name == "sqrt2m1") return SurdNumber::sqrt_of(2) - SurdNumber(1);
    if (name == "sqrt3m1") return SurdNumber::sqrt_of(3) - SurdNumber(1);
    if (name == "pi" || name == "e") {
      warnings_.push_back("'" + name + "' replaced by a 40-digit decimal approximation");
      std::string_view digits = name == "pi" ? kPiDigits : kEDigits;
      return SurdNumber(decimal_to_rational(digits.substr(0, 1), digits.substr(2), 0));
    }
    if (name.empty()) fail("expected a number");
    fail("unknown name '" + name + "'");
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  mpq_class number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view whole = text_.substr(start, pos_ - start);
    std::string_view frac;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      std::size_t fs = ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      frac = text_.substr(fs, pos_ - fs);
    }
    if (whole.empty() && frac.empty()) fail("expected digits");
    long exponent = 0;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t es = ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view ex = text_.substr(es, pos_ - es);
      if (!ex.empty() && ex.front() == '+') ex.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(ex.data(), ex.data() + ex.size(), exponent);
      if (ec != std::errc() || ptr != ex.data() + ex.size() || std::labs(exponent) > 4000) {
        fail("bad exponent");
      }
    }
    return decimal_to_rational(whole, frac, exponent);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace

ParsedReal parse_real(std::string_view text) { return Parser(text).parse(); }

std::vector<ParsedReal> parse_real_list(std::string_view text) {
  std::vector<ParsedReal> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      out.push_back(parse_real(text.substr(start, i - start)));
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    }
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      std::string_view item = text.substr(start, i - start);
      int v = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size()) {
        throw Error(ErrorKind::InvalidInput, "bad integer list item \"" + std::string(item) + "\"");
      }
      out.push_back(v);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace siegel
