#include "pca/rational.hpp"

#include <cctype>

namespace pca {

Rat parse_rat(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = t.find('/');
  if (slash != std::string::npos) {
    Int num(t.substr(0, slash));
    Int den(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num, den);
  }
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    std::string intpart = t.substr(0, dot);
    std::string frac = t.substr(dot + 1);
    if (frac.empty() && (intpart.empty() || intpart == "-"))
      throw std::invalid_argument("bad rational literal: " + s);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (neg) intpart = intpart.substr(1);
    if (intpart.empty()) intpart = "0";
    for (char c : intpart + frac)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("bad rational literal: " + s);
    Int num(intpart + frac);
    Int den = 1;
    for (size_t k = 0; k < frac.size(); ++k) den *= 10;
    Rat r(num, den);
    return neg ? Rat(-r) : r;
  }
  return Rat(Int(t));
}

std::string format_rat(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

std::string format_decimal(const Rat& r, int digits) {
  Int num = numerator(r), den = denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  Int scale = 1;
  for (int k = 0; k < digits; ++k) scale *= 10;
  // round half away from zero
  Int scaled = (num * scale * 2 + den) / (den * 2);
  Int whole = scaled / scale, frac = scaled % scale;
  std::string out = (neg && scaled != 0 ? "-" : "") + whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += "." + std::string(digits - f.size(), '0') + f;
  }
  return out;
}

ExtRat parse_extrat(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)))
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "inf" || t == "infinity") return ExtRat::infinity();
  return ExtRat(parse_rat(s));
}

std::string format_extrat(const ExtRat& e) {
  return e.is_infinite() ? "inf" : format_rat(e.value());
}

}  // namespace pca
