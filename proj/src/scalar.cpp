#include "jtk/scalar.hpp"

#include <stdexcept>

namespace jtk {

std::string field_name(Field f) { return f == Field::Q ? "Q" : "Qi"; }

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("Scalar: division by zero");
  if (im == 0) return Scalar(1 / re);
  mpq_class n = re * re + im * im;
  return Scalar(re / n, -im / n);
}

static std::string rat_str(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Scalar::str() const {
  if (im == 0) return rat_str(re);
  std::string s;
  if (re != 0) {
    s = rat_str(re);
    if (im > 0) s += "+";
  }
  if (im == 1)
    s += "i";
  else if (im == -1)
    s += "-i";
  else
    s += rat_str(im) + "i";
  return s;
}

std::string Scalar::pair_str() const {
  auto frac = [](const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
  };
  return frac(re) + " " + frac(im);
}

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw std::runtime_error("empty rational literal");
  mpq_class q;
  if (q.set_str(text.find('/') == std::string::npos ? text + "/1" : text, 10) != 0)
    throw std::runtime_error("bad rational literal: " + text);
  if (q.get_den() == 0) throw std::runtime_error("zero denominator: " + text);
  q.canonicalize();
  return q;
}

}  // namespace jtk
