#include "stochint/weight.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stochint {

WeightFunction WeightFunction::constant(double c) {
  WeightFunction w;
  w.kind_ = Kind::kConstant;
  w.coeffs_ = {c};
  return w;
}

WeightFunction WeightFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) {
    throw std::invalid_argument("WeightFunction::polynomial: empty coefficient list");
  }
  WeightFunction w;
  w.kind_ = Kind::kPolynomial;
  w.coeffs_ = std::move(coeffs);
  return w;
}

WeightFunction WeightFunction::custom(Evaluator f, double derivative_bound,
                                      std::string label) {
  if (!f) {
    throw std::invalid_argument("WeightFunction::custom: null evaluator");
  }
  if (!(derivative_bound >= 0.0) || !std::isfinite(derivative_bound)) {
    throw std::invalid_argument("WeightFunction::custom: derivative bound must be finite and >= 0");
  }
  WeightFunction w;
  w.kind_ = Kind::kCustom;
  w.coeffs_.clear();
  w.eval_ = std::move(f);
  w.derivative_bound_ = derivative_bound;
  w.label_ = std::move(label);
  return w;
}

const std::vector<double>& WeightFunction::coefficients() const {
  if (kind_ == Kind::kCustom) {
    throw std::logic_error("WeightFunction::coefficients: custom weight has no polynomial form");
  }
  return coeffs_;
}

double WeightFunction::derivative_bound() const {
  if (kind_ != Kind::kCustom) {
    throw std::logic_error("WeightFunction::derivative_bound: only declared for custom weights");
  }
  return derivative_bound_;
}

double WeightFunction::value(double s, const Interval& iv) const {
  if (!iv.contains(s)) {
    throw std::domain_error("eval_weight: point " + std::to_string(s) +
                            " outside [" + std::to_string(iv.t0) + ", " +
                            std::to_string(iv.t1) + "]");
  }
  if (kind_ == Kind::kCustom) {
    return eval_(s, iv);
  }
  // Horner in u = s - t0.
  const double u = s - iv.t0;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * u + *it;
  }
  return acc;
}

namespace {

std::string format_coeff(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return buf;
}

double parse_number(std::string_view tok, std::string_view whole) {
  // std::from_chars<double> is incomplete on some libstdc++ versions; strtod
  // with an explicit end check is equivalent here.
  std::string owned(tok);
  if (owned.empty()) {
    throw std::invalid_argument("weight descriptor: empty number in '" + std::string(whole) + "'");
  }
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (end != owned.c_str() + owned.size() || !std::isfinite(v)) {
    throw std::invalid_argument("weight descriptor: bad number '" + owned + "' in '" +
                                std::string(whole) + "'");
  }
  return v;
}

}  // namespace

std::string WeightFunction::descriptor() const {
  switch (kind_) {
    case Kind::kConstant:
      return "const:" + format_coeff(coeffs_[0]);
    case Kind::kPolynomial: {
      std::string out = "poly:";
      for (size_t k = 0; k < coeffs_.size(); ++k) {
        if (k) out += ',';
        out += format_coeff(coeffs_[k]);
      }
      return out;
    }
    case Kind::kCustom:
      return "custom:" + label_;
  }
  assert(false);
  return {};
}

WeightFunction WeightFunction::parse(std::string_view d) {
  constexpr std::string_view kConst = "const:";
  constexpr std::string_view kPoly = "poly:";
  if (d.substr(0, kConst.size()) == kConst) {
    return constant(parse_number(d.substr(kConst.size()), d));
  }
  if (d.substr(0, kPoly.size()) == kPoly) {
    std::vector<double> coeffs;
    std::string_view rest = d.substr(kPoly.size());
    while (true) {
      const size_t comma = rest.find(',');
      coeffs.push_back(parse_number(rest.substr(0, comma), d));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return polynomial(std::move(coeffs));
  }
  throw std::invalid_argument("weight descriptor: expected 'const:<c>' or 'poly:<c0>,<c1>,...', got '" +
                              std::string(d) + "'");
}

double eval_weight(const WeightFunction& w, double s, const Interval& iv) {
  return w.value(s, iv);
}

}  // namespace stochint
