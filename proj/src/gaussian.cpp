#include "sumprod/gaussian.hpp"

#include <ostream>

namespace sumprod {

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (o.is_real()) {
    re_ *= o.re_;
    im_ *= o.re_;
    return *this;
  }
  if (is_real()) {
    im_ = re_ * o.im_;
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "complex division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const Rational n = o.norm();
  Rational re = (re_ * o.re_ + im_ * o.im_) / n;
  Rational im = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussianRational::str() const {
  if (im_.is_zero()) return re_.str();
  std::string imag = im_ == Rational(1) ? "" : (im_ == Rational(-1) ? "-" : im_.str());
  if (re_.is_zero()) return imag + "i";
  if (im_.sign() > 0) return re_.str() + "+" + imag + "i";
  return re_.str() + imag + "i";
}

std::size_t GaussianRational::hash() const noexcept {
  const std::size_t a = re_.hash();
  const std::size_t b = im_.hash();
  return a ^ (b * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

}  // namespace sumprod
