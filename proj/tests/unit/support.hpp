#pragma once

#include <doctest.h>

#include <initializer_list>
#include <vector>

#include "sumprod/set_core.hpp"

namespace support {

inline sumprod::FiniteComplexSet reals(std::initializer_list<long> xs) {
  std::vector<sumprod::GaussianRational> v;
  for (long x : xs) v.emplace_back(sumprod::Rational(x));
  return sumprod::FiniteComplexSet(std::move(v));
}

template <class F>
sumprod::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const sumprod::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return sumprod::ErrorCode::Undecided;
}

}  // namespace support
