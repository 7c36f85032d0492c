#pragma once

#include <doctest.h>

#include <functional>
#include <initializer_list>
#include <string>

#include "harmcoc/errors.hpp"
#include "harmcoc/linalg.hpp"

namespace harmcoc::testing {

inline CMatrix mat(std::initializer_list<std::initializer_list<cplx>> rows) {
  CMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (cplx x : row) m(r, c++) = x;
    ++r;
  }
  return m;
}

inline CVector vecof(std::initializer_list<cplx> xs) {
  CVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

/// The error code thrown by f, or "" if nothing was thrown.
inline std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace harmcoc::testing
