#pragma once

#include <optional>

#include <doctest.h>

#include "oracles.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/linalg.hpp"

namespace test {

template <typename F>
std::optional<wm::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const wm::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline wm::StateVector qubit(wm::Complex c0, wm::Complex c1) { return wm::StateVector(oracle::ket(c0, c1)); }

inline double max_abs(const wm::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace test

#define CHECK_ERROR_KIND(expr, k) CHECK(test::error_kind([&] { (void)(expr); }) == (k))
