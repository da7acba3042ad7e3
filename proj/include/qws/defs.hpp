#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qws {

using cplx = std::complex<double>;

// Tolerances used throughout the library.
namespace tol {
inline constexpr double unitary = 1e-10;      // unitarity / partial-isometry checks
inline constexpr double trim = 1e-9;          // coefficient trim, relative to max magnitude
inline constexpr double circle = 1e-7;        // root classification band around |z|=1
inline constexpr double common_root = 1e-7;   // matching radius for common-factor extraction
inline constexpr double pole = 1e-12;         // pole-proximity guard for rational evaluation
}  // namespace tol

struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qws
