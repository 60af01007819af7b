#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mmnoma {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 3.0e8;

// Invalid configuration or scenario input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Degenerate geometry (AP inside a body disk, coincident points).
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Physical model violated (e.g. AP below the device plane, zero distance).
class ModelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Schedule or antenna allocation breaks a capacity constraint.
class CapacityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Combinatorial oracle refused to enumerate beyond its cap.
class EnumerationLimitError : public std::runtime_error {
 public:
  EnumerationLimitError(const std::string& what, double count)
      : std::runtime_error(what), count_(count) {}
  double count() const noexcept { return count_; }

 private:
  double count_;
};

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

}  // namespace mmnoma
