#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lsdlab {

inline constexpr const char* kVersion = "0.1.0";

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A numerical result together with an absolute error estimate.
struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

// Exception hierarchy. Numerical routines throw tolerance_error when an
// error estimate cannot be brought under the requested budget; contract
// violations at call sites throw precondition_error; operations asked to
// run on a density family they do not support throw family_error.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class precondition_error : public error {
 public:
  explicit precondition_error(const std::string& what) : error(what) {}
};

class family_error : public error {
 public:
  explicit family_error(const std::string& what) : error(what) {}
};

class tolerance_error : public error {
 public:
  tolerance_error(const std::string& what, double achieved)
      : error(what + " (achieved error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// A mathematically guaranteed inequality failed beyond numerical tolerance;
// this signals an implementation bug, not a property of the input.
class inequality_violation : public error {
 public:
  explicit inequality_violation(const std::string& what) : error(what) {}
};

class spec_error : public error {
 public:
  explicit spec_error(const std::string& what) : error(what) {}
};

}  // namespace lsdlab
