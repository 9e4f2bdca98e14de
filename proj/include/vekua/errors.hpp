#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace vekua {

/// "%.3e", for messages.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator data outside the admissible set (alpha = 0, q changes sign, ...).
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

/// Hypothesis (I) fails: |alpha| = |delta|.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// rho = 0 at a mode; the 2x2 mode matrix is not diagonalizable.
class DegenerateRho : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

/// A boundary denominator vanishes (exact resonance at one mode).
class ResonantMode : public Error {
 public:
  ResonantMode(std::string mode, double abs_d1, double abs_d2)
      : Error("resonant mode " + mode + ": |D1| = " + sci(abs_d1) +
              ", |D2| = " + sci(abs_d2)),
        mode_(std::move(mode)),
        abs_d1_(abs_d1),
        abs_d2_(abs_d2) {}

  const std::string& mode() const noexcept { return mode_; }
  double abs_d1() const noexcept { return abs_d1_; }
  double abs_d2() const noexcept { return abs_d2_; }

 private:
  std::string mode_;
  double abs_d1_;
  double abs_d2_;
};

/// The conjugate of some mode lies outside the field's truncation.
class TruncationAsymmetry : public Error {
 public:
  using Error::Error;
};

/// A paired field whose conjugate half does not match its primal half.
class InconsistentField : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// I - Phi(2 pi) is numerically singular in the shooting oracle.
class SingularMonodromy : public Error {
 public:
  SingularMonodromy(const std::string& what, double abs_det)
      : Error(what), abs_det_(abs_det) {}
  double abs_det() const noexcept { return abs_det_; }

 private:
  double abs_det_;
};

}  // namespace vekua
