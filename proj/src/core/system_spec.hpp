#pragma once

#include "core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace evodich {

// Declarative description of the coefficient map t -> A(t) of y' = A(t) y.
//
// Three kinds:
//   constant  - a fixed d x d matrix, valid on all of R.
//   periodic  - A(t + T) = A(t); carried either as trigonometric
//               coefficient matrices (exact evaluation) or as a uniform
//               sample table with linear interpolation.
//   sampled   - strictly increasing time grid with linear interpolation,
//               valid only on its span. Extrapolation is an error.
class SystemSpec {
public:
  enum class Kind { constant, periodic, sampled };

  struct Harmonic {
    int k = 0;       // multiple of the fundamental frequency 2*pi/T
    Mat cos_coeff;   // zero matrix allowed
    Mat sin_coeff;
  };

  static SystemSpec constant(Mat a, std::string name = "");
  static SystemSpec periodic_harmonics(int dimension, double period,
                                       std::vector<Harmonic> harmonics,
                                       std::string name = "");
  static SystemSpec periodic_samples(int dimension, double period,
                                     std::vector<Mat> samples, std::string name = "");
  static SystemSpec sampled(std::vector<double> times, std::vector<Mat> values,
                            std::string name = "");

  // Parses the JSON document format:
  //   {"dimension": d, "kind": "constant"|"periodic"|"sampled",
  //    "matrix": [[...]]                       (constant)
  //    "period": T,                            (periodic)
  //    "samples": [{"t": ..., "matrix": ...}]  (periodic uniform / sampled)
  //    "harmonics": [{"k": ..., "cos": [[...]], "sin": [[...]]}]}
  // Matrix entries are numbers or [re, im] pairs.
  static SystemSpec from_json(const std::string& text);
  static SystemSpec from_json_file(const std::string& path);

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double period() const { return period_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const Mat& constant_matrix() const;

  // Evaluates A(t). Periodic kinds reduce t mod T first; sampled kinds
  // reject t outside the grid span.
  Mat evaluate(double t) const;

  // [lo, hi] on which evaluate() is defined. Unbounded kinds return the
  // widest representable interval.
  std::pair<double, double> span() const;

  // True when the coefficient map repeats with period `window`: constants
  // always do, periodic kinds iff window is an integer multiple of T.
  bool repeats_with_period(double window) const;

  bool has_complex_entries() const;

private:
  SystemSpec() = default;

  Kind kind_ = Kind::constant;
  int dimension_ = 0;
  std::string name_;
  Mat constant_;
  double period_ = 0.0;
  std::vector<Harmonic> harmonics_;
  std::vector<double> sample_times_;  // periodic: uniform over [0, T)
  std::vector<Mat> sample_values_;
};

} // namespace evodich
