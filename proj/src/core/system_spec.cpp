#include "core/system_spec.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace evodich {

namespace {

using nlohmann::json;

void require_square(const Mat& m, int d, const char* what) {
  if (m.rows() != d || m.cols() != d)
    throw Error(ErrorCode::invalid_argument,
                std::string(what) + " must be " + std::to_string(d) + "x" + std::to_string(d));
  if (!m.allFinite())
    throw Error(ErrorCode::invalid_argument, std::string(what) + " has non-finite entries");
}

Complex parse_entry(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  throw Error(ErrorCode::parse, "matrix entry must be a number or an [re, im] pair");
}

Mat parse_matrix(const json& m, int d, const char* what) {
  if (!m.is_array() || static_cast<int>(m.size()) != d)
    throw Error(ErrorCode::parse, std::string(what) + ": expected " + std::to_string(d) + " rows");
  Mat out(d, d);
  for (int i = 0; i < d; ++i) {
    const json& row = m[i];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw Error(ErrorCode::parse,
                  std::string(what) + ": row " + std::to_string(i) + " must have " +
                      std::to_string(d) + " entries");
    for (int j = 0; j < d; ++j) out(i, j) = parse_entry(row[j]);
  }
  return out;
}

} // namespace

SystemSpec SystemSpec::constant(Mat a, std::string name) {
  if (a.rows() < 1 || a.rows() != a.cols())
    throw Error(ErrorCode::invalid_argument, "constant system needs a square matrix, d >= 1");
  SystemSpec s;
  s.kind_ = Kind::constant;
  s.dimension_ = static_cast<int>(a.rows());
  require_square(a, s.dimension_, "matrix");
  s.constant_ = std::move(a);
  s.name_ = std::move(name);
  return s;
}

SystemSpec SystemSpec::periodic_harmonics(int dimension, double period,
                                          std::vector<Harmonic> harmonics, std::string name) {
  if (dimension < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
  if (!(period > 0)) throw Error(ErrorCode::invalid_argument, "period must be > 0");
  SystemSpec s;
  s.kind_ = Kind::periodic;
  s.dimension_ = dimension;
  s.period_ = period;
  for (auto& h : harmonics) {
    if (h.cos_coeff.size() == 0) h.cos_coeff = Mat::Zero(dimension, dimension);
    if (h.sin_coeff.size() == 0) h.sin_coeff = Mat::Zero(dimension, dimension);
    require_square(h.cos_coeff, dimension, "harmonic cos coefficient");
    require_square(h.sin_coeff, dimension, "harmonic sin coefficient");
    if (h.k < 0) throw Error(ErrorCode::invalid_argument, "harmonic index must be >= 0");
  }
  s.harmonics_ = std::move(harmonics);
  s.name_ = std::move(name);
  return s;
}

SystemSpec SystemSpec::periodic_samples(int dimension, double period, std::vector<Mat> samples,
                                        std::string name) {
  if (dimension < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
  if (!(period > 0)) throw Error(ErrorCode::invalid_argument, "period must be > 0");
  if (samples.size() < 2)
    throw Error(ErrorCode::invalid_argument, "periodic sample table needs >= 2 samples");
  SystemSpec s;
  s.kind_ = Kind::periodic;
  s.dimension_ = dimension;
  s.period_ = period;
  for (const auto& m : samples) require_square(m, dimension, "sample matrix");
  s.sample_values_ = std::move(samples);
  // Implied uniform grid t_k = k * T / M, k = 0..M-1; the table wraps.
  int m = static_cast<int>(s.sample_values_.size());
  s.sample_times_.resize(m);
  for (int k = 0; k < m; ++k) s.sample_times_[k] = period * k / m;
  s.name_ = std::move(name);
  return s;
}

SystemSpec SystemSpec::sampled(std::vector<double> times, std::vector<Mat> values,
                               std::string name) {
  if (times.size() != values.size() || times.size() < 2)
    throw Error(ErrorCode::invalid_argument, "sampled system needs >= 2 (t, matrix) pairs");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorCode::invalid_argument, "sample times must be strictly increasing");
  SystemSpec s;
  s.kind_ = Kind::sampled;
  s.dimension_ = static_cast<int>(values.front().rows());
  for (const auto& m : values) require_square(m, s.dimension_, "sample matrix");
  s.sample_times_ = std::move(times);
  s.sample_values_ = std::move(values);
  s.name_ = std::move(name);
  return s;
}

SystemSpec SystemSpec::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, e.what()); // includes byte position
  }
  if (!doc.is_object()) throw Error(ErrorCode::parse, "top-level JSON value must be an object");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw Error(ErrorCode::parse, "missing integer field \"dimension\"");
  int d = doc["dimension"].get<int>();
  if (d < 1) throw Error(ErrorCode::parse, "\"dimension\" must be >= 1");
  std::string kind = doc.value("kind", std::string());
  std::string name = doc.value("name", std::string());

  if (kind == "constant") {
    if (!doc.contains("matrix")) throw Error(ErrorCode::parse, "constant kind needs \"matrix\"");
    return SystemSpec::constant(parse_matrix(doc["matrix"], d, "matrix"), name);
  }

  if (kind == "periodic") {
    if (!doc.contains("period") || !doc["period"].is_number())
      throw Error(ErrorCode::parse, "periodic kind needs numeric \"period\"");
    double period = doc["period"].get<double>();
    if (doc.contains("harmonics")) {
      std::vector<Harmonic> hs;
      for (const auto& h : doc["harmonics"]) {
        Harmonic out;
        if (!h.contains("k") || !h["k"].is_number_integer())
          throw Error(ErrorCode::parse, "harmonic needs integer \"k\"");
        out.k = h["k"].get<int>();
        if (h.contains("cos")) out.cos_coeff = parse_matrix(h["cos"], d, "harmonic cos");
        if (h.contains("sin")) out.sin_coeff = parse_matrix(h["sin"], d, "harmonic sin");
        hs.push_back(std::move(out));
      }
      return SystemSpec::periodic_harmonics(d, period, std::move(hs), name);
    }
    if (doc.contains("samples")) {
      std::vector<Mat> values;
      std::vector<double> times;
      for (const auto& s : doc["samples"]) {
        if (!s.contains("t") || !s["t"].is_number() || !s.contains("matrix"))
          throw Error(ErrorCode::parse, "sample needs \"t\" and \"matrix\"");
        times.push_back(s["t"].get<double>());
        values.push_back(parse_matrix(s["matrix"], d, "sample matrix"));
      }
      // Verify the advertised uniform grid over [0, T).
      int m = static_cast<int>(times.size());
      if (m < 2) throw Error(ErrorCode::parse, "periodic sample table needs >= 2 samples");
      for (int k = 0; k < m; ++k)
        if (std::abs(times[k] - period * k / m) > 1e-9 * period)
          throw Error(ErrorCode::parse,
                      "periodic samples must sit on the uniform grid t_k = k*T/M");
      return SystemSpec::periodic_samples(d, period, std::move(values), name);
    }
    throw Error(ErrorCode::parse, "periodic kind needs \"samples\" or \"harmonics\"");
  }

  if (kind == "sampled") {
    if (!doc.contains("samples")) throw Error(ErrorCode::parse, "sampled kind needs \"samples\"");
    std::vector<Mat> values;
    std::vector<double> times;
    for (const auto& s : doc["samples"]) {
      if (!s.contains("t") || !s["t"].is_number() || !s.contains("matrix"))
        throw Error(ErrorCode::parse, "sample needs \"t\" and \"matrix\"");
      times.push_back(s["t"].get<double>());
      values.push_back(parse_matrix(s["matrix"], d, "sample matrix"));
    }
    return SystemSpec::sampled(std::move(times), std::move(values), name);
  }

  throw Error(ErrorCode::parse, "\"kind\" must be \"constant\", \"periodic\" or \"sampled\"");
}

SystemSpec SystemSpec::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(buf.str());
  } catch (Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

const Mat& SystemSpec::constant_matrix() const {
  if (kind_ != Kind::constant)
    throw Error(ErrorCode::invalid_argument, "not a constant system");
  return constant_;
}

Mat SystemSpec::evaluate(double t) const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::periodic: {
      double tau = t - period_ * std::floor(t / period_);
      if (tau >= period_) tau -= period_; // guard the floor rounding edge
      if (!harmonics_.empty()) {
        Mat out = Mat::Zero(dimension_, dimension_);
        double omega = kTwoPi / period_;
        for (const auto& h : harmonics_) {
          if (h.k == 0) {
            out += h.cos_coeff;
            continue;
          }
          out += h.cos_coeff * std::cos(h.k * omega * tau);
          out += h.sin_coeff * std::sin(h.k * omega * tau);
        }
        return out;
      }
      // Uniform table with wraparound interpolation.
      int m = static_cast<int>(sample_values_.size());
      double step = period_ / m;
      int k = std::min(static_cast<int>(std::floor(tau / step)), m - 1);
      double w = (tau - k * step) / step;
      const Mat& a = sample_values_[k];
      const Mat& b = sample_values_[(k + 1) % m];
      return (1.0 - w) * a + w * b;
    }
    case Kind::sampled: {
      double lo = sample_times_.front(), hi = sample_times_.back();
      double slack = 1e-12 * std::max(1.0, hi - lo);
      if (t < lo - slack || t > hi + slack)
        throw Error(ErrorCode::range,
                    "t = " + std::to_string(t) + " outside the sampled span [" +
                        std::to_string(lo) + ", " + std::to_string(hi) +
                        "]; extrapolation is not performed");
      double tc = std::clamp(t, lo, hi);
      auto it = std::upper_bound(sample_times_.begin(), sample_times_.end(), tc);
      int k = std::max<int>(0, static_cast<int>(it - sample_times_.begin()) - 1);
      k = std::min(k, static_cast<int>(sample_times_.size()) - 2);
      double w = (tc - sample_times_[k]) / (sample_times_[k + 1] - sample_times_[k]);
      return (1.0 - w) * sample_values_[k] + w * sample_values_[k + 1];
    }
  }
  throw Error(ErrorCode::invalid_argument, "corrupt system kind");
}

std::pair<double, double> SystemSpec::span() const {
  if (kind_ == Kind::sampled) return {sample_times_.front(), sample_times_.back()};
  double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

bool SystemSpec::repeats_with_period(double window) const {
  if (!(window > 0)) return false;
  if (kind_ == Kind::constant) return true;
  if (kind_ != Kind::periodic) return false;
  double ratio = window / period_;
  double nearest = std::round(ratio);
  return nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio);
}

bool SystemSpec::has_complex_entries() const {
  auto check = [](const Mat& m) { return !is_effectively_real(m); };
  if (kind_ == Kind::constant) return check(constant_);
  for (const auto& h : harmonics_)
    if (check(h.cos_coeff) || check(h.sin_coeff)) return true;
  for (const auto& m : sample_values_)
    if (check(m)) return true;
  return false;
}

} // namespace evodich
