// Core aliases, error taxonomy and the log-scaled matrix used throughout the
// toolkit. Everything here is value-semantic and safe to share across threads.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace chamber {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

enum class ErrorKind {
  invalid_input,
  invalid_flag,
  precondition,
  proximality,
  geometry,
  direction,
  opposition,
  degenerate_configuration,
  degenerate_cone,
  search_exhausted,
  insufficient_generators,
  needs_larger_t,
  infeasible,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, std::string msg, double payload = 0.0)
      : std::runtime_error(std::move(msg)), kind(k), payload(payload) {}
  ErrorKind kind;
  // Context-dependent scalar: spectral gap found, hull dimension, minimal
  // feasible T, ... documented at each throw site.
  double payload;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg, double payload = 0.0) {
  throw Error(k, msg, payload);
}

// Outcome of a certification routine: either a certificate or a refusal.
// A refusal is a mathematically meaningful negative answer, not a failure of
// the computation (CLI maps it to exit code 2).
template <typename T>
struct Certified {
  std::optional<T> value;
  std::string refusal;

  explicit operator bool() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }

  static Certified ok(T v) { return Certified{std::move(v), {}}; }
  static Certified refuse(std::string why) { return Certified{std::nullopt, std::move(why)}; }
};

enum class Parallel { serial, omp };

// value() = exp(log_scale) * mat, with ||mat||_F == 1. Long products of
// strongly expanding group elements stay representable; eigenvalue moduli and
// singular values of the true product are those of `mat` shifted by
// log_scale.
struct ScaledMatrix {
  Mat mat;
  double log_scale = 0.0;

  static ScaledMatrix of(const Mat& m) {
    if (!m.allFinite()) fail(ErrorKind::invalid_input, "matrix has non-finite entries");
    const double n = m.norm();
    if (!(n > 0.0)) fail(ErrorKind::invalid_input, "zero matrix cannot be scaled");
    return ScaledMatrix{m / n, std::log(n)};
  }

  ScaledMatrix times(const ScaledMatrix& o) const {
    Mat p = mat * o.mat;
    const double n = p.norm();
    if (!(n > 0.0) || !p.allFinite())
      fail(ErrorKind::invalid_input, "product underflowed to zero or overflowed");
    return ScaledMatrix{p / n, log_scale + o.log_scale + std::log(n)};
  }

  ScaledMatrix power(long n) const {
    if (n < 0) fail(ErrorKind::invalid_input, "negative power of scaled matrix");
    ScaledMatrix acc = identity(static_cast<int>(mat.rows()));
    ScaledMatrix base = *this;
    for (long e = n; e > 0; e >>= 1) {
      if (e & 1) acc = acc.times(base);
      if (e > 1) base = base.times(base);
    }
    return acc;
  }

  static ScaledMatrix identity(int d) {
    Mat id = Mat::Identity(d, d);
    return ScaledMatrix{id / id.norm(), 0.5 * std::log(static_cast<double>(d))};
  }

  // Reassembled dense value; refuses when entries would leave f64 range.
  Mat value() const {
    if (log_scale > 690.0)
      fail(ErrorKind::invalid_input, "scaled matrix too large to densify", log_scale);
    return std::exp(log_scale) * mat;
  }
};

}  // namespace chamber
