#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conelab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Failure categories raised by conelab operations.
enum class ErrorCode {
  DimensionMismatch,
  OriginInSpan,
  Degenerate,
  UnboundedSection,
  EmptySection,
  UnboundedInput,
  PreconditionFailed,
  NotInterior,
  NoBoundedSection,
  NotSymmetric,
  NotCodim2,
  SectionUnbounded,
  QuotientNotPointed,
  BadParams,
  ConfigError,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OriginInSpan: return "OriginInSpan";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::UnboundedSection: return "UnboundedSection";
    case ErrorCode::EmptySection: return "EmptySection";
    case ErrorCode::UnboundedInput: return "UnboundedInput";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NoBoundedSection: return "NoBoundedSection";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotCodim2: return "NotCodim2";
    case ErrorCode::SectionUnbounded: return "SectionUnbounded";
    case ErrorCode::QuotientNotPointed: return "QuotientNotPointed";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical tolerances shared by the checkers. All are relative unless noted.
struct Tolerances {
  double rank = 1e-9;     // singular value cut, relative to the largest
  double origin = 1e-10;  // absolute distance below which 0 is "in" an affine subspace
  double mem = 1e-9;      // membership slack, relative to |x|
  double sym = 1e-8;      // symmetry defect, relative to diameter
  double fit = 1e-6;      // ellipsoid fit residual
  double flat = 1e-7;     // singular ratio threshold for boundary-intersection flatness
};

inline Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Vec to_vec(const std::vector<double>& values) {
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

inline void require_dim(const Vec& x, Eigen::Index n, std::string_view what) {
  if (x.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(n) + ", got " +
                    std::to_string(x.size()));
  }
}

}  // namespace conelab
