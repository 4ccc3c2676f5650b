#pragma once

// Discretisation grids for single-system mode labels.
//
// Rapidity grids discretise the shell-restricted invariant measure: on each
// shell branch the measure is dξ, so a uniform rapidity grid with equal
// weights is exactly invariant under boosts by a multiple of the spacing.
// Photon grids are uniform in log|E|; position grids are periodic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sqrf/errors.hpp"

namespace sqrf {

enum class GridKind { Rapidity, LogEnergy, Position };

inline std::string_view to_string(GridKind k) {
  switch (k) {
    case GridKind::Rapidity: return "rapidity";
    case GridKind::LogEnergy: return "log_energy";
    case GridKind::Position: return "position";
  }
  return "?";
}

/// Uniform: every point carries the spacing h (cell measure).
/// Trapezoid: end points carry h/2.
enum class Quadrature { Uniform, Trapezoid, Unit };

inline std::string_view to_string(Quadrature q) {
  switch (q) {
    case Quadrature::Uniform: return "uniform";
    case Quadrature::Trapezoid: return "trapezoid";
    case Quadrature::Unit: return "unit";
  }
  return "?";
}

class GridSpec {
 public:
  GridSpec() : points_{0.0}, weights_{1.0} {}

  static GridSpec uniform(double lo, double hi, std::size_t n, GridKind kind = GridKind::Rapidity,
                          Quadrature q = Quadrature::Uniform) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
      fail(ErrorCode::InvalidArgument, "uniform grid needs finite lo < hi");
    if (n < 2) fail(ErrorCode::InvalidArgument, "uniform grid needs at least 2 points");
    GridSpec g;
    g.kind_ = kind;
    g.quadrature_ = q;
    g.uniform_ = true;
    g.spacing_ = (hi - lo) / static_cast<double>(n - 1);
    g.points_.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.points_[i] = lo + static_cast<double>(i) * g.spacing_;
    g.points_.back() = hi;
    g.weights_.assign(n, q == Quadrature::Unit ? 1.0 : g.spacing_);
    if (q == Quadrature::Trapezoid) g.weights_.front() = g.weights_.back() = g.spacing_ / 2;
    return g;
  }

  /// Explicit point set (sharp-ket bases). Weights are 1.
  static GridSpec discrete(std::vector<double> points, GridKind kind = GridKind::Rapidity) {
    if (points.empty()) fail(ErrorCode::InvalidArgument, "discrete grid needs at least one point");
    for (double p : points)
      if (!std::isfinite(p)) fail(ErrorCode::NonFinite, "grid point must be finite");
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i)
      if (!(points[i] > points[i - 1])) fail(ErrorCode::InvalidArgument, "grid points must be distinct");
    GridSpec g;
    g.kind_ = kind;
    g.quadrature_ = Quadrature::Unit;
    g.uniform_ = false;
    g.points_ = std::move(points);
    g.weights_.assign(g.points_.size(), 1.0);
    return g;
  }

  /// Periodic position grid x_i = (i − n/2)·dx, i = 0..n−1.
  static GridSpec periodic(std::size_t n, double dx) {
    if (n < 2 || !(dx > 0) || !std::isfinite(dx))
      fail(ErrorCode::InvalidArgument, "periodic grid needs n >= 2 and dx > 0");
    GridSpec g;
    g.kind_ = GridKind::Position;
    g.quadrature_ = Quadrature::Uniform;
    g.uniform_ = true;
    g.periodic_ = true;
    g.spacing_ = dx;
    g.points_.resize(n);
    const auto half = static_cast<long long>(n / 2);
    for (std::size_t i = 0; i < n; ++i) g.points_[i] = static_cast<double>(static_cast<long long>(i) - half) * dx;
    g.weights_.assign(n, dx);
    return g;
  }

  GridKind kind() const { return kind_; }
  Quadrature quadrature() const { return quadrature_; }
  bool is_uniform() const { return uniform_; }
  bool is_periodic() const { return periodic_; }
  std::size_t size() const { return points_.size(); }
  double spacing() const { return spacing_; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  double point(std::size_t i) const { return points_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  double measure() const {
    double s = 0;
    for (double w : weights_) s += w;
    return s;
  }

  /// Closed under x -> −x (within `tol`).
  bool symmetric(double tol = 1e-9) const {
    const std::size_t n = points_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(points_[i] + points_[n - 1 - i]) > tol) return periodic_;
    return true;
  }

  /// Is `shift` an integer number of grid spacings? Always false for non-uniform grids.
  bool commensurate(double shift, double tol = 1e-9) const {
    if (!uniform_) return false;
    const double k = shift / spacing_;
    return std::abs(k - std::round(k)) * spacing_ <= tol;
  }

  /// Index of the grid point within `tol` of x, if any.
  std::optional<std::size_t> locate(double x, double tol = 1e-9) const {
    if (!std::isfinite(x)) return std::nullopt;
    const std::size_t n = points_.size();
    if (periodic_) {
      const auto half = static_cast<long long>(n / 2);
      const double k = std::round(x / spacing_);
      if (std::abs(x - k * spacing_) > tol) return std::nullopt;
      long long i = (static_cast<long long>(k) + half) % static_cast<long long>(n);
      if (i < 0) i += static_cast<long long>(n);
      return static_cast<std::size_t>(i);
    }
    if (uniform_) {
      const double k = std::round((x - points_.front()) / spacing_);
      if (k < 0 || k > static_cast<double>(n - 1)) return std::nullopt;
      const auto i = static_cast<std::size_t>(k);
      if (std::abs(x - points_[i]) <= tol) return i;
      return std::nullopt;
    }
    const auto it = std::lower_bound(points_.begin(), points_.end(), x - tol);
    if (it != points_.end() && std::abs(*it - x) <= tol) return static_cast<std::size_t>(it - points_.begin());
    return std::nullopt;
  }

  /// Periodic wrap of a coordinate into the grid's fundamental cell.
  double wrap(double x) const {
    if (!periodic_) return x;
    const double length = spacing_ * static_cast<double>(points_.size());
    const double lo = points_.front() - spacing_ / 2;
    double y = std::fmod(x - lo, length);
    if (y < 0) y += length;
    return y + lo;
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.kind_ == b.kind_ && a.quadrature_ == b.quadrature_ && a.uniform_ == b.uniform_ &&
           a.periodic_ == b.periodic_ && a.points_ == b.points_ && a.weights_ == b.weights_;
  }

  // Rebuilds a grid from serialized fields; checks only shape consistency.
  static GridSpec restore(GridKind kind, Quadrature q, bool uniform, bool periodic, double spacing,
                          std::vector<double> points, std::vector<double> weights) {
    if (points.empty() || points.size() != weights.size())
      fail(ErrorCode::InvalidArgument, "grid points and weights must be non-empty and equal length");
    GridSpec g;
    g.kind_ = kind;
    g.quadrature_ = q;
    g.uniform_ = uniform;
    g.periodic_ = periodic;
    g.spacing_ = spacing;
    g.points_ = std::move(points);
    g.weights_ = std::move(weights);
    return g;
  }

 private:
  GridKind kind_ = GridKind::Rapidity;
  Quadrature quadrature_ = Quadrature::Unit;
  bool uniform_ = false;
  bool periodic_ = false;
  double spacing_ = 0.0;
  std::vector<double> points_;
  std::vector<double> weights_;
};

}  // namespace sqrf
