#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "halfline/errors.hpp"

namespace halfline {

/// Uniform grid on [0, L] with n intervals; nodes x_i = i*h and x_n = L exactly.
template <typename Scalar>
class BasicGrid {
 public:
  using Index = Eigen::Index;

  static constexpr Index kMinIntervals = 16;

  BasicGrid(Scalar length, Index intervals) : length_(length), intervals_(intervals) {
    if (!(std::isfinite(static_cast<double>(length)) && length > Scalar(0))) {
      throw Error(ErrorKind::Configuration, "grid length must be finite and positive");
    }
    if (intervals < kMinIntervals) {
      throw Error(ErrorKind::Configuration, "grid needs at least 16 intervals");
    }
  }

  Scalar length() const { return length_; }
  Index intervals() const { return intervals_; }
  Index size() const { return intervals_ + 1; }
  Scalar spacing() const { return length_ / static_cast<Scalar>(intervals_); }
  bool even() const { return intervals_ % 2 == 0; }

  Scalar node(Index i) const {
    return i == intervals_ ? length_ : static_cast<Scalar>(i) * spacing();
  }

  Eigen::Array<Scalar, Eigen::Dynamic, 1> nodes() const {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> x(size());
    for (Index i = 0; i < size(); ++i) x[i] = node(i);
    return x;
  }

  /// Smallest node index whose position is >= x (up to rounding by 1e-9 h).
  Index node_at_or_after(Scalar x) const {
    if (x <= Scalar(0)) return 0;
    const Scalar h = spacing();
    auto i = static_cast<Index>(std::ceil(static_cast<double>(x / h - Scalar(1e-9))));
    return std::min(i, intervals_);
  }

  /// Largest even node index not beyond x.
  Index even_node_at_or_before(Scalar x) const {
    const Scalar h = spacing();
    auto i = static_cast<Index>(std::floor(static_cast<double>(x / h + Scalar(1e-9))));
    i = std::clamp<Index>(i, 0, intervals_);
    return i - (i % 2);
  }

  /// The grid [0, x_m] sharing the first m intervals.
  BasicGrid prefix(Index m) const { return BasicGrid(node(m), m); }

  friend bool operator==(const BasicGrid& a, const BasicGrid& b) {
    return a.intervals_ == b.intervals_ && a.length_ == b.length_;
  }

 private:
  Scalar length_;
  Index intervals_;
};

/// Real samples on every node of a grid. Values are finite after every
/// public operation.
template <typename Scalar>
class BasicSampled {
 public:
  using Index = Eigen::Index;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicSampled(BasicGrid<Scalar> grid, Array values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw Error(ErrorKind::Configuration, "sample count does not match grid size");
    }
    if (!values_.allFinite()) {
      throw Error(ErrorKind::InvalidInput, "sampled function has non-finite values");
    }
  }

  static BasicSampled zeros(const BasicGrid<Scalar>& grid) {
    return BasicSampled(grid, Array::Zero(grid.size()));
  }

  static BasicSampled constant(const BasicGrid<Scalar>& grid, Scalar c) {
    return BasicSampled(grid, Array::Constant(grid.size(), c));
  }

  template <typename F>
  static BasicSampled from_function(const BasicGrid<Scalar>& grid, F&& f) {
    Array v(grid.size());
    for (Index i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
    return BasicSampled(grid, std::move(v));
  }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  const Array& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }
  Scalar front() const { return values_[0]; }
  Scalar back() const { return values_[values_.size() - 1]; }
  Scalar max_abs() const { return values_.abs().maxCoeff(); }

 private:
  BasicGrid<Scalar> grid_;
  Array values_;
};

namespace detail {

template <typename Scalar>
void require_same_grid(const BasicSampled<Scalar>& a, const BasicSampled<Scalar>& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorKind::Configuration, "sampled functions live on different grids");
  }
}

template <typename Scalar>
Scalar simpson_panels(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& f, Eigen::Index m, Scalar h) {
  Scalar sum = 0;
  for (Eigen::Index i = 0; i + 2 <= m; i += 2) {
    sum += h / Scalar(3) * (f[i] + Scalar(4) * f[i + 1] + f[i + 2]);
  }
  return sum;
}

// Splits one Simpson panel into its two half-interval contributions. The
// quadratic-interpolant split is used unless it would make a running integral
// of a nonnegative integrand decrease.
template <typename Scalar>
std::pair<Scalar, Scalar> split_panel(Scalar f0, Scalar f1, Scalar f2, Scalar h) {
  const Scalar panel = h / Scalar(3) * (f0 + Scalar(4) * f1 + f2);
  Scalar first = h / Scalar(12) * (Scalar(5) * f0 + Scalar(8) * f1 - f2);
  Scalar second = panel - first;
  const bool nonneg = f0 >= Scalar(0) && f1 >= Scalar(0) && f2 >= Scalar(0);
  if (nonneg && (first < Scalar(0) || second < Scalar(0))) {
    const Scalar t1 = f0 + f1;
    const Scalar t2 = f1 + f2;
    first = (t1 + t2) > Scalar(0) ? panel * t1 / (t1 + t2) : panel / Scalar(2);
    second = panel - first;
  }
  return {first, second};
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> running_integral(
    const Eigen::Array<Scalar, Eigen::Dynamic, 1>& f, Scalar h) {
  const Eigen::Index n = f.size() - 1;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> g(f.size());
  g[0] = Scalar(0);
  Eigen::Index i = 0;
  for (; i + 2 <= n; i += 2) {
    const auto [first, second] = split_panel(f[i], f[i + 1], f[i + 2], h);
    (void)second;
    g[i + 1] = g[i] + first;
    g[i + 2] = g[i] + h / Scalar(3) * (f[i] + Scalar(4) * f[i + 1] + f[i + 2]);
  }
  if (i < n) {
    // odd interval count: close with the quadratic through the last three nodes
    Scalar last = h / Scalar(12) * (-f[n - 2] + Scalar(8) * f[n - 1] + Scalar(5) * f[n]);
    if (f[n - 2] >= 0 && f[n - 1] >= 0 && f[n] >= 0 && last < 0) {
      last = h / Scalar(2) * (f[n - 1] + f[n]);
    }
    g[n] = g[n - 1] + last;
  }
  return g;
}

}  // namespace detail

/// Composite Simpson value of the integral over [0, L].
template <typename Scalar>
Scalar integrate(const BasicSampled<Scalar>& f) {
  if (!f.grid().even()) {
    throw Error(ErrorKind::Configuration, "Simpson quadrature needs an even number of intervals");
  }
  return detail::simpson_panels(f.values(), f.grid().intervals(), f.grid().spacing());
}

/// Simpson value of the integral over [0, x_m]; m must be even.
template <typename Scalar>
Scalar integrate_to(const BasicSampled<Scalar>& f, Eigen::Index m) {
  if (m % 2 != 0 || m < 0 || m > f.grid().intervals()) {
    throw Error(ErrorKind::Configuration, "partial Simpson quadrature needs an even node index");
  }
  return detail::simpson_panels(f.values(), m, f.grid().spacing());
}

template <typename Scalar>
Scalar inner_product(const BasicSampled<Scalar>& f, const BasicSampled<Scalar>& g) {
  detail::require_same_grid(f, g);
  return integrate(BasicSampled<Scalar>(f.grid(), f.values() * g.values()));
}

/// Running integral g(x_i) = int_0^{x_i} f. Even nodes carry the composite
/// Simpson partial sums, so g(x_n) equals integrate(f); odd nodes split each
/// panel so that g never decreases for a nonnegative integrand.
template <typename Scalar>
BasicSampled<Scalar> cumulative_integral(const BasicSampled<Scalar>& f) {
  return BasicSampled<Scalar>(f.grid(), detail::running_integral(f.values(), f.grid().spacing()));
}

/// Tail integral r(x_i) = int_{x_i}^L f, accumulated from the right so that
/// small tails keep their relative accuracy.
template <typename Scalar>
BasicSampled<Scalar> reverse_cumulative_integral(const BasicSampled<Scalar>& f) {
  using Array = typename BasicSampled<Scalar>::Array;
  const Array reversed = f.values().reverse();
  Array r = detail::running_integral(reversed, f.grid().spacing());
  return BasicSampled<Scalar>(f.grid(), Array(r.reverse()));
}

/// Central differences inside, one-sided four-point stencils at both ends.
template <typename Scalar>
BasicSampled<Scalar> derivative(const BasicSampled<Scalar>& f) {
  const auto& v = f.values();
  const Eigen::Index n = f.grid().intervals();
  const Scalar h = f.grid().spacing();
  typename BasicSampled<Scalar>::Array d(v.size());
  for (Eigen::Index i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (Scalar(2) * h);
  d[0] = (Scalar(-11) * v[0] + Scalar(18) * v[1] - Scalar(9) * v[2] + Scalar(2) * v[3]) /
         (Scalar(6) * h);
  d[n] = (Scalar(11) * v[n] - Scalar(18) * v[n - 1] + Scalar(9) * v[n - 2] -
          Scalar(2) * v[n - 3]) /
         (Scalar(6) * h);
  return BasicSampled<Scalar>(f.grid(), std::move(d));
}

/// Three-point second difference at interior nodes; the two end entries are zero.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> second_difference(const BasicSampled<Scalar>& f) {
  const auto& v = f.values();
  const Eigen::Index n = f.grid().intervals();
  const Scalar h2 = f.grid().spacing() * f.grid().spacing();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> d = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(v.size());
  for (Eigen::Index i = 1; i < n; ++i) d[i] = (v[i + 1] - Scalar(2) * v[i] + v[i - 1]) / h2;
  return d;
}

/// Restriction to the prefix grid [0, x_m].
template <typename Scalar>
BasicSampled<Scalar> restrict_to(const BasicSampled<Scalar>& f, Eigen::Index m) {
  return BasicSampled<Scalar>(f.grid().prefix(m), f.values().head(m + 1));
}

/// Every other node of f; requires an even interval count.
template <typename Scalar>
BasicSampled<Scalar> subsample(const BasicSampled<Scalar>& f) {
  if (!f.grid().even()) {
    throw Error(ErrorKind::Configuration, "subsampling needs an even number of intervals");
  }
  const Eigen::Index m = f.grid().intervals() / 2;
  typename BasicSampled<Scalar>::Array v(m + 1);
  for (Eigen::Index i = 0; i <= m; ++i) v[i] = f[2 * i];
  return BasicSampled<Scalar>(BasicGrid<Scalar>(f.grid().length(), m), std::move(v));
}

/// Same spacing on [0, factor*L]; new nodes take the value zero.
template <typename Scalar>
BasicSampled<Scalar> extend_with_zeros(const BasicSampled<Scalar>& f, Eigen::Index factor) {
  const Eigen::Index n = f.grid().intervals() * factor;
  typename BasicSampled<Scalar>::Array v = BasicSampled<Scalar>::Array::Zero(n + 1);
  v.head(f.size()) = f.values();
  return BasicSampled<Scalar>(BasicGrid<Scalar>(f.grid().length() * static_cast<Scalar>(factor), n),
                              std::move(v));
}

template <typename Scalar>
BasicSampled<Scalar> operator+(const BasicSampled<Scalar>& a, const BasicSampled<Scalar>& b) {
  detail::require_same_grid(a, b);
  return BasicSampled<Scalar>(a.grid(), a.values() + b.values());
}

template <typename Scalar>
BasicSampled<Scalar> operator-(const BasicSampled<Scalar>& a, const BasicSampled<Scalar>& b) {
  detail::require_same_grid(a, b);
  return BasicSampled<Scalar>(a.grid(), a.values() - b.values());
}

template <typename Scalar>
BasicSampled<Scalar> operator*(const BasicSampled<Scalar>& a, const BasicSampled<Scalar>& b) {
  detail::require_same_grid(a, b);
  return BasicSampled<Scalar>(a.grid(), a.values() * b.values());
}

template <typename Scalar>
BasicSampled<Scalar> operator*(Scalar c, const BasicSampled<Scalar>& a) {
  return BasicSampled<Scalar>(a.grid(), c * a.values());
}

using Grid = BasicGrid<double>;
using SampledFunction = BasicSampled<double>;

}  // namespace halfline
