#pragma once

// Independent reference computations used only by the tests.  None of these call into the
// library's algorithms beyond basic data access.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "tiling_lab/lattice.hpp"

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Boxed plane partitions in an a x b x c box: prod (i+j+k-1)/(i+j+k-2).
inline BigInt macmahon(int a, int b, int c) {
  BigRational p = 1;
  for (int i = 1; i <= a; ++i)
    for (int j = 1; j <= b; ++j)
      for (int k = 1; k <= c; ++k) p *= BigRational(i + j + k - 1, i + j + k - 2);
  if (boost::multiprecision::denominator(p) != 1) throw std::logic_error("macmahon: non-integer");
  return boost::multiprecision::numerator(p);
}

inline bool legal_heights(const tiling_lab::Domain& d, const std::vector<int>& H) {
  for (int y = d.y_min(); y <= d.y_max(); ++y)
    for (int x = d.left(y); x <= d.right(y); ++x)
      for (auto [dx, dy] : std::vector<std::pair<int, int>>{{1, 0}, {0, -1}, {1, 1}}) {
        if (!d.contains(x + dx, y + dy)) continue;
        int inc = H[d.index(x + dx, y + dy)] - H[d.index(x, y)];
        if (inc != 0 && inc != 1) return false;
      }
  return true;
}

// Exhaustive search over interior heights in a window around the boundary range.
inline std::vector<std::vector<int>> brute_force_extensions(const tiling_lab::Domain& d, const tiling_lab::BoundaryHeight& h) {
  std::vector<int> H(d.vertex_count(), 0);
  int lo = INT32_MAX, hi = INT32_MIN;
  for (std::size_t k = 0; k < h.indices().size(); ++k) {
    H[h.indices()[k]] = h.values()[k];
    lo = std::min(lo, h.values()[k]);
    hi = std::max(hi, h.values()[k]);
  }
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < d.vertex_count(); ++i) {
    auto v = d.vertex(i);
    if (!d.is_boundary(v.x, v.y)) free.push_back(i);
  }
  std::vector<std::vector<int>> out;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == free.size()) {
      if (legal_heights(d, H)) out.push_back(H);
      return;
    }
    for (int v = lo; v <= hi; ++v) {
      H[free[k]] = v;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

// Uniform bridge families: all step sequences e_t in {0,1}^m, T steps, non-colliding, start -> end.
inline std::map<std::vector<std::vector<int>>, int> brute_force_bridges(const std::vector<int>& start, const std::vector<int>& end, int T) {
  std::map<std::vector<std::vector<int>>, int> out;
  int m = static_cast<int>(start.size());
  std::vector<std::vector<int>> path{start};
  std::function<void(int)> rec = [&](int t) {
    if (t == T) {
      if (path.back() == end) out[path] = 1;
      return;
    }
    for (int e = 0; e < (1 << m); ++e) {
      std::vector<int> nx = path.back();
      bool ok = true;
      for (int i = 0; i < m; ++i) {
        nx[static_cast<std::size_t>(i)] += (e >> i) & 1;
        if (i > 0 && nx[static_cast<std::size_t>(i)] <= nx[static_cast<std::size_t>(i - 1)]) ok = false;
      }
      if (!ok) continue;
      path.push_back(nx);
      rec(t + 1);
      path.pop_back();
    }
  };
  rec(0);
  return out;
}

// -int_0^x log|2 sin z| dz by tanh-sinh quadrature, splitting at multiples of pi.
inline double lobachevsky_quadrature(double x) {
  boost::math::quadrature::tanh_sinh<double> q;
  auto f = [](double z) {
    double s = std::fabs(2.0 * std::sin(z));
    return s > 0 ? -std::log(s) : 0.0;
  };
  double sign = x < 0 ? -1.0 : 1.0;
  double ax = std::fabs(x), total = 0.0, a = 0.0;
  while (a < ax) {
    double b = std::min(ax, (std::floor(a / M_PI + 1e-12) + 1.0) * M_PI);
    if (b - a > 1e-15) total += q.integrate(f, a, b);
    a = b;
  }
  return sign * total;
}

// Binomial coefficient in double, used by the bridge-kernel oracle.
inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// det of a small dense matrix by Gaussian elimination with partial pivoting.
inline double det(std::vector<std::vector<double>> a) {
  std::size_t n = a.size();
  double d = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
    if (a[p][k] == 0.0) return 0.0;
    if (p != k) {
      std::swap(a[p], a[k]);
      d = -d;
    }
    d *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return d;
}

// Number of non-colliding bridges start -> end in S steps (Karlin-McGregor determinant).
inline double bridges_double(const std::vector<int>& start, const std::vector<int>& end, int S) {
  std::size_t m = start.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i][j] = choose(S, end[j] - start[i]);
  return det(a);
}

}  // namespace oracle
