#include "tiling_lab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>

#include <Eigen/SparseCholesky>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

namespace {

constexpr double kPi = std::numbers::pi;

double sigma_of_proportions(double p1, double p2, double p3) {
  return (lobachevsky(kPi * std::clamp(p1, 0.0, 1.0)) + lobachevsky(kPi * std::clamp(p2, 0.0, 1.0)) +
          lobachevsky(kPi * std::clamp(p3, 0.0, 1.0))) /
         kPi;
}

// Neighbour slots around v = (x, y).
enum Slot { kW, kN, kSW, kE, kS, kNE };
constexpr int kSlotDx[6] = {-1, 0, -1, 1, 0, 1};
constexpr int kSlotDy[6] = {0, 1, -1, 0, -1, 1};

class Solver {
 public:
  Solver(const Domain& d, double mesh) : d_(d), h_(mesh) {
    std::size_t nv = d.vertex_count();
    nbr_.assign(nv, {});
    fixed_.assign(nv, 0);
    for (std::size_t i : d.boundary_indices()) fixed_[i] = 1;
    for (std::size_t i = 0; i < nv; ++i) {
      Vertex v = d.vertex(i);
      for (int k = 0; k < 6; ++k) {
        int x = v.x + kSlotDx[k], y = v.y + kSlotDy[k];
        nbr_[i][static_cast<std::size_t>(k)] = d.contains(x, y) ? d.index(x, y) : kNone;
      }
    }
    for (std::size_t i = 0; i < nv; ++i) {
      const auto& n = nbr_[i];
      // Each proportion is c + (H[plus] - H[minus]) / h.
      if (n[kE] != kNone && n[kNE] != kNone) faces_.push_back({{i, n[kE], n[kNE]}, {n[kE], n[kNE], i}, {1.0, 0.0, 0.0}});
      if (n[kN] != kNone && n[kNE] != kNone) faces_.push_back({{n[kN], i, n[kNE]}, {n[kNE], n[kN], i}, {1.0, 0.0, 0.0}});
    }
    for (std::size_t i = 0; i < nv; ++i) {
      if (fixed_[i]) continue;
      Vertex v = d.vertex(i);
      colours_[static_cast<std::size_t>(((v.x + v.y) % 3 + 3) % 3)].push_back(i);
    }
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // The six proportions that depend on H_v, as p = c + sign * H_v / h.  Forms 0, 2, 4 rise
  // with H_v (lower bounds), forms 1, 3, 5 fall (upper bounds); each appears in two faces.
  struct Forms {
    double c[6];
  };
  static constexpr double kSign[6] = {1, -1, 1, -1, 1, -1};

  Forms forms(const std::vector<double>& H, std::size_t i) const {
    const auto& n = nbr_[i];
    double e = H[n[kE]], ne = H[n[kNE]], nn = H[n[kN]], w = H[n[kW]], s = H[n[kS]], sw = H[n[kSW]];
    return {{1.0 - e / h_, ne / h_, -nn / h_, 1.0 + w / h_, -sw / h_, s / h_}};
  }

  double p(const Forms& f, int k, double Hv) const { return f.c[k] + kSign[k] * Hv / h_; }

  // sum_k sign_k * (-log sin(pi p_k)); decreasing in H_v, zero at the local maximum.
  double balance(const Forms& f, double Hv, double* slope) const {
    double b = 0.0, db = 0.0;
    for (int k = 0; k < 6; ++k) {
      double q = std::clamp(p(f, k, Hv), 1e-300, 1.0);
      b -= kSign[k] * std::log(std::sin(kPi * q));
      db -= kPi / (std::tan(kPi * q) * h_);
    }
    if (slope) *slope = db;
    return b;
  }

  // Local entropy up to terms independent of H_v.
  double local(const Forms& f, double Hv) const {
    double sum = 0.0;
    for (int k = 0; k < 6; ++k) sum += lobachevsky(kPi * std::clamp(p(f, k, Hv), 0.0, 1.0));
    return sum;
  }

  struct Interval {
    double lo, hi;
  };
  Interval interval(const Forms& f) const {
    // p_k >= 0 for every form.
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 6; ++k) {
      double bound = -f.c[k] * h_ * kSign[k];
      if (kSign[k] > 0) lo = std::max(lo, bound);
      else hi = std::min(hi, bound);
    }
    return {lo, hi};
  }

  // Maximizer of the local entropy on [lo + eps, hi - eps] by safeguarded Newton.
  double best(const Forms& f, double start, Interval iv) const {
    const double eps = 1e-9 * h_;
    double L = iv.lo + eps, R = iv.hi - eps;
    if (R <= L) return 0.5 * (iv.lo + iv.hi);
    double slope = 0.0;
    double x = std::clamp(start, L, R);
    double bx = balance(f, x, nullptr);
    if (std::fabs(bx) <= 1e-12) return x;
    if (bx > 0) {
      if (balance(f, R, nullptr) >= 0.0) return R;
      L = x;
    } else {
      if (balance(f, L, nullptr) <= 0.0) return L;
      R = x;
    }
    x = 0.5 * (L + R);
    for (int it = 0; it < 100; ++it) {
      double b = balance(f, x, &slope);
      if (b > 0) L = x;
      else R = x;
      double next = slope < 0 ? x - b / slope : 0.5 * (L + R);
      if (!(next > L && next < R)) next = 0.5 * (L + R);
      if (std::fabs(next - x) < 1e-14 * h_ || R - L < 1e-15 * h_) return next;
      x = next;
    }
    return x;
  }

  // One colour-ordered sweep; returns the largest change.
  double sweep(std::vector<double>& H, double omega, int threads) const {
    double worst = 0.0;
    for (const auto& nodes : colours_) {
      auto work = [&](std::size_t from, std::size_t to, double& local_worst) {
        for (std::size_t k = from; k < to; ++k) {
          std::size_t i = nodes[k];
          Forms f = forms(H, i);
          Interval iv = interval(f);
          double old = H[i];
          double star = best(f, old, iv);
          double next = star;
          const double eps = 1e-9 * h_;
          if (omega != 1.0 && iv.hi - iv.lo > 2 * eps) {
            double over = std::clamp(old + omega * (star - old), iv.lo + eps, iv.hi - eps);
            if (local(f, over) > local(f, old) + 1e-14) next = over;
          }
          local_worst = std::max(local_worst, std::fabs(next - old));
          H[i] = next;
        }
      };
      if (threads <= 1 || nodes.size() < 4096) {
        work(0, nodes.size(), worst);
      } else {
        std::vector<std::thread> pool;
        std::vector<double> worsts(static_cast<std::size_t>(threads), 0.0);
        std::size_t chunk = (nodes.size() + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
        for (int t = 0; t < threads; ++t) {
          std::size_t from = std::min(nodes.size(), chunk * static_cast<std::size_t>(t));
          std::size_t to = std::min(nodes.size(), from + chunk);
          pool.emplace_back(work, from, to, std::ref(worsts[static_cast<std::size_t>(t)]));
        }
        for (auto& th : pool) th.join();
        for (double w : worsts) worst = std::max(worst, w);
      }
    }
    return worst;
  }

  double residual(const std::vector<double>& H) const {
    double worst = 0.0;
    const double eps = 1e-9 * h_;
    for (const auto& nodes : colours_)
      for (std::size_t i : nodes) {
        Forms f = forms(H, i);
        Interval iv = interval(f);
        double b = balance(f, H[i], nullptr);
        if (H[i] <= iv.lo + eps * 1.5 && b <= 0) continue;
        if (H[i] >= iv.hi - eps * 1.5 && b >= 0) continue;
        worst = std::max(worst, std::fabs(b));
      }
    return worst;
  }

  double total(const std::vector<double>& H) const {
    double sum = 0.0;
    for (const auto& f : faces_)
      sum += sigma_of_proportions(prop(f, 0, H), prop(f, 1, H), prop(f, 2, H));
    return sum * 0.5 * h_ * h_;
  }

  // Damped Newton step on the nodes strictly inside their clamped intervals.  Returns the
  // largest change, 0 when no ascent step was found.
  double newton(std::vector<double>& H, double& E) const {
    const double eps = 1e-9 * h_;
    std::vector<long> var(H.size(), -1);
    long nvar = 0;
    for (const auto& nodes : colours_)
      for (std::size_t i : nodes) {
        Interval iv = interval(forms(H, i));
        if (H[i] > iv.lo + 2 * eps && H[i] < iv.hi - 2 * eps) var[i] = nvar++;
      }
    if (nvar == 0) return 0.0;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nvar);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(faces_.size() * 12);
    for (const auto& f : faces_)
      for (int k = 0; k < 3; ++k) {
        double q = std::max(prop(f, k, H), 1e-300);
        double grad = -0.5 * h_ * std::log(2.0 * std::sin(kPi * q));
        double w = 0.5 * kPi / std::tan(kPi * q);
        long a = var[f.plus[k]], b = var[f.minus[k]];
        if (a >= 0) {
          g[a] += grad;
          trip.emplace_back(a, a, w);
        }
        if (b >= 0) {
          g[b] -= grad;
          trip.emplace_back(b, b, w);
        }
        if (a >= 0 && b >= 0) {
          trip.emplace_back(a, b, -w);
          trip.emplace_back(b, a, -w);
        }
      }
    Eigen::SparseMatrix<double> A(nvar, nvar);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0) return 0.0;
    Eigen::VectorXd d = ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !d.allFinite()) return 0.0;
    std::vector<double> dir(H.size(), 0.0);
    for (std::size_t i = 0; i < H.size(); ++i)
      if (var[i] >= 0) dir[i] = d[var[i]];
    double alpha = 1.0;
    for (const auto& f : faces_)
      for (int k = 0; k < 3; ++k) {
        double dp = (dir[f.plus[k]] - dir[f.minus[k]]) / h_;
        if (dp >= 0) continue;
        double p = prop(f, k, H);
        double floor = p <= 1e-9 ? p : std::max(0.1 * p, 1e-9);
        alpha = std::min(alpha, (p - floor) / -dp);
      }
    std::vector<double> trial(H.size());
    for (int attempt = 0; attempt < 40 && alpha > 0; ++attempt, alpha *= 0.5) {
      for (std::size_t i = 0; i < H.size(); ++i) trial[i] = H[i] + alpha * dir[i];
      double next = total(trial);
      if (next > E) {
        double change = 0.0;
        for (std::size_t i = 0; i < H.size(); ++i) change = std::max(change, std::fabs(trial[i] - H[i]));
        H.swap(trial);
        E = next;
        return change;
      }
    }
    return 0.0;
  }

  std::size_t free_count() const { return colours_[0].size() + colours_[1].size() + colours_[2].size(); }

 private:
  const Domain& d_;
  double h_;
  std::vector<std::array<std::size_t, 6>> nbr_;
  std::vector<std::uint8_t> fixed_;
  std::array<std::vector<std::size_t>, 3> colours_;
  struct FaceProps {
    std::size_t plus[3];
    std::size_t minus[3];
    double c[3];
  };
  std::vector<FaceProps> faces_;

  double prop(const FaceProps& f, int k, const std::vector<double>& H) const {
    return f.c[k] + (H[f.plus[k]] - H[f.minus[k]]) / h_;
  }
};

std::vector<double> midpoint_start(const Domain& d, const std::vector<double>& boundary_values, double h) {
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t nv = d.vertex_count();
  std::vector<double> lower(nv, -inf), upper(nv, inf);
  std::vector<std::uint8_t> fixed(nv, 0);
  auto bidx = d.boundary_indices();
  for (std::size_t k = 0; k < bidx.size(); ++k) {
    lower[bidx[k]] = upper[bidx[k]] = boundary_values[k];
    fixed[bidx[k]] = 1;
  }
  std::vector<Vertex> verts = d.vertices();
  const double tol = 1e-12 * h;
  bool bad = false;
  auto relax = [&](std::size_t i) {
    bool changed = false;
    const Vertex& v = verts[i];
    for (int k = 0; k < 6; ++k) {
      auto [dx, dy] = kNeighbourSteps[static_cast<std::size_t>(k)];
      if (!d.contains(v.x + dx, v.y + dy)) continue;
      std::size_t j = d.index(v.x + dx, v.y + dy);
      double up_cost = k < 3 ? 0.0 : h, down_cost = k < 3 ? -h : 0.0;
      double u = upper[j] + up_cost, l = lower[j] + down_cost;
      if (fixed[i]) {
        if (u < upper[i] - tol || l > lower[i] + tol) bad = true;
        continue;
      }
      if (u < upper[i]) {
        upper[i] = u;
        changed = true;
      }
      if (l > lower[i]) {
        lower[i] = l;
        changed = true;
      }
    }
    return changed;
  };
  for (std::size_t pass = 0; pass <= 2 * nv + 2; ++pass) {
    bool changed = false;
    if (pass % 2 == 0)
      for (std::size_t i = 0; i < nv; ++i) changed |= relax(i);
    else
      for (std::size_t i = nv; i-- > 0;) changed |= relax(i);
    if (!changed) break;
  }
  std::vector<double> H(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    if (lower[i] > upper[i] + tol || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) bad = true;
    H[i] = 0.5 * (lower[i] + upper[i]);
  }
  if (bad) throw InvalidInput("maximize_entropy: boundary data is not admissible");
  return H;
}

// Coarse domain (every other row and column) when d is its exact refinement.
std::optional<Domain> coarsen(const Domain& d) {
  if (d.y_min() % 2 != 0 || (d.y_max() - d.y_min()) % 2 != 0 || d.row_count() < 5) return std::nullopt;
  std::vector<int> left, right;
  for (int y = d.y_min(); y <= d.y_max(); y += 2) {
    if (d.left(y) % 2 != 0 || d.right(y) % 2 != 0) return std::nullopt;
    left.push_back(d.left(y) / 2);
    right.push_back(d.right(y) / 2);
  }
  try {
    return Domain::from_rows(d.y_min() / 2, left, right);
  } catch (const InvalidInput&) {
    return std::nullopt;
  }
}

// Piecewise-linear prolongation of a coarse solution; nullopt if it does not reproduce the
// fine boundary data.
std::optional<std::vector<double>> prolong(const Domain& fine, const std::vector<double>& boundary_values, const Domain& coarse,
                                           const std::vector<double>& Hc, double h) {
  std::vector<double> H(fine.vertex_count());
  for (std::size_t i = 0; i < fine.vertex_count(); ++i) {
    Vertex v = fine.vertex(i);
    int x0 = v.x >> 1, y0 = v.y >> 1;
    int x1 = x0 + (v.x & 1), y1 = y0 + (v.y & 1);
    if (!coarse.contains(x0, y0) || !coarse.contains(x1, y1)) return std::nullopt;
    H[i] = 0.5 * (Hc[coarse.index(x0, y0)] + Hc[coarse.index(x1, y1)]);
  }
  auto bidx = fine.boundary_indices();
  for (std::size_t k = 0; k < bidx.size(); ++k) {
    if (std::fabs(H[bidx[k]] - boundary_values[k]) > 1e-9 * h) return std::nullopt;
    H[bidx[k]] = boundary_values[k];
  }
  for (std::size_t i = 0; i < fine.vertex_count(); ++i) {
    Vertex v = fine.vertex(i);
    for (auto [dx, dy] : kRisingSteps) {
      if (!fine.contains(v.x + dx, v.y + dy)) continue;
      double inc = H[fine.index(v.x + dx, v.y + dy)] - H[i];
      if (inc < -1e-9 * h || inc > h * (1 + 1e-9)) return std::nullopt;
    }
  }
  return H;
}

std::vector<double> solve(const Domain& d, const std::vector<double>& boundary_values, double h, const EntropyOptions& opts,
                          double& entropy_out, double& residual_out, long& sweeps_out) {
  std::optional<std::vector<double>> start;
  if (opts.coarse_to_fine) {
    if (auto coarse = coarsen(d)) {
      auto cb = coarse->boundary_indices();
      auto bidx = d.boundary_indices();
      std::vector<double> cvals;
      bool ok = true;
      for (std::size_t k : cb) {
        Vertex v = coarse->vertex(k);
        if (!d.contains(2 * v.x, 2 * v.y) || !d.is_boundary(2 * v.x, 2 * v.y)) {
          ok = false;
          break;
        }
        std::size_t fi = d.index(2 * v.x, 2 * v.y);
        auto it = std::lower_bound(bidx.begin(), bidx.end(), fi);
        cvals.push_back(boundary_values[static_cast<std::size_t>(it - bidx.begin())]);
      }
      if (ok) {
        double ce = 0, cr = 0;
        long cs = 0;
        std::vector<double> Hc = solve(*coarse, cvals, 2 * h, opts, ce, cr, cs);
        start = prolong(d, boundary_values, *coarse, Hc, h);
        sweeps_out += cs;
      }
    }
  }
  std::vector<double> H = start ? *start : midpoint_start(d, boundary_values, h);
  Solver solver(d, h);
  int span = std::max(d.row_count(), d.bounding_box().x_max - d.bounding_box().x_min + 1);
  double omega = opts.omega > 0 ? opts.omega : 2.0 / (1.0 + std::sin(kPi / std::max(span, 2)));
  double E = solver.total(H);
  long sweeps = 0;
  double change = 0.0;
  if (solver.free_count() > 0) {
    for (;;) {
      change = solver.sweep(H, omega, opts.threads);
      ++sweeps;
      double next = solver.total(H);
      if (next < E - 1e-12 * std::max(1.0, std::fabs(E)))
        throw std::logic_error("maximize_entropy: entropy decreased during a sweep " + std::to_string(E) + " " + std::to_string(next));
      E = next;
      double step = solver.newton(H, E);
      if (std::max(change, step) < opts.tolerance * h) break;
      if (sweeps >= opts.max_sweeps) throw NotConverged("maximize_entropy: sweep cap reached", solver.residual(H));
    }
  }
  entropy_out = E;
  residual_out = solver.residual(H);
  sweeps_out += sweeps;
  return H;
}

}  // namespace

double entropy(const ContinuumField& H, double tol) {
  const GridSpec& g = H.grid();
  double sum = 0.0;
  auto check = [&](double s, double t, int i, int j, const char* kind) {
    Slope sl{s, t};
    if (!sl.in_closure(tol))
      throw InvalidInput(std::string("entropy: slope outside the slope set on ") + kind + " triangle of cell (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
    auto p = sl.proportions();
    return sigma_of_proportions(p[0], p[1], p[2]);
  };
  for (int j = 0; j + 1 < g.nt; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      bool v00 = H.valid(i, j), v10 = H.valid(i + 1, j), v01 = H.valid(i, j + 1), v11 = H.valid(i + 1, j + 1);
      if (v00 && v10 && v11) {
        double s = (H.real(i + 1, j) - H.real(i, j)) / g.hx, t = (H.real(i + 1, j + 1) - H.real(i + 1, j)) / g.ht;
        sum += check(s, t, i, j, "up");
      }
      if (v00 && v01 && v11) {
        double s = (H.real(i + 1, j + 1) - H.real(i, j + 1)) / g.hx, t = (H.real(i, j + 1) - H.real(i, j)) / g.ht;
        sum += check(s, t, i, j, "down");
      }
    }
  return sum * 0.5 * g.hx * g.ht;
}

EntropyMaximum maximize_entropy(const Domain& d, const std::vector<double>& boundary_values, double mesh, const EntropyOptions& opts) {
  if (!(mesh > 0)) throw InvalidInput("maximize_entropy: mesh must be positive");
  if (boundary_values.size() != d.boundary_indices().size())
    throw InvalidInput("maximize_entropy: boundary values do not match the boundary vertices");
  EntropyMaximum out;
  std::vector<double> H = solve(d, boundary_values, mesh, opts, out.entropy, out.residual, out.sweeps);
  BoundingBox bb = d.bounding_box();
  GridSpec g{bb.x_min * mesh, bb.y_min * mesh, mesh, mesh, bb.x_max - bb.x_min + 1, bb.y_max - bb.y_min + 1};
  out.height = ContinuumField(g);
  for (std::size_t i = 0; i < d.vertex_count(); ++i) {
    Vertex v = d.vertex(i);
    out.height.set(v.x - bb.x_min, v.y - bb.y_min, H[i]);
  }
  return out;
}

EntropyMaximum maximize_entropy_hexagon(int a, int b, int c, int resolution, const EntropyOptions& opts) {
  if (resolution < 1) throw InvalidInput("maximize_entropy_hexagon: resolution must be positive");
  auto hex = build_hexagon(a * resolution, b * resolution, c * resolution);
  std::vector<double> vals;
  for (int v : hex.boundary.values()) vals.push_back(static_cast<double>(v) / resolution);
  return maximize_entropy(hex.domain, vals, 1.0 / resolution, opts);
}

}  // namespace tiling_lab
