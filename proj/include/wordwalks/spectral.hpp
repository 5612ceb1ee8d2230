#pragma once

#include <cmath>
#include <optional>
#include <unordered_map>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/kernel.hpp"

// Spectral radius and Green function by exact dynamic programming on
// the reachable set, and Perron pairs of finite nonnegative matrices.

namespace ww {

namespace detail {

// One exact DP step: push the current mass through the kernel. The
// reachable set grows breadth-first with the DP itself; no global
// radius parameter.
template <class K>
std::unordered_map<typename K::state_type, double, HashOf> dp_step(
    const K& k, const std::unordered_map<typename K::state_type, double, HashOf>& cur,
    std::size_t state_guard) {
  std::unordered_map<typename K::state_type, double, HashOf> next;
  next.reserve(cur.size() * 2);
  for (auto& [s, mass] : cur) {
    for (auto& [t, p] : k.enumerate(s)) next[t] += mass * p;
    if (next.size() > state_guard) {
      throw ValidationError("spectral DP: truncation exceeded the 1e7-state memory guard");
    }
  }
  return next;
}

// Fit log rho from L(n) = log p^(n)/n at two indices under the model
// L(n) = log rho + a/n; polynomial prefactors cancel to O(log n / n^2).
inline double two_point_extrapolate(long long n0, double l0, long long n1, double l1) {
  return (static_cast<double>(n1) * l1 - static_cast<double>(n0) * l0) /
         static_cast<double>(n1 - n0);
}

}  // namespace detail

constexpr std::size_t kSpectralStateGuard = 10'000'000;

// Partial sum of the Green function: sum_{n<=N} p^(n)(x,y) z^n.
template <class K>
double truncated_green(const K& k, const typename K::state_type& x,
                       const typename K::state_type& y, double z, int n_steps) {
  require(z >= 0, "truncated_green: z must be >= 0");
  require(n_steps >= 0, "truncated_green: N must be >= 0");
  std::unordered_map<typename K::state_type, double, HashOf> dist;
  dist[x] = 1.0;
  double total = (x == y) ? 1.0 : 0.0;
  double zn = 1.0;
  for (int n = 1; n <= n_steps; ++n) {
    dist = detail::dp_step(k, dist, kSpectralStateGuard);
    zn *= z;
    auto it = dist.find(y);
    if (it != dist.end()) total += it->second * zn;
  }
  return total;
}

struct RhoEstimate {
  double estimate = 0;
  // roots[m] = p^(2m)(x,x)^(1/2m) for m = 1..n_max/2 (0 where the
  // return probability vanishes).
  std::vector<double> roots;
};

// Spectral radius via the even-time return-probability sequence,
// computed exactly by DP and extrapolated on the log scale. Even times
// only: bipartite chains have vanishing odd return probabilities.
template <class K>
RhoEstimate spectral_radius_dp(const K& k, const typename K::state_type& x, int n_max) {
  require(n_max >= 10 && n_max % 2 == 0, "spectral_radius_dp: n_max must be even and >= 10");
  std::unordered_map<typename K::state_type, double, HashOf> dist;
  dist[x] = 1.0;
  RhoEstimate out;
  out.roots.assign(n_max / 2 + 1, 0.0);
  std::vector<double> log_p(n_max / 2 + 1, 0.0);
  std::vector<bool> positive(n_max / 2 + 1, false);
  for (int n = 1; n <= n_max; ++n) {
    dist = detail::dp_step(k, dist, kSpectralStateGuard);
    if (n % 2 != 0) continue;
    auto it = dist.find(x);
    if (it == dist.end() || it->second <= 0) continue;
    int m = n / 2;
    positive[m] = true;
    log_p[m] = std::log(it->second);
    out.roots[m] = std::exp(log_p[m] / n);
  }
  int m1 = n_max / 2;
  while (m1 >= 1 && !positive[m1]) --m1;
  if (m1 < 1) {
    throw ValidationError(
        "spectral_radius_dp: all return probabilities vanish up to n_max "
        "(unreachable or fully periodic start)");
  }
  int m0 = m1 / 2;
  while (m0 >= 1 && !positive[m0]) --m0;
  if (m0 < 1 || m0 == m1) {
    out.estimate = out.roots[m1];
    return out;
  }
  double l1 = log_p[m1] / (2.0 * m1);
  double l0 = log_p[m0] / (2.0 * m0);
  out.estimate = std::exp(detail::two_point_extrapolate(2 * m0, l0, 2 * m1, l1));
  return out;
}

// ----------------------------------------------------------------------
// Perron pair of a finite nonnegative irreducible matrix.

using Matrix = std::vector<std::vector<double>>;

struct PerronPair {
  double rho = 0;
  std::vector<double> h;
};

namespace detail {

inline void check_square_nonneg(const Matrix& a) {
  require(!a.empty(), "perron: empty matrix");
  for (auto& row : a) {
    require(row.size() == a.size(), "perron: matrix must be square");
    for (double v : row) require(v >= 0, "perron: entries must be nonnegative");
  }
}

inline bool strongly_connected_support(const Matrix& a) {
  const int n = static_cast<int>(a.size());
  auto reach = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        double entry = transpose ? a[w][v] : a[v][w];
        if (entry > 0 && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    for (bool b : seen) {
      if (!b) return false;
    }
    return true;
  };
  return reach(false) && reach(true);
}

inline std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& v) {
  std::vector<double> w(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double acc = 0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += a[i][j] * v[j];
    w[i] = acc;
  }
  return w;
}

inline std::optional<PerronPair> power_iterate(const Matrix& a, long long max_iters,
                                               double tol) {
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0);
  double rho_prev = -1;
  for (long long it = 0; it < max_iters; ++it) {
    auto w = mat_vec(a, v);
    double norm = 0;
    for (double x : w) norm = std::max(norm, x);
    if (norm == 0) return PerronPair{0.0, std::vector<double>(n, 1.0)};
    double resid = 0;
    for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(w[i] - norm * v[i]));
    for (double& x : w) x /= norm;
    bool settled = rho_prev >= 0 && std::abs(norm - rho_prev) < tol * std::max(1.0, norm);
    if (settled && resid <= 1e-11 * norm) return PerronPair{norm, std::move(w)};
    rho_prev = norm;
    v = std::move(w);
  }
  return std::nullopt;
}

}  // namespace detail

// Power iteration with normalization until successive rho estimates
// differ by < 1e-12. Periodic matrices oscillate; those get a damped
// pass on (I + A/s)/2, whose eigenvector is unchanged and whose
// eigenvalue is recovered affinely.
inline PerronPair perron(const Matrix& a) {
  detail::check_square_nonneg(a);
  const std::size_t n = a.size();
  if (n == 1) return {a[0][0], {1.0}};
  require(detail::strongly_connected_support(a), "perron: matrix is reducible");

  auto raw = detail::power_iterate(a, 5000, 1e-13);
  PerronPair result;
  if (raw) {
    result = *raw;
  } else {
    double s = 0;
    for (auto& row : a) {
      double rs = 0;
      for (double v : row) rs += v;
      s = std::max(s, rs);
    }
    Matrix damped(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) damped[i][j] = 0.5 * a[i][j] / s;
      damped[i][i] += 0.5;
    }
    auto d = detail::power_iterate(damped, 200000, 1e-14);
    require(d.has_value(), "perron: power iteration failed to converge");
    result.rho = (2.0 * d->rho - 1.0) * s;
    result.h = std::move(d->h);
  }

  // Normalize and verify the defining residual.
  double hmax = 0;
  for (double x : result.h) hmax = std::max(hmax, x);
  for (double& x : result.h) x /= hmax;
  for (double x : result.h) require(x > 0, "perron: eigenvector not strictly positive");
  auto w = detail::mat_vec(a, result.h);
  double resid = 0;
  for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(w[i] - result.rho * result.h[i]));
  require(resid <= 1e-10 * std::max(result.rho, 1e-300), "perron: residual too large");
  return result;
}

// The h-transform p^h(x,y) = p(x,y) h(y) / (rho h(x)); stochastic
// exactly when Ph = rho h.
inline Matrix h_transform(const Matrix& a, const std::vector<double>& h, double rho) {
  detail::check_square_nonneg(a);
  require(h.size() == a.size(), "h_transform: size mismatch");
  require(rho > 0, "h_transform: rho must be positive");
  for (double x : h) require(x > 0, "h_transform: h must be strictly positive");
  Matrix out(a.size(), std::vector<double>(a.size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      out[i][j] = a[i][j] * h[j] / (rho * h[i]);
    }
  }
  return out;
}

}  // namespace ww
