#pragma once

// Reference implementations used only by tests. Each one is written
// independently of the library code it checks.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// Solves A x = b by Gaussian elimination with partial pivoting.
// Returns nullopt when a pivot falls below `eps` (singular system).
inline std::optional<std::vector<double>> solve(Matrix a, std::vector<double> b, double eps = 1e-10) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < eps) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

struct DualProblem {
  std::vector<std::vector<double>> x;  // dense rows, bias column not included
  std::vector<int> y;                  // -1 / +1
  double C = 1.0;
  bool squared_hinge = false;
};

inline Matrix gram(const DualProblem& p) {
  const std::size_t n = p.y.size();
  Matrix q(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 1.0;  // appended constant feature
      for (std::size_t d = 0; d < p.x[i].size(); ++d) dot += p.x[i][d] * p.x[j][d];
      q[i][j] = p.y[i] * p.y[j] * dot;
    }
    if (p.squared_hinge) q[i][i] += 1.0 / (2.0 * p.C);
  }
  return q;
}

inline double objective(const Matrix& q, const std::vector<double>& alpha) {
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j) quad += alpha[i] * q[i][j] * alpha[j];
  }
  return 0.5 * quad - lin;
}

struct DualSolution {
  std::vector<double> alpha;
  double objective = std::numeric_limits<double>::infinity();
};

// Exact minimum of the box-constrained SVM dual by enumerating which
// coefficients sit at 0, at the upper bound, or strictly inside. For each
// pattern the free block solves its stationarity equations; feasible
// candidates are compared by objective. Some optimum always has a
// non-singular free block, so skipping singular patterns loses nothing.
inline DualSolution solve_dual(const DualProblem& p) {
  const std::size_t n = p.y.size();
  const Matrix q = gram(p);
  const double upper = p.squared_hinge ? std::numeric_limits<double>::infinity() : p.C;
  const int states = p.squared_hinge ? 2 : 3;  // 0 = lower, 1 = free, 2 = upper

  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) patterns *= static_cast<std::size_t>(states);

  DualSolution best;
  std::vector<int> state(n);
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t c = code;
    std::vector<std::size_t> free;
    std::vector<double> alpha(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(c % static_cast<std::size_t>(states));
      c /= static_cast<std::size_t>(states);
      if (state[i] == 1) free.push_back(i);
      if (state[i] == 2) alpha[i] = upper;
    }
    if (!free.empty()) {
      Matrix a(free.size(), std::vector<double>(free.size()));
      std::vector<double> b(free.size(), 1.0);
      for (std::size_t r = 0; r < free.size(); ++r) {
        for (std::size_t k = 0; k < free.size(); ++k) a[r][k] = q[free[r]][free[k]];
        for (std::size_t j = 0; j < n; ++j) {
          if (state[j] == 2) b[r] -= q[free[r]][j] * alpha[j];
        }
      }
      const auto sol = solve(a, b);
      if (!sol) continue;
      bool feasible = true;
      for (std::size_t r = 0; r < free.size(); ++r) {
        const double v = (*sol)[r];
        if (v < -1e-12 || v > upper + 1e-12) feasible = false;
        alpha[free[r]] = std::min(std::max(v, 0.0), upper);
      }
      if (!feasible) continue;
    }
    const double obj = objective(q, alpha);
    if (obj < best.objective) best = {alpha, obj};
  }
  return best;
}

// Double-loop Jaccard over arbitrary containers.
template <typename Container>
double naive_jaccard(const Container& a, const Container& b) {
  std::vector<std::string> uni;
  std::size_t common = 0;
  for (const auto& x : a) {
    bool seen = false;
    for (const auto& u : uni) seen = seen || u == x;
    if (!seen) uni.push_back(x);
  }
  for (const auto& x : b) {
    bool in_a = false;
    for (const auto& y : a) in_a = in_a || y == x;
    bool seen = false;
    for (const auto& u : uni) seen = seen || u == x;
    if (!seen) uni.push_back(x);
    if (in_a) ++common;
  }
  return uni.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(uni.size());
}

// F1 of one class counted straight from label lists, 0/0 taken as 0.
// Labels are 'A', 'F', 'N'.
inline double direct_f1(const std::string& gold, const std::string& pred, char cls) {
  double tp = 0;
  double predicted = 0;
  double actual = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] == cls) ++predicted;
    if (gold[i] == cls) ++actual;
    if (pred[i] == cls && gold[i] == cls) ++tp;
  }
  const double p = predicted == 0 ? 0 : tp / predicted;
  const double r = actual == 0 ? 0 : tp / actual;
  return p + r == 0 ? 0 : 2 * p * r / (p + r);
}

}  // namespace oracle
