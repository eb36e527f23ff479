#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace vatrack {

/// Dense track x detection cost matrix, entries in [0, 1].
struct CostMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  CostMatrix() = default;
  CostMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
};

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (row, col)
  std::vector<int> unmatched_tracks;       // rows without a pair
  std::vector<int> unmatched_detections;   // cols without a pair
};

namespace detail {

/// Kuhn-Munkres with potentials (shortest augmenting paths), square n x n,
/// minimizing. Returns col_of_row.
inline std::vector<int> solve_square_assignment(const std::vector<double>& cost, int n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
  }
  return col_of_row;
}

}  // namespace detail

/// Globally optimal min-cost assignment. Rectangular matrices are padded to
/// square with constant-cost dummies, so exactly min(rows, cols) real pairs
/// come back. Pairs costing more than `gate` are demoted to unmatched.
inline Assignment hungarian(const CostMatrix& costs, double gate = 1.0) {
  Assignment out;
  if (costs.rows == 0 || costs.cols == 0) {
    for (int r = 0; r < costs.rows; ++r) out.unmatched_tracks.push_back(r);
    for (int c = 0; c < costs.cols; ++c) out.unmatched_detections.push_back(c);
    return out;
  }
  for (const double c : costs.data) {
    if (!(c == c) || c == std::numeric_limits<double>::infinity()) {
      throw NonFinite("cost matrix entries must be finite");
    }
  }

  const int n = std::max(costs.rows, costs.cols);
  std::vector<double> padded(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < costs.rows; ++r) {
    for (int c = 0; c < costs.cols; ++c) {
      padded[static_cast<std::size_t>(r) * n + c] = costs.at(r, c);
    }
  }
  const std::vector<int> col_of_row = detail::solve_square_assignment(padded, n);

  std::vector<char> row_used(costs.rows, 0), col_used(costs.cols, 0);
  for (int r = 0; r < costs.rows; ++r) {
    const int c = col_of_row[r];
    if (c < costs.cols && costs.at(r, c) <= gate) {
      out.pairs.emplace_back(r, c);
      row_used[r] = 1;
      col_used[c] = 1;
    }
  }
  for (int r = 0; r < costs.rows; ++r) {
    if (!row_used[r]) out.unmatched_tracks.push_back(r);
  }
  for (int c = 0; c < costs.cols; ++c) {
    if (!col_used[c]) out.unmatched_detections.push_back(c);
  }
  return out;
}

}  // namespace vatrack
