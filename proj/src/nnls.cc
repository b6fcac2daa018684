// Copyright 2026 The Rapporkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rappor/nnls.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_format.h"
#include "rappor/status.h"

namespace rappor {
namespace {

std::vector<int> PassiveIndices(const std::vector<bool>& passive) {
  std::vector<int> indices;
  for (size_t j = 0; j < passive.size(); ++j) {
    if (passive[j]) indices.push_back(static_cast<int>(j));
  }
  return indices;
}

// Solves G_PP z = b_P. Falls back to a rank-revealing decomposition when the
// subsystem is not positive definite.
Eigen::VectorXd SolveSubsystem(const Eigen::MatrixXd& gram,
                               const Eigen::VectorXd& xty,
                               const std::vector<int>& indices) {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd sub(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    rhs(a) = xty(indices[a]);
    for (Eigen::Index b = 0; b < n; ++b) {
      sub(a, b) = gram(indices[a], indices[b]);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  return sub.completeOrthogonalDecomposition().solve(rhs);
}

}  // namespace

Eigen::MatrixXd GramMatrix(const BinaryDesign& design) {
  const int num_columns = design.num_columns();
  // Row -> columns with a 1 in that row.
  std::vector<std::vector<int>> rows(static_cast<size_t>(design.num_rows));
  for (int s = 0; s < num_columns; ++s) {
    for (int64_t row : design.columns[s]) rows[row].push_back(s);
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(num_columns, num_columns);
  for (const auto& cols : rows) {
    for (int s : cols) {
      for (int t : cols) gram(s, t) += 1.0;
    }
  }
  return gram;
}

Eigen::VectorXd TransposeTimes(const BinaryDesign& design,
                               std::span<const double> y) {
  Eigen::VectorXd out(design.num_columns());
  for (int s = 0; s < design.num_columns(); ++s) {
    double sum = 0;
    for (int64_t row : design.columns[s]) sum += y[row];
    out(s) = sum;
  }
  return out;
}

Eigen::VectorXd DesignTimes(const BinaryDesign& design,
                            const Eigen::VectorXd& beta) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(design.num_rows);
  for (int s = 0; s < design.num_columns(); ++s) {
    if (beta(s) == 0.0) continue;
    for (int64_t row : design.columns[s]) out(row) += beta(s);
  }
  return out;
}

absl::StatusOr<NnlsSolution> SolveNnlsNormal(const Eigen::MatrixXd& gram,
                                             const Eigen::VectorXd& xty,
                                             double y_norm,
                                             const NnlsOptions& options) {
  const auto num_columns = static_cast<int>(xty.size());
  if (num_columns < 1) {
    return MakeError(ErrorKind::kInvalidParams, "design has no columns");
  }
  if (!(options.tolerance > 0)) {
    return MakeError(ErrorKind::kInvalidParams, "tolerance must be positive");
  }
  const int max_iterations = options.max_iterations > 0
                                 ? options.max_iterations
                                 : 10 * num_columns;
  const double threshold = options.tolerance * y_norm;

  NnlsSolution solution;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(num_columns);
  std::vector<bool> passive(static_cast<size_t>(num_columns), false);
  // Columns whose entry was undone by round-off; skipped until x moves again.
  std::vector<bool> blocked(static_cast<size_t>(num_columns), false);
  Eigen::VectorXd w = xty;

  while (y_norm > 0) {
    int entering = -1;
    double best = threshold;
    for (int j = 0; j < num_columns; ++j) {
      if (!passive[j] && !blocked[j] && w(j) > best) {
        best = w(j);
        entering = j;
      }
    }
    if (entering < 0) break;
    if (++solution.iterations > max_iterations) {
      return MakeError(ErrorKind::kMaxIterations,
                       absl::StrFormat("no convergence in %d iterations",
                                       max_iterations));
    }
    passive[entering] = true;

    bool first_pass = true;
    while (true) {
      const std::vector<int> indices = PassiveIndices(passive);
      const Eigen::VectorXd z = SolveSubsystem(gram, xty, indices);

      if (first_pass) {
        first_pass = false;
        const auto it =
            std::find(indices.begin(), indices.end(), entering) -
            indices.begin();
        if (z(it) <= 0) {
          passive[entering] = false;
          blocked[entering] = true;
          break;
        }
      }

      bool feasible = true;
      for (Eigen::Index a = 0; a < z.size(); ++a) {
        if (z(a) <= 0) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        x.setZero();
        for (Eigen::Index a = 0; a < z.size(); ++a) x(indices[a]) = z(a);
        std::fill(blocked.begin(), blocked.end(), false);
        break;
      }

      // Step from x toward z until the first passive coefficient hits zero.
      double alpha = std::numeric_limits<double>::infinity();
      int leaving = -1;
      for (Eigen::Index a = 0; a < z.size(); ++a) {
        if (z(a) > 0) continue;
        const int j = indices[a];
        const double ratio = x(j) / (x(j) - z(a));
        if (ratio < alpha) {
          alpha = ratio;
          leaving = j;
        }
      }
      for (Eigen::Index a = 0; a < z.size(); ++a) {
        const int j = indices[a];
        x(j) += alpha * (z(a) - x(j));
      }
      const double scale = x.cwiseAbs().maxCoeff();
      for (int j : indices) {
        if (j == leaving || x(j) <= 1e-14 * scale) {
          x(j) = 0;
          passive[j] = false;
        }
      }
      std::fill(blocked.begin(), blocked.end(), false);
      if (PassiveIndices(passive).empty()) break;
    }
    w = xty - gram * x;
  }

  solution.coefficients = x;
  solution.passive_set = PassiveIndices(passive);
  solution.gradient = gram * x - xty;
  solution.residual_sum_squares =
      std::max(0.0, y_norm * y_norm - 2.0 * xty.dot(x) + x.dot(gram * x));
  return solution;
}

absl::StatusOr<NnlsSolution> SolveNnls(const BinaryDesign& design,
                                       std::span<const double> y,
                                       const NnlsOptions& options) {
  if (static_cast<int64_t>(y.size()) != design.num_rows) {
    return MakeError(ErrorKind::kShapeMismatch,
                     absl::StrFormat("y has %d rows, design has %d", y.size(),
                                     design.num_rows));
  }
  double y_norm_sq = 0;
  for (double v : y) y_norm_sq += v * v;
  const Eigen::MatrixXd gram = GramMatrix(design);
  const Eigen::VectorXd xty = TransposeTimes(design, y);
  RAPPOR_ASSIGN_OR_RETURN(
      NnlsSolution solution,
      SolveNnlsNormal(gram, xty, std::sqrt(y_norm_sq), options));

  // Recompute the residual directly; the normal-equation form cancels badly
  // when the fit is close.
  const Eigen::VectorXd fitted = DesignTimes(design, solution.coefficients);
  double rss = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - fitted(static_cast<Eigen::Index>(i));
    rss += r * r;
  }
  solution.residual_sum_squares = rss;
  return solution;
}

double KktViolation(const Eigen::VectorXd& beta, const Eigen::VectorXd& gradient,
                    double y_norm) {
  if (y_norm <= 0) y_norm = 1;
  double worst = 0;
  for (Eigen::Index s = 0; s < beta.size(); ++s) {
    const double g = gradient(s) / y_norm;
    worst = std::max(worst, beta(s) > 0 ? std::abs(g) : -g);
  }
  return worst;
}

bool SatisfiesKkt(const NnlsSolution& solution, double y_norm,
                  double tolerance) {
  for (Eigen::Index s = 0; s < solution.coefficients.size(); ++s) {
    if (solution.coefficients(s) < 0) return false;
  }
  return KktViolation(solution.coefficients, solution.gradient, y_norm) <=
         tolerance;
}

}  // namespace rappor
