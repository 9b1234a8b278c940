#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sipg::lp {

enum class Sense { LessEqual, GreaterEqual };

struct Row {
  std::vector<double> coefficients;
  Sense sense = Sense::LessEqual;
  double bound = 0.0;
};

/// minimize c.x subject to rows, lower <= x <= upper.
///
/// Variables default to a lower bound of zero and no upper bound. Sector
/// controllers build these incrementally through addVariable/addRow, which
/// keeps every row the same width as the objective.
class LinearProgram {
 public:
  std::size_t addVariable(double cost, double lower = 0.0,
                          std::optional<double> upper = std::nullopt);

  /// Adds a row given as sparse (index, coefficient) pairs.
  void addRow(std::span<const std::pair<std::size_t, double>> terms, Sense sense,
              double bound);
  void addRow(Row row);

  std::size_t variableCount() const { return objective_.size(); }
  std::size_t rowCount() const { return rows_.size(); }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<double>& lowerBounds() const { return lower_; }
  const std::vector<std::optional<double>>& upperBounds() const { return upper_; }

  /// Multiplies every objective coefficient by factor.
  void scaleObjective(double factor);

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<std::optional<double>> upper_;
  std::vector<Row> rows_;
};

enum class Status { Optimal, Infeasible, Unbounded };

const char* toString(Status status);

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objectiveValue = 0.0;

  bool optimal() const { return status == Status::Optimal; }
};

/// Dense two-phase primal simplex with Bland's rule.
///
/// Pivoting is fully deterministic: the entering column is the lowest-index
/// column with a negative reduced cost and ratio-test ties go to the basic
/// variable with the lowest index. Rows and the objective are rescaled by
/// powers of two only, so scaling the objective by a positive constant does
/// not change the pivot sequence.
///
/// Throws Error(InvalidArgument) on non-finite data or ragged rows.
Solution solve(const LinearProgram& program);

}  // namespace sipg::lp
