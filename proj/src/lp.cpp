#include "sipg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sipg/error.hpp"

namespace sipg::lp {

std::size_t LinearProgram::addVariable(double cost, double lower,
                                       std::optional<double> upper) {
  objective_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  for (auto& row : rows_) row.coefficients.push_back(0.0);
  return objective_.size() - 1;
}

void LinearProgram::addRow(std::span<const std::pair<std::size_t, double>> terms,
                           Sense sense, double bound) {
  Row row;
  row.coefficients.assign(objective_.size(), 0.0);
  for (const auto& [index, value] : terms) {
    if (index >= objective_.size()) {
      throw Error(ErrorCode::InvalidArgument, "lp: row references unknown variable");
    }
    row.coefficients[index] += value;
  }
  row.sense = sense;
  row.bound = bound;
  rows_.push_back(std::move(row));
}

void LinearProgram::addRow(Row row) {
  if (row.coefficients.size() != objective_.size()) {
    throw Error(ErrorCode::InvalidArgument, "lp: row width does not match variable count");
  }
  rows_.push_back(std::move(row));
}

void LinearProgram::scaleObjective(double factor) {
  for (auto& c : objective_) c *= factor;
}

const char* toString(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr std::size_t kMaxPivots = 200000;

// Power-of-two factor bringing max |v| into [1, 2). Exact in binary.
double binaryScale(double maxAbs) {
  if (maxAbs == 0.0 || !std::isfinite(maxAbs)) return 1.0;
  return std::ldexp(1.0, -std::ilogb(maxAbs));
}

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0),
        cost_(cols + 1, 0.0), basis_(rows, 0), barred_(cols, false) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  std::vector<bool>& barred() { return barred_; }

  // Installs costs (length cols) and prices out the current basis.
  void setCosts(const std::vector<double>& costs) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    std::copy(costs.begin(), costs.end(), cost_.begin());
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) cost_[c] -= cb * at(r, c);
    }
  }

  double reducedCost(std::size_t c) const { return cost_[c]; }
  double objective() const { return -cost_[cols_]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    const double f = cost_[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c <= cols_; ++c) cost_[c] -= f * at(pr, c);
      cost_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  void eraseRow(std::size_t r) {
    const auto width = static_cast<std::ptrdiff_t>(cols_ + 1);
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r) * width,
                data_.begin() + static_cast<std::ptrdiff_t>(r + 1) * width);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
  std::vector<bool> barred_;
};

enum class Outcome { Optimal, Unbounded };

// Bland's rule: lowest-index improving column, lowest-index leaving variable
// among ratio ties.
Outcome iterate(Tableau& t, std::size_t& pivots) {
  for (;;) {
    std::size_t entering = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (!t.barred()[c] && t.reducedCost(c) < -kCostTol) {
        entering = c;
        break;
      }
    }
    if (entering == t.cols()) return Outcome::Optimal;

    std::size_t leaving = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, entering);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      const double tol = 1e-12 * std::max(1.0, std::abs(best));
      if (leaving == t.rows() || ratio < best - tol) {
        best = ratio;
        leaving = r;
      } else if (ratio <= best + tol && t.basis()[r] < t.basis()[leaving]) {
        best = std::min(best, ratio);
        leaving = r;
      }
    }
    if (leaving == t.rows()) return Outcome::Unbounded;
    if (++pivots > kMaxPivots) {
      throw Error(ErrorCode::State, "lp: pivot limit exceeded");
    }
    t.pivot(leaving, entering);
  }
}

void validate(const LinearProgram& program) {
  const auto n = program.variableCount();
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(program.objective().begin(), program.objective().end(), finite)) {
    throw Error(ErrorCode::InvalidArgument, "lp: non-finite objective coefficient");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!finite(program.lowerBounds()[j])) {
      throw Error(ErrorCode::InvalidArgument, "lp: non-finite lower bound");
    }
    if (program.upperBounds()[j] && !finite(*program.upperBounds()[j])) {
      throw Error(ErrorCode::InvalidArgument, "lp: non-finite upper bound");
    }
  }
  for (const auto& row : program.rows()) {
    if (row.coefficients.size() != n) {
      throw Error(ErrorCode::InvalidArgument, "lp: row width does not match variable count");
    }
    if (!std::all_of(row.coefficients.begin(), row.coefficients.end(), finite) ||
        !finite(row.bound)) {
      throw Error(ErrorCode::InvalidArgument, "lp: non-finite row data");
    }
  }
}

}  // namespace

Solution solve(const LinearProgram& program) {
  validate(program);
  const std::size_t n = program.variableCount();
  const auto& lower = program.lowerBounds();
  const auto& upper = program.upperBounds();

  Solution result;

  // Substitute x = lower + y and gather rows over y >= 0, upper bounds included.
  struct WorkRow {
    std::vector<double> a;
    bool lessEqual;
    double b;
  };
  std::vector<WorkRow> work;
  work.reserve(program.rowCount() + n);
  for (const auto& row : program.rows()) {
    double shift = 0.0;
    for (std::size_t j = 0; j < n; ++j) shift += row.coefficients[j] * lower[j];
    work.push_back({row.coefficients, row.sense == Sense::LessEqual, row.bound - shift});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!upper[j]) continue;
    const double span = *upper[j] - lower[j];
    if (span < 0.0) {
      result.status = Status::Infeasible;
      return result;
    }
    std::vector<double> a(n, 0.0);
    a[j] = 1.0;
    work.push_back({std::move(a), true, span});
  }

  // Normalise: nonnegative right-hand sides, power-of-two row scaling.
  std::size_t artificialCount = 0;
  for (auto& row : work) {
    double maxAbs = 0.0;
    for (double v : row.a) maxAbs = std::max(maxAbs, std::abs(v));
    if (maxAbs == 0.0) {
      const bool ok = row.lessEqual ? row.b >= 0.0 : row.b <= 0.0;
      if (!ok) {
        result.status = Status::Infeasible;
        return result;
      }
    }
    const double s = binaryScale(maxAbs);
    for (double& v : row.a) v *= s;
    row.b *= s;
    if (row.b < 0.0 || (row.b == 0.0 && !row.lessEqual)) {
      for (double& v : row.a) v = -v;
      row.b = -row.b;
      row.lessEqual = !row.lessEqual;
    }
    if (!row.lessEqual) ++artificialCount;
  }

  const std::size_t m = work.size();
  const std::size_t slackStart = n;
  const std::size_t artStart = n + m;
  const std::size_t cols = n + m + artificialCount;
  Tableau t(m, cols);

  double artificialScale = 1.0;
  std::size_t art = artStart;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = work[r];
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = row.a[j];
    t.rhs(r) = row.b;
    if (row.lessEqual) {
      t.at(r, slackStart + r) = 1.0;
      t.basis()[r] = slackStart + r;
    } else {
      t.at(r, slackStart + r) = -1.0;
      t.at(r, art) = 1.0;
      t.basis()[r] = art;
      artificialScale = std::max(artificialScale, row.b);
      ++art;
    }
  }

  std::size_t pivots = 0;

  if (artificialCount > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = artStart; c < cols; ++c) phase1[c] = 1.0;
    t.setCosts(phase1);
    iterate(t, pivots);
    if (t.objective() > 1e-9 * artificialScale) {
      result.status = Status::Infeasible;
      return result;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    for (std::size_t r = 0; r < t.rows();) {
      if (t.basis()[r] < artStart) {
        ++r;
        continue;
      }
      std::size_t replacement = artStart;
      for (std::size_t c = 0; c < artStart; ++c) {
        if (std::abs(t.at(r, c)) > kPivotTol) {
          replacement = c;
          break;
        }
      }
      if (replacement == artStart) {
        t.eraseRow(r);  // redundant constraint
      } else {
        t.pivot(r, replacement);
        ++r;
      }
    }
    for (std::size_t c = artStart; c < cols; ++c) t.barred()[c] = true;
  }

  double maxCost = 0.0;
  for (double c : program.objective()) maxCost = std::max(maxCost, std::abs(c));
  const double costScale = binaryScale(maxCost);
  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = program.objective()[j] * costScale;
  t.setCosts(phase2);
  if (iterate(t, pivots) == Outcome::Unbounded) {
    result.status = Status::Unbounded;
    return result;
  }

  std::vector<double> y(n, 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const auto b = t.basis()[r];
    if (b < n) y[b] = std::max(t.rhs(r), 0.0);
  }
  result.x.resize(n);
  result.objectiveValue = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double x = lower[j] + y[j];
    if (upper[j]) x = std::min(x, *upper[j]);
    result.x[j] = x;
    result.objectiveValue += program.objective()[j] * x;
  }
  result.status = Status::Optimal;
  return result;
}

}  // namespace sipg::lp
