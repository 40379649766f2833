#include "abpl/core.hpp"

#include <cmath>

namespace abpl {

ExtendedReal::ExtendedReal(double v) : value_(v) {
  if (std::isnan(v)) throw NumericError("ExtendedReal: NaN is not an extended real");
  if (v == -std::numeric_limits<double>::infinity())
    throw NumericError("ExtendedReal: -inf is not allowed");
}

double ExtendedReal::value() const {
  if (is_infinite()) throw NumericError("ExtendedReal: value() called on +inf");
  return value_;
}

void BlockProblem::check_shapes(const BlockVars& vars) const {
  if (vars.size() != block_shapes.size()) {
    throw ContractError("block count mismatch: problem has " + std::to_string(block_shapes.size()) +
                        " blocks, vars has " + std::to_string(vars.size()));
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].rows() != block_shapes[j].rows || vars[j].cols() != block_shapes[j].cols) {
      throw ContractError("block " + std::to_string(j + 1) + " has shape " +
                          std::to_string(vars[j].rows()) + "x" + std::to_string(vars[j].cols()) +
                          ", expected " + std::to_string(block_shapes[j].rows) + "x" +
                          std::to_string(block_shapes[j].cols));
    }
  }
}

void BlockProblem::check_block_index(std::size_t j) const {
  if (j >= block_shapes.size())
    throw ContractError("block index " + std::to_string(j) + " out of range");
}

double evaluate_smooth(const BlockProblem& problem, const BlockVars& vars) {
  problem.check_shapes(vars);
  const double h = problem.smooth_value(vars);
  if (!std::isfinite(h)) throw NumericError("smooth part evaluated to a non-finite value");
  return h;
}

ExtendedReal evaluate_objective(const BlockProblem& problem, const BlockVars& vars) {
  problem.check_shapes(vars);
  ExtendedReal nonsmooth(0.0);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    nonsmooth = nonsmooth + problem.nonsmooth_value(j, vars[j]);
    if (nonsmooth.is_infinite()) return ExtendedReal::infinity();
  }
  return ExtendedReal(evaluate_smooth(problem, vars)) + nonsmooth;
}

double squared_distance(const BlockVars& a, const BlockVars& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += (a[j] - b[j]).squaredNorm();
  return acc;
}

double blockwise_distance(const BlockVars& a, const BlockVars& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += (a[j] - b[j]).norm();
  return acc;
}

bool all_finite(const BlockVars& vars) {
  for (const auto& m : vars)
    if (!m.allFinite()) return false;
  return true;
}

}  // namespace abpl
