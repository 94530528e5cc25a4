#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace latentsplit {

/// A named finite random variable with outcomes 0..card-1.
struct Variable {
  std::string name;
  std::size_t card = 0;

  bool operator==(const Variable&) const = default;
};

/// Event specification: variable name -> allowed values. A missing variable
/// is summed over entirely.
using Event = std::map<std::string, std::vector<std::size_t>>;

/// Mixed-radix index helpers. The first variable is the most significant digit.
std::size_t tuple_count(std::span<const Variable> vars);
std::size_t encode_tuple(std::span<const Variable> vars, std::span<const std::size_t> values);
std::vector<std::size_t> decode_tuple(std::span<const Variable> vars, std::size_t index);

/// Exact probability table P(outcomes | conditions).
///
/// Storage is condition-major: the block for one condition tuple is contiguous
/// and indexed by the outcome tuple.
class Behavior {
 public:
  Behavior() = default;
  Behavior(std::vector<Variable> outcomes, std::vector<Variable> conditions = {});
  Behavior(std::vector<Variable> outcomes, std::vector<Variable> conditions,
           std::vector<double> table);

  const std::vector<Variable>& outcomes() const { return outcomes_; }
  const std::vector<Variable>& conditions() const { return conditions_; }
  const std::vector<double>& table() const { return table_; }

  std::size_t outcome_count() const { return outcome_count_; }
  std::size_t condition_count() const { return condition_count_; }

  double& at(std::size_t outcome_index, std::size_t condition_index = 0);
  double at(std::size_t outcome_index, std::size_t condition_index = 0) const;

  double operator()(std::span<const std::size_t> outcome,
                    std::span<const std::size_t> condition = {}) const;
  double operator()(std::initializer_list<std::size_t> outcome) const;

  std::optional<std::size_t> find_outcome(std::string_view name) const;
  std::optional<std::size_t> find_condition(std::string_view name) const;

  /// Marginal over the named outcome variables (in the given order), per condition.
  Behavior marginal(const std::vector<std::string>& keep) const;

  /// Probability of an event (sets of allowed values), for one condition tuple.
  double probability(const Event& event, std::size_t condition_index = 0) const;

  /// Throws InvalidOperator if an entry is negative or a block does not sum to 1.
  void validate(double tol = 1e-10) const;

  bool same_shape(const Behavior& other) const;
  /// Entrywise max |difference|; throws CardinalityMismatch on shape mismatch.
  double max_abs_difference(const Behavior& other) const;

 private:
  std::vector<Variable> outcomes_;
  std::vector<Variable> conditions_;
  std::size_t outcome_count_ = 1;
  std::size_t condition_count_ = 1;
  std::vector<double> table_;
};

}  // namespace latentsplit
