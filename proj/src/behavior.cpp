#include "latentsplit/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latentsplit/error.hpp"

namespace latentsplit {

std::size_t tuple_count(std::span<const Variable> vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= v.card;
  return n;
}

std::size_t encode_tuple(std::span<const Variable> vars, std::span<const std::size_t> values) {
  if (values.size() != vars.size()) {
    throw Error(ErrorKind::CardinalityMismatch, "tuple length does not match variable count");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (values[i] >= vars[i].card) {
      throw Error(ErrorKind::CardinalityMismatch,
                  "value " + std::to_string(values[i]) + " out of range for " + vars[i].name);
    }
    index = index * vars[i].card + values[i];
  }
  return index;
}

std::vector<std::size_t> decode_tuple(std::span<const Variable> vars, std::size_t index) {
  std::vector<std::size_t> values(vars.size());
  for (std::size_t i = vars.size(); i-- > 0;) {
    values[i] = index % vars[i].card;
    index /= vars[i].card;
  }
  return values;
}

Behavior::Behavior(std::vector<Variable> outcomes, std::vector<Variable> conditions)
    : outcomes_(std::move(outcomes)), conditions_(std::move(conditions)) {
  outcome_count_ = tuple_count(outcomes_);
  condition_count_ = tuple_count(conditions_);
  table_.assign(outcome_count_ * condition_count_, 0.0);
}

Behavior::Behavior(std::vector<Variable> outcomes, std::vector<Variable> conditions,
                   std::vector<double> table)
    : Behavior(std::move(outcomes), std::move(conditions)) {
  if (table.size() != table_.size()) {
    throw Error(ErrorKind::CardinalityMismatch, "table size does not match variable cardinalities");
  }
  table_ = std::move(table);
}

double& Behavior::at(std::size_t outcome_index, std::size_t condition_index) {
  return table_[condition_index * outcome_count_ + outcome_index];
}

double Behavior::at(std::size_t outcome_index, std::size_t condition_index) const {
  return table_[condition_index * outcome_count_ + outcome_index];
}

double Behavior::operator()(std::span<const std::size_t> outcome,
                            std::span<const std::size_t> condition) const {
  return at(encode_tuple(outcomes_, outcome), encode_tuple(conditions_, condition));
}

double Behavior::operator()(std::initializer_list<std::size_t> outcome) const {
  return (*this)(std::span<const std::size_t>(outcome.begin(), outcome.size()));
}

std::optional<std::size_t> Behavior::find_outcome(std::string_view name) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Behavior::find_condition(std::string_view name) const {
  for (std::size_t i = 0; i < conditions_.size(); ++i) {
    if (conditions_[i].name == name) return i;
  }
  return std::nullopt;
}

Behavior Behavior::marginal(const std::vector<std::string>& keep) const {
  std::vector<std::size_t> positions;
  std::vector<Variable> kept;
  for (const auto& name : keep) {
    auto pos = find_outcome(name);
    if (!pos) throw Error(ErrorKind::UnknownParty, "no outcome variable named " + name);
    if (std::find(positions.begin(), positions.end(), *pos) != positions.end()) {
      throw Error(ErrorKind::UnknownParty, "duplicate marginal variable " + name);
    }
    positions.push_back(*pos);
    kept.push_back(outcomes_[*pos]);
  }
  Behavior result(kept, conditions_);
  std::vector<std::size_t> sub(positions.size());
  for (std::size_t c = 0; c < condition_count_; ++c) {
    for (std::size_t o = 0; o < outcome_count_; ++o) {
      const auto values = decode_tuple(outcomes_, o);
      for (std::size_t k = 0; k < positions.size(); ++k) sub[k] = values[positions[k]];
      result.at(encode_tuple(kept, sub), c) += at(o, c);
    }
  }
  return result;
}

double Behavior::probability(const Event& event, std::size_t condition_index) const {
  std::vector<std::vector<char>> allowed(outcomes_.size());
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    allowed[i].assign(outcomes_[i].card, 1);
  }
  for (const auto& [name, values] : event) {
    auto pos = find_outcome(name);
    if (!pos) throw Error(ErrorKind::UnknownAtomReference, "event references unknown variable " + name);
    std::fill(allowed[*pos].begin(), allowed[*pos].end(), 0);
    for (auto v : values) {
      if (v >= outcomes_[*pos].card) {
        throw Error(ErrorKind::UnknownAtomReference, "event value out of range for " + name);
      }
      allowed[*pos][v] = 1;
    }
  }
  double total = 0.0;
  for (std::size_t o = 0; o < outcome_count_; ++o) {
    const auto values = decode_tuple(outcomes_, o);
    bool in = true;
    for (std::size_t i = 0; i < values.size() && in; ++i) in = allowed[i][values[i]] != 0;
    if (in) total += at(o, condition_index);
  }
  return total;
}

void Behavior::validate(double tol) const {
  for (std::size_t c = 0; c < condition_count_; ++c) {
    double sum = 0.0;
    for (std::size_t o = 0; o < outcome_count_; ++o) {
      const double p = at(o, c);
      if (!(p >= -tol)) {
        throw Error(ErrorKind::InvalidOperator, "negative probability in behavior table");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "behavior block " << c << " sums to " << sum;
      throw Error(ErrorKind::InvalidOperator, msg.str());
    }
  }
}

bool Behavior::same_shape(const Behavior& other) const {
  return outcomes_ == other.outcomes_ && conditions_ == other.conditions_;
}

double Behavior::max_abs_difference(const Behavior& other) const {
  if (!same_shape(other)) {
    throw Error(ErrorKind::CardinalityMismatch, "behaviors have different shapes");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    worst = std::max(worst, std::abs(table_[i] - other.table_[i]));
  }
  return worst;
}

}  // namespace latentsplit
