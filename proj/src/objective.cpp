#include "cga/objective.hpp"

#include <algorithm>
#include <stdexcept>

namespace cga {

Fitness onemax(const BitString& x) { return x.norm1(); }

Fitness jump_of_norm(int n, int k, int norm) {
  if (norm <= n - k || norm == n) return norm + k;
  return n - norm;
}

Fitness jump(const BitString& x, int k) {
  if (k < 1 || k > x.size()) throw std::invalid_argument("jump: k must lie in [1..n]");
  return jump_of_norm(x.size(), k, x.norm1());
}

bool in_gap(const BitString& x, int k) {
  const int norm = x.norm1();
  return x.size() - k < norm && norm < x.size();
}

bool is_optimum(const BitString& x) { return x.norm1() == x.size(); }

Fitness Objective::fitness_of_norm(int) const {
  throw std::logic_error("fitness_of_norm: objective " + kind_name() + " is not norm based");
}

std::string Objective::kind_name() const {
  switch (kind()) {
    case ObjectiveKind::OneMax: return "onemax";
    case ObjectiveKind::Jump: return "jump";
    case ObjectiveKind::TruthTable: return "table";
  }
  return "unknown";
}

OneMax::OneMax(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("OneMax: n must be positive");
}

nlohmann::json OneMax::to_json() const { return {{"kind", "onemax"}, {"n", n_}}; }

Jump::Jump(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw std::invalid_argument("Jump: n must be positive");
  if (k < 1 || k > n)
    throw std::invalid_argument("Jump: k must lie in [1..n], got k=" + std::to_string(k) +
                                " for n=" + std::to_string(n));
}

Fitness Jump::evaluate(const BitString& x) const { return jump_of_norm(n_, k_, x.norm1()); }

nlohmann::json Jump::to_json() const { return {{"kind", "jump"}, {"n", n_}, {"k", k_}}; }

TruthTable::TruthTable(int n, std::vector<Fitness> table) : n_(n), table_(std::move(table)) {
  if (n < 1 || n > 24) throw std::invalid_argument("TruthTable: n must lie in [1..24]");
  if (table_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("TruthTable: table must have 2^n entries");
  const auto best = std::max_element(table_.begin(), table_.end());
  if (std::count(table_.begin(), table_.end(), *best) != 1)
    throw std::invalid_argument("TruthTable: global optimum must be unique");
  const auto code = static_cast<std::size_t>(best - table_.begin());
  optimum_ = BitString(n);
  for (int i = 0; i < n; ++i) optimum_.set(i, (code >> i) & 1U);
}

Fitness TruthTable::evaluate(const BitString& x) const {
  std::size_t code = 0;
  for (int i = 0; i < n_; ++i) code |= static_cast<std::size_t>(x[i]) << i;
  return table_[code];
}

nlohmann::json TruthTable::to_json() const {
  return {{"kind", "table"}, {"n", n_}, {"values", table_}};
}

std::unique_ptr<Objective> make_objective(const std::string& kind, int n, int k) {
  if (kind == "onemax") return std::make_unique<OneMax>(n);
  if (kind == "jump") return std::make_unique<Jump>(n, k);
  throw std::invalid_argument("unknown objective kind '" + kind + "' (expected onemax|jump)");
}

std::unique_ptr<Objective> objective_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  if (kind == "table")
    return std::make_unique<TruthTable>(n, j.at("values").get<std::vector<Fitness>>());
  return make_objective(kind, n, j.value("k", 0));
}

}  // namespace cga
