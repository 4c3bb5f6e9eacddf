#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "cga/frequency.hpp"

namespace cga {

using Fitness = std::int64_t;

enum class ObjectiveKind { OneMax, Jump, TruthTable };

/// Number of one-bits.
Fitness onemax(const BitString& x);
/// jump_{n,k}(x): ||x||_1 + k off the gap, n - ||x||_1 inside it.
Fitness jump(const BitString& x, int k);
/// Fitness of jump_{n,k} as a function of ||x||_1.
Fitness jump_of_norm(int n, int k, int norm);
/// n - k < ||x||_1 < n.
bool in_gap(const BitString& x, int k);
/// x is the all-ones string.
bool is_optimum(const BitString& x);

/// Pseudo-Boolean objective with a unique global optimum, maximized by the cGA.
class Objective {
 public:
  virtual ~Objective() = default;

  [[nodiscard]] virtual ObjectiveKind kind() const = 0;
  [[nodiscard]] virtual int dimension() const = 0;
  [[nodiscard]] virtual Fitness evaluate(const BitString& x) const = 0;
  [[nodiscard]] virtual BitString optimum() const = 0;
  [[nodiscard]] virtual nlohmann::json to_json() const = 0;

  /// True when fitness depends on ||x||_1 only; enables fitness_of_norm().
  [[nodiscard]] virtual bool norm_based() const { return false; }
  [[nodiscard]] virtual Fitness fitness_of_norm(int /*norm*/) const;

  [[nodiscard]] virtual bool is_optimum(const BitString& x) const { return x == optimum(); }
  /// Jump size; 0 for objectives without one.
  [[nodiscard]] virtual int jump_size() const { return 0; }
  [[nodiscard]] std::string kind_name() const;
};

class OneMax final : public Objective {
 public:
  explicit OneMax(int n);
  ObjectiveKind kind() const override { return ObjectiveKind::OneMax; }
  int dimension() const override { return n_; }
  Fitness evaluate(const BitString& x) const override { return x.norm1(); }
  BitString optimum() const override { return BitString::ones(n_); }
  nlohmann::json to_json() const override;
  bool norm_based() const override { return true; }
  Fitness fitness_of_norm(int norm) const override { return norm; }
  bool is_optimum(const BitString& x) const override { return x.norm1() == n_; }

 private:
  int n_;
};

class Jump final : public Objective {
 public:
  /// Throws std::invalid_argument unless 1 <= k <= n.
  Jump(int n, int k);
  ObjectiveKind kind() const override { return ObjectiveKind::Jump; }
  int dimension() const override { return n_; }
  Fitness evaluate(const BitString& x) const override;
  BitString optimum() const override { return BitString::ones(n_); }
  nlohmann::json to_json() const override;
  bool norm_based() const override { return true; }
  Fitness fitness_of_norm(int norm) const override { return jump_of_norm(n_, k_, norm); }
  bool is_optimum(const BitString& x) const override { return x.norm1() == n_; }
  int jump_size() const override { return k_; }

 private:
  int n_;
  int k_;
};

/// Arbitrary function given by its value on every x in {0,1}^n, indexed by
/// the integer whose bit i is x_i. Requires a unique maximum.
class TruthTable final : public Objective {
 public:
  TruthTable(int n, std::vector<Fitness> table);
  ObjectiveKind kind() const override { return ObjectiveKind::TruthTable; }
  int dimension() const override { return n_; }
  Fitness evaluate(const BitString& x) const override;
  BitString optimum() const override { return optimum_; }
  nlohmann::json to_json() const override;

 private:
  int n_;
  std::vector<Fitness> table_;
  BitString optimum_;
};

/// Builds from {"kind": "jump", "n": 10, "k": 3} or {"kind": "onemax", "n": 10}.
std::unique_ptr<Objective> objective_from_json(const nlohmann::json& j);
std::unique_ptr<Objective> make_objective(const std::string& kind, int n, int k);

}  // namespace cga
