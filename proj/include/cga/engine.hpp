#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <optional>
#include <utility>
#include <vector>

#include "cga/frequency.hpp"
#include "cga/objective.hpp"
#include "cga/random.hpp"
#include "cga/rational.hpp"

namespace cga {

/// Everything that happened in one cGA iteration.
struct StepInfo {
  BitString x1, x2;  // in sampling order
  bool winner_is_x1 = true;
  Fitness fitness1 = 0, fitness2 = 0;
  std::vector<int> lower_set;       // L: f_i at the lower boundary before the step
  std::vector<int> flip_set;        // M: i in L with x1_i != x2_i
  std::vector<int> upper_set;       // f_i at the upper boundary before the step
  std::vector<int> upper_flip_set;  // i in upper_set with x1_i != x2_i
  std::vector<int> clamped_low, clamped_high;
  Rational delta_norm;  // ||f_{t+1}||_1 - ||f_t||_1
};

/// (y1, y2): the winner first; ties go to x1.
std::pair<const BitString&, const BitString&> rank_pair(const BitString& x1, const BitString& x2,
                                                        const Objective& obj);

struct StepResult {
  FrequencyVector next;
  StepInfo info;
};

/// One iteration: sample x1 then x2, rank, update, cap.
StepResult step(const FrequencyVector& f, const Objective& obj, CounterRng& rng);

/// Reusable buffers for the hot loop.
class Stepper {
 public:
  Stepper(const FrequencyVector& f, const Objective& obj);

  /// Advances f in place. Fills `info` when non-null.
  void advance(FrequencyVector& f, CounterRng& rng, StepInfo* info = nullptr);

  [[nodiscard]] const BitString& x1() const { return x1_; }
  [[nodiscard]] const BitString& x2() const { return x2_; }
  [[nodiscard]] Fitness fitness1() const { return fit1_; }
  [[nodiscard]] Fitness fitness2() const { return fit2_; }
  [[nodiscard]] bool x1_optimal() const { return opt1_; }
  [[nodiscard]] bool x2_optimal() const { return opt2_; }
  /// Number of coordinates that newly reached a frequency opposite to the
  /// optimum bit and can never move again (Free mode only).
  [[nodiscard]] int newly_frozen_wrong() const { return frozen_wrong_; }

 private:
  void evaluate(const BitString& x, Fitness& fit, bool& opt) const;

  const Objective& obj_;
  SamplingTable table_;
  BitString optimum_;
  BitString x1_, x2_;
  Fitness fit1_ = 0, fit2_ = 0;
  bool opt1_ = false, opt2_ = false;
  int frozen_wrong_ = 0;
};

struct RunParams {
  int n = 0;
  int mu = 0;
  BoundaryMode boundary_mode = BoundaryMode::Bounded;
  std::uint64_t cap = 0;       // iteration cap, >= 1
  std::uint64_t seed = 0;      // master seed
  std::uint64_t replicate = 0;
  std::uint64_t trace_stride = 0;  // 0: no trace
};

struct TraceRow {
  std::uint64_t t = 0;
  Rational distance;  // D_t after iteration t
  int lower_count = 0;
  int upper_count = 0;
  Fitness best_fitness = 0;
};

struct RunRecord {
  RunParams params;
  std::string kind;  // objective kind name
  int k = 0;         // jump size, 0 for onemax
  bool hit_optimum = false;
  std::uint64_t iterations = 0;
  std::uint64_t evaluations = 0;
  bool premature_convergence = false;
  std::vector<TraceRow> trace;

  friend bool operator==(const RunRecord& a, const RunRecord& b) {
    return a.params.n == b.params.n && a.params.mu == b.params.mu &&
           a.params.boundary_mode == b.params.boundary_mode && a.params.cap == b.params.cap &&
           a.params.seed == b.params.seed && a.params.replicate == b.params.replicate &&
           a.kind == b.kind && a.k == b.k && a.hit_optimum == b.hit_optimum &&
           a.iterations == b.iterations && a.evaluations == b.evaluations &&
           a.premature_convergence == b.premature_convergence;
  }
};

/// Runs the cGA from f = 1/2 until an iteration samples the optimum, the cap
/// is reached, or (Free mode) a frequency freezes at the wrong value.
RunRecord run(const RunParams& params, const Objective& obj);

/// As run(), from an arbitrary starting vector.
RunRecord run_from(const FrequencyVector& start, const RunParams& params, const Objective& obj);

/// Replicates 0..replicates-1 of `params` (params.replicate is ignored),
/// returned in replicate order. threads == 0 picks hardware concurrency.
std::vector<RunRecord> run_many(const RunParams& params, const Objective& obj,
                                std::uint64_t replicates, unsigned threads = 1);

/// Runs body(i) for i in [0, count) on a small pool.
void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t)>& body);

}  // namespace cga
