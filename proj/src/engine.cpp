#include "cga/engine.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cga {

std::pair<const BitString&, const BitString&> rank_pair(const BitString& x1, const BitString& x2,
                                                        const Objective& obj) {
  if (obj.evaluate(x1) >= obj.evaluate(x2)) return {x1, x2};
  return {x2, x1};
}

Stepper::Stepper(const FrequencyVector& f, const Objective& obj)
    : obj_(obj), table_(f), optimum_(obj.optimum()), x1_(f.size()), x2_(f.size()) {
  if (obj.dimension() != f.size())
    throw std::invalid_argument("Stepper: objective dimension " + std::to_string(obj.dimension()) +
                                " does not match n=" + std::to_string(f.size()));
  if (obj.norm_based() && optimum_ != BitString::ones(f.size()))
    throw std::logic_error("Stepper: norm-based objectives must have the all-ones optimum");
}

void Stepper::evaluate(const BitString& x, Fitness& fit, bool& opt) const {
  if (obj_.norm_based()) {
    const int norm = x.norm1();
    fit = obj_.fitness_of_norm(norm);
    opt = norm == x.size();
  } else {
    fit = obj_.evaluate(x);
    opt = x == optimum_;
  }
}

void Stepper::advance(FrequencyVector& f, CounterRng& rng, StepInfo* info) {
  sample_into(f, table_, rng, x1_);
  sample_into(f, table_, rng, x2_);
  evaluate(x1_, fit1_, opt1_);
  evaluate(x2_, fit2_, opt2_);
  const bool x1_wins = fit1_ >= fit2_;
  const BitString& y1 = x1_wins ? x1_ : x2_;
  const BitString& y2 = x1_wins ? x2_ : x1_;

  Rational before;
  if (info) {
    *info = StepInfo{};
    info->x1 = x1_;
    info->x2 = x2_;
    info->winner_is_x1 = x1_wins;
    info->fitness1 = fit1_;
    info->fitness2 = fit2_;
    for (int i = 0; i < f.size(); ++i) {
      const bool differ = x1_[i] != x2_[i];
      if (f.at_lower(i)) {
        info->lower_set.push_back(i);
        if (differ) info->flip_set.push_back(i);
      }
      if (f.at_upper(i)) {
        info->upper_set.push_back(i);
        if (differ) info->upper_flip_set.push_back(i);
      }
    }
    before = f.norm1();
    f.apply_update(y1, y2, &info->clamped_low, &info->clamped_high);
    info->delta_norm = f.norm1() - before;
  } else {
    f.apply_update(y1, y2);
  }

  frozen_wrong_ = 0;
  if (f.mode() == BoundaryMode::Free) {
    for (int i = 0; i < f.size(); ++i) {
      if (y1[i] == y2[i]) continue;
      if ((f.at_lower(i) && optimum_[i] == 1) || (f.at_upper(i) && optimum_[i] == 0))
        ++frozen_wrong_;
    }
  }
}

StepResult step(const FrequencyVector& f, const Objective& obj, CounterRng& rng) {
  StepResult r{f, {}};
  Stepper stepper(f, obj);
  stepper.advance(r.next, rng, &r.info);
  return r;
}

namespace {

TraceRow make_trace_row(std::uint64_t t, const FrequencyVector& f, Fitness best) {
  TraceRow row;
  row.t = t;
  row.distance = f.distance();
  for (int i = 0; i < f.size(); ++i) {
    row.lower_count += f.at_lower(i);
    row.upper_count += f.at_upper(i);
  }
  row.best_fitness = best;
  return row;
}

}  // namespace

RunRecord run_from(const FrequencyVector& start, const RunParams& params, const Objective& obj) {
  if (params.cap < 1) throw std::invalid_argument("run: iteration cap must be >= 1");
  if (start.size() != params.n || start.spec().mu() != params.mu ||
      start.mode() != params.boundary_mode)
    throw std::invalid_argument("run: start vector does not match run parameters");

  RunRecord rec;
  rec.params = params;
  rec.kind = obj.kind_name();
  rec.k = obj.jump_size();

  FrequencyVector f = start;
  Stepper stepper(f, obj);
  CounterRng rng(params.seed, params.replicate, 0);
  rec.iterations = params.cap;
  for (std::uint64_t t = 1; t <= params.cap; ++t) {
    stepper.advance(f, rng);
    const bool hit = stepper.x1_optimal() || stepper.x2_optimal();
    const bool frozen = !hit && stepper.newly_frozen_wrong() > 0;
    const bool last = hit || frozen || t == params.cap;
    if (params.trace_stride > 0 && (t % params.trace_stride == 0 || last))
      rec.trace.push_back(
          make_trace_row(t, f, std::max(stepper.fitness1(), stepper.fitness2())));
    if (hit) {
      rec.hit_optimum = true;
      rec.iterations = t;
      break;
    }
    if (frozen) {
      rec.premature_convergence = true;
      rec.iterations = t;
      break;
    }
  }
  rec.evaluations = 2 * rec.iterations;
  return rec;
}

RunRecord run(const RunParams& params, const Objective& obj) {
  const GridSpec spec(params.n, params.mu);
  return run_from(FrequencyVector::uniform(spec, params.boundary_mode), params, obj);
}

void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t)>& body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  if (threads == 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<RunRecord> run_many(const RunParams& params, const Objective& obj,
                                std::uint64_t replicates, unsigned threads) {
  if (replicates < 1) throw std::invalid_argument("run_many: replicates must be >= 1");
  const GridSpec spec(params.n, params.mu);
  const FrequencyVector start = FrequencyVector::uniform(spec, params.boundary_mode);
  std::vector<RunRecord> out(replicates);
  parallel_for(replicates, threads, [&](std::uint64_t r) {
    RunParams p = params;
    p.replicate = r;
    out[r] = run_from(start, p, obj);
  });
  return out;
}

}  // namespace cga
