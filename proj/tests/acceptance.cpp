// Acceptance suite: one line per criterion, PASS / FAIL / INCONCLUSIVE.
// Usage: cgalab_acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cga/verifiers.hpp"

using namespace cga;

namespace {

struct Criterion {
  int number;
  std::string claim_id;  // empty for the determinism check
  std::string title;
  double limit_seconds;  // 0: no runtime limit
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "L2", "binomial tail below C(n,k)p^k, n<=20", 5},
      {2, "L3", "sampling concentration tails", 30},
      {3, "L4", "boundary flip law and pathwise capping", 60},
      {4, "L5", "Pr[norms differ] >= 1/16", 60},
      {5, "L1", "no optimum samples in early iterations", 120},
      {6, "sleepy", "sleepy bit count at n=256", 60},
      {7, "opt-bound", "prod f_i <= exp(-D(f)), n=50", 5},
      {8, "T1-drift", "drift of Y at most 2", 600},
      {9, "T1-scaling", "median runtime shape over k", 0},
      {10, "CE-freq", "first-frequency increase from two starts", 10},
      {11, "CE-drift", "distance drift: jump vs near-boundary onemax", 300},
      {12, "L6", "(1+1) EA dominance", 60},
      {13, "engine-xval", "engine against exact oracles", 300},
      {14, "", "byte-identical raw CSV under a fixed seed", 0},
  };
  return list;
}

const std::set<std::string> kStatistical = {"L4", "L1", "sleepy", "T1-drift",
                                            "T1-scaling", "CE-drift", "engine-xval"};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_line(const char* status, const Criterion& c, const std::string& evidence, double secs) {
  std::printf("%-12s [%2d] %-11s %s | %s | %.1f s\n", status, c.number,
              c.claim_id.empty() ? "determinism" : c.claim_id.c_str(), c.title.c_str(),
              evidence.c_str(), secs);
  std::fflush(stdout);
}

std::string evidence_of(const VerificationReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "statistic=%.6g threshold=%.6g", r.statistic, r.threshold);
  std::string s = buf;
  if (r.mode == VerificationMode::Statistical) {
    std::snprintf(buf, sizeof buf, " se=%.3g attempts=%d", r.std_error, r.attempts);
    s += buf;
  }
  if (r.claim_id == "T1-scaling") {
    s += " medians=";
    for (const auto& g : r.details["groups"])
      s += "k" + std::to_string(g["k"].get<int>()) + ":" +
           std::to_string(g["median_iterations"].get<std::int64_t>()) +
           (g["median_censored"].get<bool>() ? "(censored)" : "") + " ";
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  VerifyOptions opt;
  opt.seed = 1;
  opt.threads = 0;

  std::map<std::string, std::string> raw;
  int passed = 0, failed = 0, inconclusive = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    const auto start = std::chrono::steady_clock::now();

    if (c.claim_id.empty()) {
      std::vector<std::string> mismatched;
      for (const auto& [id, first] : raw) {
        const auto again = run_verifier(id, opt);
        if (first.empty() || again.raw_csv != first) mismatched.push_back(id);
      }
      const double secs = seconds_since(start);
      std::string evidence = std::to_string(raw.size()) + " statistical criteria re-run";
      for (const auto& id : mismatched) evidence += "; differs: " + id;
      const bool ok = !raw.empty() && mismatched.empty();
      print_line(ok ? "PASS" : "FAIL", c, evidence, secs);
      (ok ? passed : failed)++;
      continue;
    }

    VerificationReport rep;
    try {
      rep = run_verifier(c.claim_id, opt);
    } catch (const std::exception& e) {
      print_line("FAIL", c, std::string("error: ") + e.what(), seconds_since(start));
      ++failed;
      continue;
    }
    const double secs = seconds_since(start);
    if (kStatistical.count(c.claim_id)) raw[c.claim_id] = rep.raw_csv;

    std::string evidence = evidence_of(rep);
    const bool in_time = c.limit_seconds <= 0 || secs < c.limit_seconds;
    if (!in_time) evidence += " (runtime limit " + std::to_string(c.limit_seconds) + " s exceeded)";
    if (rep.inconclusive) {
      print_line("INCONCLUSIVE", c, evidence, secs);
      ++inconclusive;
    } else if (rep.passed && in_time) {
      print_line("PASS", c, evidence, secs);
      ++passed;
    } else {
      print_line("FAIL", c, evidence, secs);
      ++failed;
    }
  }
  std::printf("summary: %d passed, %d failed, %d inconclusive\n", passed, failed, inconclusive);
  return failed == 0 ? 0 : 1;
}
