#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace kslab {

enum class RunOutcome { Completed, Stopped, DtUnderflow, NumericalFailure };

const char* to_string(RunOutcome outcome);

// Shared adaptive-stepping knobs. Zeros for dt_max / dt_init mean
// "derive from t_end" (1e-2 t_end and 1e-6 t_end respectively).
struct StepControls {
  double dt_min = 1e-12;
  double dt_max = 0.0;
  double dt_init = 0.0;
  double target_rel_change = 0.10;   // controller aims at 10% peak change
  double growth_reject_factor = 1.5; // reject a step growing linf by > 50%
  double clip_mass_fraction = 1e-6;  // reject if clipped mass exceeds this * m0
  double cfl_safety = 0.9;

  StepControls resolved(double t_end) const;
};

// One accepted step, as seen by detection heuristics.
struct StepPoint {
  double t = 0.0;
  double dt = 0.0;
  double linf = 0.0;
  double m = 0.0;
  bool at_dt_min = false;
};

// Ring buffer over the most recent accepted steps; index 0 is the oldest
// retained point.
class StepHistory {
 public:
  explicit StepHistory(std::size_t capacity = 64);
  void push(const StepPoint& p);
  std::size_t size() const { return count_; }
  std::size_t capacity() const { return buf_.size(); }
  const StepPoint& operator[](std::size_t i) const;
  const StepPoint& back() const;

 private:
  std::vector<StepPoint> buf_;
  std::size_t head_ = 0;  // next write slot
  std::size_t count_ = 0;
};

// Proportional step-size update: factor 0.9 * target / observed, clamped to
// [0.2, 2.0]. The caller clamps the result to [dt_min, dt_max].
double controller_next_dt(double dt, double rel_change,
                          const StepControls& controls);

// Solver-agnostic state snapshot: both representations are always present
// (the primitive solver derives w, the mass solver derives u).
struct Snapshot {
  double t = 0.0;
  double dt = 0.0;
  double m = 0.0;
  double linf_u = 0.0;
  std::vector<double> u;
  std::vector<double> w;
};

struct RunRecord {
  RunOutcome outcome = RunOutcome::Completed;
  std::string detail;  // stop reason, failure message, or empty
  double t_final = 0.0;
  double peak_linf = 0.0;
  std::uint64_t steps_accepted = 0;
  std::uint64_t steps_rejected = 0;
  std::vector<Snapshot> snapshots;   // at the configured interval, plus t = 0 and the end
  std::vector<StepPoint> series;     // every accepted step
};

}  // namespace kslab
