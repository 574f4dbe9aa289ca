#include "kslab/stepping.hpp"

#include <algorithm>

#include "kslab/errors.hpp"

namespace kslab {

const char* to_string(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::Completed: return "completed";
    case RunOutcome::Stopped: return "stopped";
    case RunOutcome::DtUnderflow: return "dt_underflow";
    case RunOutcome::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

StepControls StepControls::resolved(double t_end) const {
  StepControls c = *this;
  if (c.dt_max <= 0.0) c.dt_max = 1e-2 * t_end;
  if (c.dt_init <= 0.0) c.dt_init = 1e-6 * t_end;
  if (c.dt_max > 0.0) c.dt_max = std::max(c.dt_max, c.dt_min);
  if (c.dt_init > 0.0) c.dt_init = std::clamp(c.dt_init, c.dt_min, c.dt_max);
  return c;
}

StepHistory::StepHistory(std::size_t capacity) : buf_(capacity) {
  if (capacity == 0) throw DimensionError("StepHistory: capacity must be positive");
}

void StepHistory::push(const StepPoint& p) {
  buf_[head_] = p;
  head_ = (head_ + 1) % buf_.size();
  if (count_ < buf_.size()) ++count_;
}

const StepPoint& StepHistory::operator[](std::size_t i) const {
  if (i >= count_) throw DimensionError("StepHistory: index out of range");
  const std::size_t oldest = (head_ + buf_.size() - count_) % buf_.size();
  return buf_[(oldest + i) % buf_.size()];
}

const StepPoint& StepHistory::back() const {
  if (count_ == 0) throw DimensionError("StepHistory: empty");
  return buf_[(head_ + buf_.size() - 1) % buf_.size()];
}

double controller_next_dt(double dt, double rel_change,
                          const StepControls& controls) {
  double factor = 2.0;
  if (rel_change > 0.0)
    factor = std::clamp(0.9 * controls.target_rel_change / rel_change, 0.2, 2.0);
  return dt * factor;
}

}  // namespace kslab
