#include "nonmarkov/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "nonmarkov/errors.hpp"
#include "nonmarkov/metrics.hpp"

namespace nonmarkov {

namespace {

// Both the generator and the pulses are linear, so the search evolves the
// difference X = rho1 - rho2 and reads D = Tr|Tr_rest X| / 2 off it.

std::size_t grid_steps(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const double n = std::round(ratio);
  if (n < 0.0 || std::abs(ratio - n) > 1e-6 * std::max(1.0, n)) {
    throw ValidationError(ErrorCode::GridMismatch,
                          std::string(what) + " is not a multiple of the search dt");
  }
  return static_cast<std::size_t>(n);
}

const char* pauli_label(Pauli p) {
  switch (p) {
    case Pauli::X: return "sx";
    case Pauli::Y: return "sy";
    case Pauli::Z: return "sz";
    case Pauli::Plus: return "sp";
    case Pauli::Minus: return "sm";
  }
  return "?";
}

// Per-step maps on the search grid.
class GridStepper {
 public:
  GridStepper(const LindbladModel& model, double t0, double dt, std::size_t steps)
      : prop_(model, dt) {
    if (!prop_.autonomous()) {
      maps_.reserve(steps);
      for (std::size_t k = 0; k < steps; ++k)
        maps_.emplace_back(prop_.step_map(t0 + dt * static_cast<double>(k)));
    }
  }

  // Advances x from grid index k to k + 1.
  void step(ComplexMatrix& x, std::size_t k) {
    if (prop_.autonomous()) {
      prop_.step(x, 0.0);
      return;
    }
    scratch_.resize(x.entries().size());
    maps_[k].multiply(x.entries(), scratch_);
    std::copy(scratch_.begin(), scratch_.end(), x.entries().begin());
  }

 private:
  LiouvillePropagator prop_;
  std::vector<SparseMatrix> maps_;
  std::vector<Complex> scratch_;
};

// Half trace norm of the plant block of a traceless difference operator.
class PlantDistance {
 public:
  PlantDistance(const SubsystemLayout& layout, std::size_t plant) : p_(layout.factor(plant).dim) {
    const std::size_t d = layout.total_dim();
    std::size_t inner = 1;
    for (std::size_t i = plant + 1; i < layout.size(); ++i) inner *= layout.factor(i).dim;
    const std::size_t outer = d / (inner * p_);
    for (std::size_t a = 0; a < p_; ++a)
      for (std::size_t b = 0; b < p_; ++b)
        for (std::size_t o = 0; o < outer; ++o)
          for (std::size_t n = 0; n < inner; ++n) {
            const std::size_t i = (o * p_ + a) * inner + n;
            const std::size_t j = (o * p_ + b) * inner + n;
            pairs_.emplace_back(i * d + j, a * p_ + b);
          }
  }

  double operator()(const ComplexMatrix& x) const {
    std::vector<Complex> block(p_ * p_);
    const auto e = x.entries();
    for (const auto& [src, dst] : pairs_) block[dst] += e[src];
    if (p_ == 2) {
      const double a = 0.5 * (block[0].real() + block[3].real());
      const double r = std::hypot(0.5 * (block[0].real() - block[3].real()),
                                  std::abs(0.5 * (block[1] + std::conj(block[2]))));
      return 0.5 * (std::abs(a + r) + std::abs(a - r));
    }
    ComplexMatrix m(p_, p_, std::move(block));
    m = 0.5 * (m + m.adjoint());
    return 0.5 * trace_norm(m);
  }

 private:
  std::size_t p_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

std::string describe(const std::string& op, double t, double interval, double first_train,
                     std::size_t train_count) {
  std::ostringstream os;
  os << op << '@' << t;
  if (train_count == 0) return os.str();
  os << ";sz@" << first_train;
  if (train_count > 1) os << '+' << interval << 'x' << train_count;
  return os.str();
}

}  // namespace

MeasureResult n_alpha(const LindbladModel& model, const ComplexMatrix& rho1,
                      const ComplexMatrix& rho2, double alpha, const SearchSpec& spec) {
  if (!(alpha >= 0.0) || alpha >= 1.0 - 1e-9) {
    throw ValidationError(ErrorCode::AlphaOutOfRange,
                          "alpha = " + std::to_string(alpha) + " leaves nothing to recover");
  }
  const SubsystemLayout& layout = model.layout();
  if (rho1.rows() != model.dim() || rho2.rows() != model.dim() || !rho1.is_square() ||
      !rho2.is_square()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "states do not match the model");
  }
  if (spec.plant >= layout.size()) {
    throw ValidationError(ErrorCode::InvalidArgument, "plant factor out of range");
  }
  if (!(spec.dt > 0.0) || !(spec.window > 0.0) || !(spec.pulse_time_step > 0.0) ||
      spec.pulse_ops.empty()) {
    throw ValidationError(ErrorCode::InvalidArgument, "degenerate search specification");
  }

  const std::size_t total = grid_steps(spec.window, spec.dt, "window");
  const std::size_t pulse_stride = grid_steps(spec.pulse_time_step, spec.dt, "pulse_time_step");
  if (pulse_stride == 0) {
    throw ValidationError(ErrorCode::InvalidArgument, "pulse_time_step below dt");
  }
  std::vector<std::size_t> intervals;
  for (double v : spec.train_intervals) {
    const std::size_t s = grid_steps(v, spec.dt, "train interval");
    if (s == 0) throw ValidationError(ErrorCode::IntervalNotOnGrid, "train interval below dt");
    intervals.push_back(s);
  }
  std::vector<std::size_t> delays;
  for (double v : spec.train_delays) delays.push_back(grid_steps(v, spec.dt, "train delay"));

  const PlantDistance distance(layout, spec.plant);
  const double alpha_check = distance(rho1 - rho2);
  if (std::abs(alpha_check - alpha) > 1e-8) {
    throw ValidationError(ErrorCode::InvalidArgument,
                          "alpha does not match the plant distance of the pair (" +
                              std::to_string(alpha_check) + ")");
  }

  GridStepper stepper(model, spec.onset_time, spec.dt, total);
  auto time_at = [&](std::size_t k) { return spec.onset_time + spec.dt * static_cast<double>(k); };

  std::vector<ComplexMatrix> base;
  base.reserve(total + 1);
  base.push_back(rho1 - rho2);
  std::vector<double> prefix{distance(base[0])};
  for (std::size_t k = 0; k < total; ++k) {
    ComplexMatrix next = base.back();
    stepper.step(next, k);
    prefix.push_back(std::max(prefix.back(), distance(next)));
    base.push_back(std::move(next));
  }

  MeasureResult out;
  out.alpha = alpha;
  out.search_log.push_back({"none", std::numeric_limits<double>::quiet_NaN(), prefix.back()});
  out.best_distance = prefix.back();

  struct Best {
    Pauli op = Pauli::Z;
    std::size_t pulse_index = 0;
    std::size_t interval = 0;  // 0: no train
    std::size_t first_train = 0;
    bool pulsed = false;
  } best;

  const ComplexMatrix train_u = embed(pauli(Pauli::Z), layout, spec.plant);
  for (std::size_t kp = 0; kp <= total; kp += pulse_stride) {
    for (Pauli op : spec.pulse_ops) {
      const ComplexMatrix u = embed(pauli(op), layout, spec.plant);
      ComplexMatrix y = base[kp];
      apply_unitary(y, u);
      double running = kp > 0 ? prefix[kp - 1] : 0.0;
      std::map<std::size_t, std::pair<ComplexMatrix, double>> branch;
      for (std::size_t k = kp;; ++k) {
        running = std::max(running, distance(y));
        if (std::find(delays.begin(), delays.end(), k - kp) != delays.end()) {
          branch.insert_or_assign(k - kp, std::make_pair(y, running));
        }
        if (k == total) break;
        stepper.step(y, k);
      }

      const std::string label = pauli_label(op);
      const double tp = time_at(kp);
      out.search_log.push_back({label + "@" + [&] {
                                  std::ostringstream os;
                                  os << tp;
                                  return os.str();
                                }(),
                                tp, running});
      if (running > out.best_distance) {
        out.best_distance = running;
        best = {op, kp, 0, 0, true};
      }

      for (std::size_t interval : intervals) {
        for (std::size_t delay : delays) {
          const std::size_t kb = kp + delay;
          if (kb > total) continue;
          const std::size_t first = delay == 0 ? kb + interval : kb;
          if (first > total) continue;
          auto [z, m] = branch.at(delay);
          for (std::size_t k = kb;; ++k) {
            if (k >= first && (k - first) % interval == 0) apply_unitary(z, train_u);
            m = std::max(m, distance(z));
            if (k == total) break;
            stepper.step(z, k);
          }
          const std::size_t count = (total - first) / interval + 1;
          out.search_log.push_back(
              {describe(label, tp, interval * spec.dt, time_at(first), count), tp, m});
          if (m > out.best_distance) {
            out.best_distance = m;
            best = {op, kp, interval, first, true};
          }
        }
      }
    }
  }

  if (best.pulsed) {
    const std::string label = pauli_label(best.op);
    out.argmax_schedule.add({time_at(best.pulse_index), pauli(best.op), spec.plant, label});
    if (best.interval > 0) {
      for (std::size_t k = best.first_train; k <= total; k += best.interval)
        out.argmax_schedule.add({time_at(k), pauli(Pauli::Z), spec.plant, "sz"});
    }
  }
  out.argmax_summary = out.argmax_schedule.summary();
  out.n_alpha = std::clamp((out.best_distance - alpha) / (1.0 - alpha), 0.0, 1.0);
  return out;
}

}  // namespace nonmarkov
