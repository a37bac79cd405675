#pragma once

// Parameter sweeps over u0, a0 or nx, run on a bounded pool of worker
// threads. Workers own their runs; results flow back through a channel to a
// single consumer that restores parameter order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kdvsat/artifacts.hpp"
#include "kdvsat/config.hpp"
#include "kdvsat/stepper.hpp"

namespace kdvsat {

/// Unbounded multi-producer, single-consumer queue.
template <class T>
class Channel {
 public:
  void push(T value) {
    {
      std::lock_guard lock(mutex_);
      items_.push_back(std::move(value));
    }
    ready_.notify_one();
  }

  T pop() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [this] { return !items_.empty(); });
    T v = std::move(items_.front());
    items_.pop_front();
    return v;
  }

 private:
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<T> items_;
};

enum class SweepAxis { u0, a0, nx };

inline SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "u0") return SweepAxis::u0;
  if (s == "a0") return SweepAxis::a0;
  if (s == "nx") return SweepAxis::nx;
  throw InvalidParameter("axis", "expected u0|a0|nx, got '" + s + "'");
}

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::u0: return "u0";
    case SweepAxis::a0: return "a0";
    case SweepAxis::nx: return "nx";
  }
  return "u0";
}

inline ScenarioConfig with_axis(ScenarioConfig c, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::u0: c.sat.u0 = value; break;
    case SweepAxis::a0: c.a0 = value; break;
    case SweepAxis::nx:
      if (value != std::floor(value)) throw InvalidParameter("nx", "sweep values must be integers");
      c.nx = static_cast<int>(value);
      break;
  }
  return c;
}

struct SweepRow {
  double value = 0.0;
  ScenarioConfig config;
  std::string status = "ok";  // ok | diverged | error
  std::string message;
  RunSummary summary;
};

inline std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepAxis axis,
                                       const std::vector<double>& values, int jobs) {
  if (values.empty()) throw InvalidParameter("values", "sweep needs at least one value");
  std::vector<SweepRow> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows[i].value = values[i];
    rows[i].config = with_axis(base, axis, values[i]);
  }

  struct Done {
    std::size_t index;
    SweepRow row;
  };
  Channel<Done> channel;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow row = rows[i];
      try {
        row.summary = summarize(run(row.config));
      } catch (const DivergenceError& e) {
        row.status = "diverged";
        row.message = e.what();
      } catch (const Error& e) {
        row.status = "error";
        row.message = e.what();
      }
      channel.push({i, std::move(row)});
    }
  };

  const std::size_t n_workers =
      std::clamp<std::size_t>(jobs > 0 ? static_cast<std::size_t>(jobs) : 1, 1, rows.size());
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Done d = channel.pop();
    rows[d.index] = std::move(d.row);
  }
  return rows;
}

inline std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "axis,value,status,nx,nt,u0,a0,final_energy,fitted_rate,tail_rate,mu_formula\n";
  const std::string nan = format_number(std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : rows) {
    const bool ok = r.status == "ok";
    os << to_string(axis) << ',' << format_number(r.value) << ',' << r.status << ','
       << r.config.nx << ',' << r.config.nt << ',' << format_number(r.config.sat.u0) << ','
       << format_number(r.config.a0) << ','
       << (ok ? format_number(r.summary.final_energy) : nan) << ','
       << (ok ? format_number(r.summary.fitted_rate) : nan) << ','
       << (ok ? format_number(r.summary.tail_rate) : nan) << ','
       << (ok && r.summary.mu ? format_number(*r.summary.mu) : nan) << '\n';
  }
  return os.str();
}

}  // namespace kdvsat
