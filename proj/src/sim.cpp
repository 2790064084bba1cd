// Copyright 2026 The ewsn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ewsn/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>
#include <vector>

#include "ewsn/errors.hpp"
#include "json.hpp"
#include "rng.hpp"

namespace ewsn {

namespace {

enum class EventKind : std::uint8_t { kHarvest, kBroadcast };

struct Event {
  double time;
  std::uint32_t sensor;
  EventKind kind;
  std::uint32_t generation;  // validity stamp for broadcast clocks
};

struct LaterTime {
  bool operator()(const Event& a, const Event& b) const {
    return a.time > b.time;
  }
};

// Continuous-time evolution of the N gated birth-death sensors on a binary
// heap of exponential clocks. Broadcast clocks are stamped with a
// per-sensor generation and lazily dropped when stale. Exact-time ties are
// a zero-probability event under CTMC semantics; they resolve in heap pop
// order.
class NetworkEngine {
 public:
  explicit NetworkEngine(const ModelParams& p)
      : params_(p),
        batteries_(static_cast<std::size_t>(p.n_sensors)),
        broadcast_gen_(static_cast<std::size_t>(p.n_sensors)),
        heard_(static_cast<std::size_t>(p.n_sensors)) {}

  // Warm up, inject one client, and return its retrieval time.
  double run_retrieval(int samples_needed, double warmup, ArrivalMode mode,
                       detail::Xoshiro256pp& rng) {
    reset(rng);
    double inject = warmup;
    if (mode == ArrivalMode::kPoissonArrivals) {
      inject += rng.exponential(*params_.arrival_rate);
    }
    bool measuring = false;
    int distinct = 0;
    while (true) {
      const Event ev = pop();
      if (!measuring && ev.time >= inject) {
        measuring = true;
        std::fill(heard_.begin(), heard_.end(), std::uint8_t{0});
      }
      const bool broadcast = apply(ev, rng);
      if (broadcast && measuring && !heard_[ev.sensor]) {
        heard_[ev.sensor] = 1;
        if (++distinct == samples_needed) return ev.time - inject;
      }
    }
  }

  // Time-average the tagged sensor 0's battery level over
  // [warmup, warmup + horizon); adds time per level into `occupancy`.
  void run_occupancy(double warmup, double horizon,
                     detail::Xoshiro256pp& rng, std::vector<double>& occupancy) {
    reset(rng);
    const double start = warmup;
    const double end = warmup + horizon;
    double cursor = start;
    while (true) {
      const Event ev = pop();
      if (ev.time >= end) {
        occupancy[static_cast<std::size_t>(batteries_[0])] += end - cursor;
        return;
      }
      if (ev.time > cursor) {
        occupancy[static_cast<std::size_t>(batteries_[0])] += ev.time - cursor;
        cursor = ev.time;
      }
      apply(ev, rng);
    }
  }

 private:
  void reset(detail::Xoshiro256pp& rng) {
    heap_.clear();
    heap_.reserve(static_cast<std::size_t>(params_.n_sensors) + 2);
    std::fill(batteries_.begin(), batteries_.end(), 0);
    std::fill(broadcast_gen_.begin(), broadcast_gen_.end(), 0u);
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(params_.n_sensors);
         ++i) {
      push({rng.exponential(params_.harvest_rate), i, EventKind::kHarvest, 0});
    }
  }

  // Applies one event; returns true for a live broadcast.
  bool apply(const Event& ev, detail::Xoshiro256pp& rng) {
    int& battery = batteries_[ev.sensor];
    if (ev.kind == EventKind::kHarvest) {
      if (battery < params_.battery_cap) {
        ++battery;
        if (battery == 1) {
          push({ev.time + rng.exponential(params_.per_sensor_rate()), ev.sensor,
                EventKind::kBroadcast, broadcast_gen_[ev.sensor]});
        }
      }
      // At full capacity the harvested unit is discarded.
      push({ev.time + rng.exponential(params_.harvest_rate), ev.sensor,
            EventKind::kHarvest, 0});
      return false;
    }
    if (ev.generation != broadcast_gen_[ev.sensor]) return false;  // stale
    if (battery < 1 || battery > params_.battery_cap) {
      throw NumericError("simulate: battery bound violated (level " +
                         std::to_string(battery) + ")");
    }
    --battery;
    if (battery > 0) {
      push({ev.time + rng.exponential(params_.per_sensor_rate()), ev.sensor,
            EventKind::kBroadcast, ev.generation});
    } else {
      ++broadcast_gen_[ev.sensor];
    }
    return true;
  }

  void push(Event e) {
    heap_.push_back(e);
    std::push_heap(heap_.begin(), heap_.end(), LaterTime{});
  }

  Event pop() {
    std::pop_heap(heap_.begin(), heap_.end(), LaterTime{});
    const Event e = heap_.back();
    heap_.pop_back();
    return e;
  }

  ModelParams params_;
  std::vector<int> batteries_;
  std::vector<std::uint32_t> broadcast_gen_;
  std::vector<std::uint8_t> heard_;
  std::vector<Event> heap_;
};

int resolve_threads(int requested, std::int64_t work_items) {
  int t = requested > 0
              ? requested
              : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (static_cast<std::int64_t>(t) > work_items) {
    t = static_cast<int>(work_items);
  }
  return t;
}

// Runs job(first, last) over [0, count) split into contiguous chunks.
template <typename Job>
void parallel_chunks(std::int64_t count, int threads, Job&& job) {
  if (threads <= 1) {
    job(std::int64_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, w, lo, hi] {
      try {
        job(lo, hi);
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

const char* arrival_mode_name(ArrivalMode m) {
  return m == ArrivalMode::kPastaInject ? "pasta_inject" : "poisson_arrivals";
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (samples_needed < 1 || samples_needed > params.n_sensors) {
    throw ValidationError(
        "SimConfig: samples_needed must satisfy 1 <= s <= n_sensors, got s=" +
        std::to_string(samples_needed) + ", n_sensors=" +
        std::to_string(params.n_sensors));
  }
  if (replications < 1) {
    throw ValidationError("SimConfig: replications must be >= 1");
  }
  if (warmup_time >= 0.0 && !std::isfinite(warmup_time)) {
    throw ValidationError("SimConfig: warmup_time must be finite");
  }
  if (arrival_mode == ArrivalMode::kPoissonArrivals && !params.arrival_rate) {
    throw ValidationError(
        "SimConfig: poisson_arrivals mode needs params.arrival_rate");
  }
}

double default_warmup(const ModelParams& p) {
  return 100.0 * std::max(p.n_sensors / p.broadcast_rate, 1.0 / p.harvest_rate);
}

double SimResult::empirical_cdf(double t) const {
  const auto it =
      std::upper_bound(sorted_samples.begin(), sorted_samples.end(), t);
  return static_cast<double>(it - sorted_samples.begin()) /
         static_cast<double>(sorted_samples.size());
}

SimResult simulate(const SimConfig& c) {
  c.validate();
  SimConfig resolved = c;
  if (resolved.warmup_time < 0.0) {
    resolved.warmup_time = default_warmup(c.params);
  }

  SimResult out;
  out.ws_samples.resize(static_cast<std::size_t>(c.replications));
  const int threads = resolve_threads(c.threads, c.replications);
  parallel_chunks(c.replications, threads, [&](std::int64_t lo, std::int64_t hi) {
    NetworkEngine engine(resolved.params);
    for (std::int64_t r = lo; r < hi; ++r) {
      detail::Xoshiro256pp rng(resolved.seed, static_cast<std::uint64_t>(r));
      out.ws_samples[static_cast<std::size_t>(r)] =
          engine.run_retrieval(resolved.samples_needed, resolved.warmup_time,
                               resolved.arrival_mode, rng);
    }
  });

  out.sorted_samples = out.ws_samples;
  std::sort(out.sorted_samples.begin(), out.sorted_samples.end());
  out.replications = c.replications;
  out.seed_used = c.seed;
  out.config = resolved;

  double sum = 0.0;
  for (double x : out.ws_samples) sum += x;
  out.mean = sum / static_cast<double>(out.replications);
  if (out.replications > 1) {
    double ss = 0.0;
    for (double x : out.ws_samples) {
      const double d = x - out.mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(out.replications - 1));
    out.ci_halfwidth_95 =
        1.959964 * sd / std::sqrt(static_cast<double>(out.replications));
  }
  return out;
}

double ks_distance(const SimResult& r, const RetrievalQuery& q) {
  q.validate();
  if (!(r.config.params == q.params)) {
    throw ValidationError(
        "ks_distance: simulation was run with different network parameters");
  }
  if (r.sorted_samples.empty()) {
    throw ValidationError("ks_distance: empty sample set");
  }
  const auto n = static_cast<double>(r.sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < r.sorted_samples.size(); ++i) {
    const double f = retrieval_cdf(q, r.sorted_samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(f - lo), std::abs(hi - f)});
  }
  return d;
}

OccupancyEstimate empirical_battery_distribution(const SimConfig& c) {
  c.validate();
  SimConfig resolved = c;
  if (resolved.warmup_time < 0.0) {
    resolved.warmup_time = default_warmup(c.params);
  }
  const auto levels = static_cast<std::size_t>(c.params.battery_cap) + 1;

  // Per-segment accumulators keep the merge order fixed, so the estimate
  // does not depend on the thread count.
  std::vector<std::vector<double>> per_segment(
      static_cast<std::size_t>(c.replications),
      std::vector<double>(levels, 0.0));
  const int threads = resolve_threads(c.threads, c.replications);
  parallel_chunks(c.replications, threads, [&](std::int64_t lo, std::int64_t hi) {
    NetworkEngine engine(resolved.params);
    for (std::int64_t r = lo; r < hi; ++r) {
      detail::Xoshiro256pp rng(resolved.seed, static_cast<std::uint64_t>(r));
      engine.run_occupancy(resolved.warmup_time, resolved.warmup_time, rng,
                           per_segment[static_cast<std::size_t>(r)]);
    }
  });

  std::vector<double> occupancy(levels, 0.0);
  for (const auto& seg : per_segment) {
    for (std::size_t i = 0; i < levels; ++i) occupancy[i] += seg[i];
  }
  double total = 0.0;
  for (double x : occupancy) total += x;

  OccupancyEstimate est;
  est.empirical.probs.assign(levels, 0.0);
  for (std::size_t i = 0; i < levels; ++i) {
    est.empirical.probs[i] = occupancy[i] / total;
  }
  const SteadyState analytic = steady_state(c.params);
  double tv = 0.0;
  for (std::size_t i = 0; i < levels; ++i) {
    tv += std::abs(est.empirical.probs[i] - analytic.probs[i]);
  }
  est.tv_distance = 0.5 * tv;
  return est;
}

void write_replicates_csv(const SimResult& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("write_replicates_csv: cannot open '" + path + "' for writing");
  }
  out << "replicate_index,ws_time\n";
  char line[64];
  for (std::size_t i = 0; i < r.ws_samples.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.12g\n", i, r.ws_samples[i]);
    out << line;
  }
  if (!out.good()) {
    throw IoError("write_replicates_csv: write to '" + path + "' failed");
  }
}

std::string summary_json(const SimResult& r) {
  nlohmann::ordered_json j;
  j["mean"] = r.mean;
  j["ci_halfwidth_95"] = r.ci_halfwidth_95;
  j["seed"] = r.seed_used;
  j["replications"] = r.replications;
  nlohmann::ordered_json cfg;
  cfg["n_sensors"] = r.config.params.n_sensors;
  cfg["battery_cap"] = r.config.params.battery_cap;
  cfg["harvest_rate"] = r.config.params.harvest_rate;
  cfg["broadcast_rate"] = r.config.params.broadcast_rate;
  if (r.config.params.arrival_rate) {
    cfg["arrival_rate"] = *r.config.params.arrival_rate;
  } else {
    cfg["arrival_rate"] = nullptr;
  }
  cfg["samples_needed"] = r.config.samples_needed;
  cfg["warmup_time"] = r.config.warmup_time;
  cfg["arrival_mode"] = arrival_mode_name(r.config.arrival_mode);
  cfg["threads"] = r.config.threads;
  j["config"] = cfg;
  return j.dump(2);
}

}  // namespace ewsn
