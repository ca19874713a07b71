#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdp/adversary.hpp"
#include "fdp/instance.hpp"
#include "fdp/speeding.hpp"

namespace fdp {

/// Everything a policy may look at when deciding at time `now`: requests that
/// have arrived, which of them are already on a committed trip, and when each
/// vehicle is next free.
struct SimView {
  Rational now;
  std::shared_ptr<const MetricGraph> graph;
  int k = 1;
  Capacity capacity;
  Rational speed{1};
  const std::vector<Request>* requests = nullptr;
  const std::vector<char>* committed = nullptr;
  const std::vector<Rational>* free_at = nullptr;
};

struct Commit {
  int vehicle = 0;
  Trip trip;  // start >= now; request ids index SimView::requests
};

class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  /// Trips to commit now. Called once per event time, after that time's
  /// arrivals and completions.
  virtual std::vector<Commit> decide(const SimView& view) = 0;
  /// Next time after `view.now` at which the policy needs a decision even if
  /// nothing arrives or completes.
  virtual std::optional<Rational> wakeup(const SimView& view) = 0;
};

/// Source of requests the engine pulls from as its clock advances.
class RequestSource {
 public:
  virtual ~RequestSource() = default;
  [[nodiscard]] virtual std::optional<Time> next_arrival() const = 0;
  virtual std::vector<Request> release_until(Time t) = 0;
  virtual void observe_trip(const Rational& /*at*/, const std::vector<int>& /*served*/) {}
};

/// Replays a fixed instance.
class InstanceSource : public RequestSource {
 public:
  explicit InstanceSource(const Instance& inst) : inst_(inst) {}
  [[nodiscard]] std::optional<Time> next_arrival() const override;
  std::vector<Request> release_until(Time t) override;

 private:
  const Instance& inst_;
  std::size_t next_ = 0;
};

/// Feeds the adaptive capacity adversary and reports trips back to it.
class AdversarySource : public RequestSource {
 public:
  explicit AdversarySource(CapacityAdversary& adv) : adv_(adv) {}
  [[nodiscard]] std::optional<Time> next_arrival() const override { return adv_.next_arrival(); }
  std::vector<Request> release_until(Time t) override { return adv_.release_until(t); }
  void observe_trip(const Rational& at, const std::vector<int>& served) override { adv_.observe_trip(at, served); }

 private:
  CapacityAdversary& adv_;
};

struct SimResult {
  Instance instance;  // the requests actually released
  Schedule schedule;
  FlowReport report;
  std::vector<std::string> trace;
  std::uint64_t trace_hash = 0;
};

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 14695981039346656037ULL);

/// Discrete-event loop. At each event time arrivals come first, then
/// completions, then the policy decides. Commits are checked against the
/// information contract (requests must have arrived and be uncommitted,
/// vehicles free, start not in the past) and raise InvariantViolation
/// otherwise. The finished schedule is validated at `speed`.
SimResult run_online(std::shared_ptr<const MetricGraph> graph, int k, Capacity capacity, RequestSource& source,
                     OnlinePolicy& policy, const Rational& speed = 1);
SimResult run_online(const Instance& inst, OnlinePolicy& policy, const Rational& speed = 1);

/// Offline planner replayed online: the plan for the requests seen so far
/// is recomputed and its trips that start now are committed. Correct for
/// planners whose trips starting at t depend only on arrivals before t.
using Planner = std::function<Schedule(const Instance& prefix)>;

class PlanPolicy : public OnlinePolicy {
 public:
  PlanPolicy(std::string name, Planner planner) : name_(std::move(name)), planner_(std::move(planner)) {}
  [[nodiscard]] std::string name() const override { return name_; }
  std::vector<Commit> decide(const SimView& view) override;
  std::optional<Rational> wakeup(const SimView& view) override;

 private:
  std::string name_;
  Planner planner_;
  std::optional<Rational> next_;
};

std::unique_ptr<OnlinePolicy> tree_policy(const Rational& f, const Rational& eps = 1);
std::unique_ptr<OnlinePolicy> speeding_policy(const Rational& f, const SpeedConfig& cfg);

/// Whenever a vehicle is idle, send it to the oldest waiting request alone
/// (`batch` false) or to the oldest min(c, waiting) requests along an MST
/// doubling tour (`batch` true).
class FifoPolicy : public OnlinePolicy {
 public:
  explicit FifoPolicy(bool batch) : batch_(batch) {}
  [[nodiscard]] std::string name() const override { return batch_ ? "fifo-batch" : "fifo-single"; }
  std::vector<Commit> decide(const SimView& view) override;
  std::optional<Rational> wakeup(const SimView&) override { return std::nullopt; }

 private:
  bool batch_;
};

/// Planner that needs a bound F on the optimum.
using BoundedPlanner = std::function<Schedule(const Instance& prefix, const Rational& f)>;

struct DoublingStage {
  Rational start;  // when the stage began
  Rational f;
  Rational delay;
};

/// Guess-and-double wrapper. The first guess is the smallest depot distance
/// among the requests of the first arrival instant (at least 1). A stage
/// runs the inner planner on delayed arrivals r + D and ends when a request
/// can no longer be served within beta F of its delayed arrival or a trip
/// longer than 2 beta F is about to start; then it waits for the vehicles,
/// sets D <- D + 3 beta F and F <- 2F.
class DoublingPolicy : public OnlinePolicy {
 public:
  DoublingPolicy(std::string inner_name, BoundedPlanner planner, Rational beta)
      : inner_(std::move(inner_name)), planner_(std::move(planner)), beta_(beta) {}
  [[nodiscard]] std::string name() const override { return "doubling(" + inner_ + ")"; }
  std::vector<Commit> decide(const SimView& view) override;
  std::optional<Rational> wakeup(const SimView& view) override;

  [[nodiscard]] const std::vector<DoublingStage>& stages() const { return stages_; }
  [[nodiscard]] Rational final_f() const { return stages_.empty() ? Rational(0) : stages_.back().f; }
  [[nodiscard]] Rational final_delay() const { return stages_.empty() ? Rational(0) : stages_.back().delay; }

 private:
  struct Visible {
    Instance sub;
    std::vector<int> global;  // sub index -> request id
  };
  Visible visible(const SimView& view) const;
  void begin_stage(const SimView& view, const Rational& f, const Rational& delay);

  std::string inner_;
  BoundedPlanner planner_;
  Rational beta_;
  std::vector<DoublingStage> stages_;
  std::vector<int> members_;  // request ids owned by the current stage
  std::size_t seen_ = 0;      // requests already assigned to a stage
  std::optional<Rational> change_at_;
  std::optional<Rational> next_;
};

/// beta of the tree algorithm: 8 for one vehicle, 24 otherwise.
Rational tree_beta(int k);
std::unique_ptr<DoublingPolicy> doubling_tree_policy(int k, const Rational& eps = 1);

}  // namespace fdp
