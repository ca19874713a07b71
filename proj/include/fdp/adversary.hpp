#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fdp/instance.hpp"
#include "fdp/metric.hpp"

namespace fdp {

/// The gadget's depot edges have length 1/2; every length and time of the
/// gadget families is stored in half units.
inline constexpr Length kGadgetScale = 2;

enum class Lean { kLeft, kRight };

Lean parse_lean(char c);
char lean_char(Lean s);
Lean opposite(Lean s);

/// Graph with o, vertices v^{is}_j for i in [0, p], s in {L, R}, j in [7],
/// where v^{0L}_j = v^{0R}_j for j != 4. Depot edges (o, v^{is}_1) and
/// (o, v^{is}_7) of length 1/2, path edges of length 1.
class BaseGadget {
 public:
  explicit BaseGadget(int p);

  [[nodiscard]] int p() const { return p_; }
  [[nodiscard]] const std::shared_ptr<const MetricGraph>& graph() const { return graph_; }
  [[nodiscard]] Vertex vertex(int i, Lean s, int j) const;
  /// P^{is}: v^{is}_1, ..., v^{is}_7.
  [[nodiscard]] std::vector<Vertex> path_p(int i, Lean s) const;
  /// Q^{is} for i >= 1: v^{is}_1, v^{is}_2, v^{is}_3, v^{(i-1)s}_4, v^{is}_5, v^{is}_6, v^{is}_7.
  [[nodiscard]] std::vector<Vertex> path_q(int i, Lean s) const;
  /// L = 7(2p + 1), in half units.
  [[nodiscard]] Time horizon() const;
  /// b_0 = 0 and b_i = 7(2i - 1), in half units.
  [[nodiscard]] Time segment_start(int i) const;
  /// Requests of R_s sorted by arrival: segment i brings v^{is'}_j for both
  /// sides, except that segment p only has the v_4 of side `lean`.
  [[nodiscard]] std::vector<Request> requests(Lean lean) const;
  /// Per segment: Q^{i,opp} then P^{i,lean} back to back, P^{0,lean} alone
  /// in segment 0. Request ids refer to requests(lean).
  [[nodiscard]] Schedule solution(Lean lean) const;

 private:
  int p_;
  std::shared_ptr<const MetricGraph> graph_;
  std::vector<Vertex> ids_;  // (i, s, j) -> vertex
};

Instance base_instance(int p, Lean lean);

struct TourCertificate {
  std::vector<Vertex> walk;  // closed at the depot, may revisit it
  Length length = 0;         // half units
  Length lower_bound = 0;    // counting bound, half units
};

/// Tour through every vertex but v^{p,opp}_4 built from the depot edges, the
/// paths P^{i,lean} and Q^{i,opp}. Throws InvariantViolation unless its
/// length is 7(2p+1) and equals the counting lower bound.
TourCertificate certify_base_tour(int p, Lean lean);

/// Base gadget plus p legs (o, u_j) of length 1/2; p phases of length L + p.
/// Phase h copies R_{s_h} and then asks for u_1, ..., u_p one unit apart.
Instance legs_instance(int p, const std::vector<Lean>& leans);

/// p with 1 + eps = p / (p - 1/20), i.e. p = (1 + eps) / (20 eps). Throws
/// InputError unless it is an integer >= 2.
int speeding_p(const Rational& eps);
/// p copies of the gadget glued at o; phase h of length L copies R_{s_h}
/// onto copy h. `leans` empty means all left.
Instance speeding_instance(const Rational& eps, std::vector<Lean> leans = {});

/// gbar's edges get length 1, plus nbar legs (o, u_i) of length nbar.
/// nbar^2 phases of length (2 nbar + 1) nbar: every non-depot vertex of gbar
/// at the phase start, then u_i at b_h + (2i - 1) nbar.
Instance hamiltonian_instance(const MetricGraph& gbar);

/// nbar copies of gbar glued at its depot; phase h of length `tour_bound`
/// asks for every non-depot vertex of copy h at its start.
Instance copies_instance(const MetricGraph& gbar, Length tour_bound, Capacity capacity = std::nullopt);

/// Adaptive capacity-2 adversary on the tree o-v1, v1-v2, v1-v3, o-v4 (unit
/// lengths) with one vehicle. Phase h starts at b_h = 10(h-1)p. The request
/// at v* (time b_h + 8p - 4) is v2 when the trip serving (b_h, v1) also
/// served a v2 request and started before then, otherwise v3; v2 when
/// (b_h, v1) was not served in time.
class CapacityAdversary {
 public:
  explicit CapacityAdversary(int p);

  static constexpr Vertex kV1 = 1, kV2 = 2, kV3 = 3, kV4 = 4;

  [[nodiscard]] int p() const { return p_; }
  [[nodiscard]] const std::shared_ptr<const MetricGraph>& graph() const { return graph_; }
  /// Arrival time of the next unreleased request, if any.
  [[nodiscard]] std::optional<Time> next_arrival() const;
  /// Releases every request with arrival <= t, in index order.
  std::vector<Request> release_until(Time t);
  /// Reports a trip committed at `at` with the vertices of its requests.
  void observe_trip(const Rational& at, const std::vector<int>& served);
  /// Requests released so far; ids are positions in this list.
  [[nodiscard]] const std::vector<Request>& released() const { return released_; }
  /// v* per decided phase.
  [[nodiscard]] const std::vector<Vertex>& choices() const { return choices_; }
  /// Instance over every request once all phases are released.
  [[nodiscard]] Instance realized() const;

  [[nodiscard]] Time phase_start(int h) const { return static_cast<Time>(10) * (h - 1) * p_; }
  [[nodiscard]] int requests_per_phase() const { return 6 * p_; }

 private:
  struct Slot {
    Time arrival;
    Vertex vertex;  // -1: the adaptive v* request
  };

  int p_;
  std::shared_ptr<const MetricGraph> graph_;
  std::vector<Slot> plan_;
  std::size_t next_ = 0;
  std::vector<Request> released_;
  std::vector<Vertex> choices_;
  std::vector<int> v1_request_;  // id of (b_h, v1) per phase, -1 before release
  std::vector<std::optional<bool>> v1_paired_with_v2_;
};

/// The clairvoyant schedule for a realized capacity instance whose v* per
/// phase is `choices`: max flow at most 16.
Schedule capacity_reference_schedule(int p, const std::vector<Vertex>& choices);
/// Request list of the capacity instance for fixed v* choices.
std::vector<Request> capacity_requests(int p, const std::vector<Vertex>& choices);

}  // namespace fdp
