#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ebmc/errors.hpp"
#include "ebmc/instance.hpp"

namespace ebmc {

enum class ConstraintSense { Le, Ge };

// sum(x_terms) + sum(y_terms) <sense> rhs, with y the saturated coverage
struct LinearConstraint {
  std::vector<std::pair<int, Weight>> x_terms;  // (lake, coefficient)
  std::vector<std::pair<int, Weight>> y_terms;  // (arc index, coefficient)
  ConstraintSense sense = ConstraintSense::Le;
  Weight rhs = 0;
};

inline Weight constraint_lhs(const Instance& inst, const LinearConstraint& con,
                             const StrategyProfile& p) {
  Weight lhs = 0;
  for (auto [l, a] : con.x_terms) lhs += a * (p.x[l] ? 1 : 0);
  for (auto [e, b] : con.y_terms) {
    const Arc& arc = inst.arcs()[e];
    lhs += b * ((p.x[arc.from] || p.x[arc.to]) ? 1 : 0);
  }
  return lhs;
}

inline bool satisfies(const Instance& inst, const LinearConstraint& con,
                      const StrategyProfile& p) {
  const Weight lhs = constraint_lhs(inst, con, p);
  return con.sense == ConstraintSense::Le ? lhs <= con.rhs : lhs >= con.rhs;
}

// 0/1 maximization model over station placements.
// assignment[l]: -1 free, 0/1 fixed. Budgets apply only where active
// and count fixed selections too.
struct ModelSpec {
  const Instance* instance = nullptr;
  std::vector<std::pair<int, Weight>> objective;  // (arc index, weight)
  std::vector<std::int8_t> assignment;
  std::vector<std::uint8_t> budget_active;
  std::vector<LinearConstraint> constraints;
  std::optional<StrategyProfile> warm_start;
  std::optional<double> time_limit_s;
};

enum class SolveStatus { Optimal, TimeLimitIncumbent, Infeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::TimeLimitIncumbent: return "time_limit";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  Weight objective = 0;
  std::optional<StrategyProfile> profile;
  std::uint64_t nodes = 0;
  double elapsed_s = 0.0;
};

namespace detail {

// Depth-first branch and bound. Branches on station variables only, in
// ascending lake id, value 1 before 0; coverage is implied, never branched.
// The node bound adds, per county, the top remaining-budget per-lake sums
// of open incident objective weight to the already covered objective.
class BnbSolver {
 public:
  explicit BnbSolver(const ModelSpec& model) : m_(model) {
    if (m_.instance == nullptr) throw InvalidModel("model has no instance");
    const Instance& inst = *m_.instance;
    n_ = inst.num_lakes();
    nc_ = inst.num_counties();
    if (static_cast<int>(m_.assignment.size()) != n_)
      throw InvalidModel("assignment size mismatch");
    if (static_cast<int>(m_.budget_active.size()) != nc_)
      throw InvalidModel("budget_active size mismatch");
    for (int l = 0; l < n_; ++l)
      if (m_.assignment[l] < -1 || m_.assignment[l] > 1)
        throw InvalidModel("assignment value outside {-1,0,1}");

    obj_weight_.assign(inst.num_arcs(), 0);
    for (auto [e, w] : m_.objective) {
      if (e < 0 || e >= inst.num_arcs())
        throw InvalidModel("objective arc index out of range");
      obj_weight_[e] += w;
    }
    for (const auto& con : m_.constraints) {
      for (auto [l, a] : con.x_terms) {
        (void)a;
        if (l < 0 || l >= n_) throw InvalidModel("constraint lake out of range");
      }
      for (auto [e, b] : con.y_terms) {
        (void)b;
        if (e < 0 || e >= inst.num_arcs())
          throw InvalidModel("constraint arc index out of range");
      }
    }

    relevant_.assign(inst.num_arcs(), 0);
    for (auto [e, w] : m_.objective)
      if (w != 0) relevant_[e] = 1;
    for (const auto& con : m_.constraints)
      for (auto [e, b] : con.y_terms) {
        (void)b;
        relevant_[e] = 1;
      }

    incident_.resize(n_);
    for (int e = 0; e < inst.num_arcs(); ++e) {
      if (!relevant_[e]) continue;
      incident_[inst.arcs()[e].from].push_back(e);
      incident_[inst.arcs()[e].to].push_back(e);
    }

    x_.assign(n_, 0);
    decided_.assign(n_, 0);
    used_.assign(nc_, 0);
    selected_ends_.assign(inst.num_arcs(), 0);
    undecided_ends_.assign(inst.num_arcs(), 0);
    for (int e = 0; e < inst.num_arcs(); ++e)
      if (relevant_[e]) undecided_ends_[e] = 2;

    for (int l = 0; l < n_; ++l) {
      if (m_.assignment[l] == -1) {
        free_.push_back(l);
      } else {
        place(l, m_.assignment[l]);
      }
    }
    for (int c = 0; c < nc_; ++c)
      if (m_.budget_active[c] && used_[c] > inst.budget(c)) fixed_overrun_ = true;
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    deadline_.reset();
    if (m_.time_limit_s)
      deadline_ = start + std::chrono::duration_cast<
                              std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(*m_.time_limit_s));

    SolveResult res;
    if (!fixed_overrun_) {
      seed_warm_start();
      dfs(0);
    }
    res.nodes = nodes_;
    res.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!incumbent_) {
      res.status = timed_out_ ? SolveStatus::TimeLimitIncumbent
                              : SolveStatus::Infeasible;
      return res;
    }
    res.status =
        timed_out_ ? SolveStatus::TimeLimitIncumbent : SolveStatus::Optimal;
    res.objective = inc_value_;
    res.profile = std::move(incumbent_);
    return res;
  }

  // optimistic objective bound at the root, before any branching
  Weight root_bound() { return bound(0); }

 private:
  void place(int l, int v) {
    x_[l] = static_cast<std::uint8_t>(v);
    decided_[l] = 1;
    if (v) ++used_[m_.instance->county_of(l)];
    for (int e : incident_[l]) {
      --undecided_ends_[e];
      if (v) {
        if (++selected_ends_[e] == 1) covered_obj_ += obj_weight_[e];
      }
    }
  }

  void unplace(int l) {
    const int v = x_[l];
    decided_[l] = 0;
    x_[l] = 0;
    if (v) --used_[m_.instance->county_of(l)];
    for (int e : incident_[l]) {
      ++undecided_ends_[e];
      if (v) {
        if (--selected_ends_[e] == 0) covered_obj_ -= obj_weight_[e];
      }
    }
  }

  bool arc_open(int e) const {
    return selected_ends_[e] == 0 && undecided_ends_[e] > 0;
  }

  // covered objective plus, per county, the largest remaining-budget
  // many per-lake sums of open incident objective weight
  Weight bound(int depth) {
    gain_buf_.assign(nc_, {});
    for (std::size_t i = depth; i < free_.size(); ++i) {
      const int l = free_[i];
      Weight g = 0;
      for (int e : incident_[l])
        if (arc_open(e)) g += obj_weight_[e];
      gain_buf_[m_.instance->county_of(l)].push_back(g);
    }
    Weight b = covered_obj_;
    for (int c = 0; c < nc_; ++c) {
      auto& gains = gain_buf_[c];
      if (gains.empty()) continue;
      std::size_t r = gains.size();
      if (m_.budget_active[c]) {
        const int left = m_.instance->budget(c) - used_[c];
        r = static_cast<std::size_t>(std::max(0, left));
      }
      if (r == 0) continue;
      if (r < gains.size())
        std::partial_sort(gains.begin(), gains.begin() + r, gains.end(),
                          std::greater<Weight>());
      for (std::size_t i = 0; i < std::min(r, gains.size()); ++i)
        if (gains[i] > 0) b += gains[i];
    }
    return b;
  }

  // optimistic LHS of a >= constraint under the same budgeted relaxation
  Weight ge_optimistic(const LinearConstraint& con, int depth) {
    gain_map_.assign(n_, 0);
    Weight det = 0;
    for (auto [l, a] : con.x_terms) {
      if (decided_[l])
        det += a * (x_[l] ? 1 : 0);
      else if (a > 0)
        gain_map_[l] += a;
    }
    for (auto [e, b] : con.y_terms) {
      if (selected_ends_[e] > 0) {
        det += b;
      } else if (undecided_ends_[e] > 0 && b > 0) {
        const Arc& a = m_.instance->arcs()[e];
        if (!decided_[a.from]) gain_map_[a.from] += b;
        if (!decided_[a.to]) gain_map_[a.to] += b;
      }
    }
    gain_buf_.assign(nc_, {});
    for (std::size_t i = depth; i < free_.size(); ++i) {
      const int l = free_[i];
      if (gain_map_[l] > 0)
        gain_buf_[m_.instance->county_of(l)].push_back(gain_map_[l]);
    }
    Weight opt = det;
    for (int c = 0; c < nc_; ++c) {
      auto& gains = gain_buf_[c];
      if (gains.empty()) continue;
      std::size_t r = gains.size();
      if (m_.budget_active[c]) {
        const int left = m_.instance->budget(c) - used_[c];
        r = static_cast<std::size_t>(std::max(0, left));
      }
      if (r == 0) continue;
      if (r < gains.size())
        std::partial_sort(gains.begin(), gains.begin() + r, gains.end(),
                          std::greater<Weight>());
      for (std::size_t i = 0; i < std::min(r, gains.size()); ++i)
        opt += gains[i];
    }
    return opt;
  }

  void seed_warm_start() {
    if (!m_.warm_start) return;
    const StrategyProfile& w = *m_.warm_start;
    if (w.size() != n_) throw InvalidModel("warm start size mismatch");
    for (int l = 0; l < n_; ++l)
      if (m_.assignment[l] != -1 && w.x[l] != m_.assignment[l])
        throw InvalidModel("warm start contradicts a fixed assignment");
    for (int c = 0; c < nc_; ++c) {
      if (!m_.budget_active[c]) continue;
      int cnt = 0;
      for (int l : m_.instance->county_lakes(c)) cnt += w.x[l];
      if (cnt > m_.instance->budget(c))
        throw InvalidModel("warm start violates an active budget");
    }
    for (const auto& con : m_.constraints)
      if (!satisfies(*m_.instance, con, w)) return;  // not seedable, not an error
    Weight v = 0;
    for (auto [e, wt] : m_.objective) {
      const Arc& a = m_.instance->arcs()[e];
      if (w.x[a.from] || w.x[a.to]) v += wt;
    }
    incumbent_ = w;
    inc_value_ = v;
  }

  void leaf() {
    for (const auto& con : m_.constraints) {
      Weight lhs = 0;
      for (auto [l, a] : con.x_terms) lhs += a * (x_[l] ? 1 : 0);
      for (auto [e, b] : con.y_terms)
        lhs += b * (selected_ends_[e] > 0 ? 1 : 0);
      const bool ok =
          con.sense == ConstraintSense::Le ? lhs <= con.rhs : lhs >= con.rhs;
      if (!ok) return;
    }
    if (!incumbent_ || covered_obj_ > inc_value_) {
      incumbent_ = StrategyProfile{x_};
      inc_value_ = covered_obj_;
    }
  }

  void dfs(std::size_t depth) {
    if (timed_out_) return;
    if ((++nodes_ & 0x3ff) == 0 && deadline_ &&
        std::chrono::steady_clock::now() >= *deadline_) {
      timed_out_ = true;
      return;
    }
    if (depth == free_.size()) {
      leaf();
      return;
    }
    if (incumbent_ && bound(static_cast<int>(depth)) <= inc_value_) return;
    for (const auto& con : m_.constraints)
      if (con.sense == ConstraintSense::Ge &&
          ge_optimistic(con, static_cast<int>(depth)) < con.rhs)
        return;

    const int l = free_[depth];
    const int c = m_.instance->county_of(l);
    if (!m_.budget_active[c] || used_[c] < m_.instance->budget(c)) {
      place(l, 1);
      dfs(depth + 1);
      unplace(l);
    }
    place(l, 0);
    dfs(depth + 1);
    unplace(l);
  }

  const ModelSpec& m_;
  int n_ = 0;
  int nc_ = 0;
  std::vector<Weight> obj_weight_;
  std::vector<std::uint8_t> relevant_;
  std::vector<std::vector<int>> incident_;
  std::vector<int> free_;

  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> decided_;
  std::vector<int> used_;
  std::vector<int> selected_ends_;
  std::vector<int> undecided_ends_;
  Weight covered_obj_ = 0;
  bool fixed_overrun_ = false;

  std::optional<StrategyProfile> incumbent_;
  Weight inc_value_ = 0;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
  std::optional<std::chrono::steady_clock::time_point> deadline_;

  std::vector<std::vector<Weight>> gain_buf_;
  std::vector<Weight> gain_map_;
};

}  // namespace detail

inline SolveResult solve(const ModelSpec& model) {
  return detail::BnbSolver(model).run();
}

// diagnostic: the admissible objective bound at the root node
inline Weight optimistic_root_bound(const ModelSpec& model) {
  return detail::BnbSolver(model).root_bound();
}

// social benefit model: maximize total covered weight under every budget
inline ModelSpec build_sb(const Instance& inst) {
  ModelSpec m;
  m.instance = &inst;
  m.objective.reserve(inst.num_arcs());
  for (int e = 0; e < inst.num_arcs(); ++e)
    m.objective.emplace_back(e, inst.arcs()[e].weight);
  m.assignment.assign(inst.num_lakes(), -1);
  m.budget_active.assign(inst.num_counties(), 1);
  return m;
}

// county's exact best response with every other county frozen at `opponents`
inline ModelSpec build_best_response(const Instance& inst, const ArcSets& sets,
                                     int county, UtilityKind kind,
                                     const StrategyProfile& opponents) {
  ModelSpec m;
  m.instance = &inst;
  for (int e : sets.county[county].support(kind))
    m.objective.emplace_back(e, inst.arcs()[e].weight);
  m.assignment.resize(inst.num_lakes());
  for (int l = 0; l < inst.num_lakes(); ++l)
    m.assignment[l] = static_cast<std::int8_t>(opponents.x[l] ? 1 : 0);
  for (int l : inst.county_lakes(county)) m.assignment[l] = -1;
  m.budget_active.assign(inst.num_counties(), 0);
  m.budget_active[county] = 1;
  return m;
}

// social benefit restricted to profiles where every county keeps at least
// its utility at `pne`
inline ModelSpec build_pne_bounded(const Instance& inst, const ArcSets& sets,
                                   const StrategyProfile& pne) {
  ModelSpec m = build_sb(inst);
  for (int c = 0; c < inst.num_counties(); ++c) {
    LinearConstraint con;
    for (int e : sets.county[c].selfish_support)
      con.y_terms.emplace_back(e, inst.arcs()[e].weight);
    con.sense = ConstraintSense::Ge;
    con.rhs = utility(inst, sets, UtilityKind::Selfish, c, pne);
    m.constraints.push_back(std::move(con));
  }
  return m;
}

// Inequality every equilibrium satisfies: the county's payoff from deviating
// to `slice` (given the others' y) can not beat its realized payoff.
// Stored as  sum_i w(1-s_j) x_i - sum_e w y_e <= -constant,
// which reads "deviation payoff <= realized payoff" once rearranged.
inline LinearConstraint equilibrium_cut(const Instance& inst,
                                        const ArcSets& sets, int county,
                                        const std::vector<std::uint8_t>& slice) {
  const auto& lakes = inst.county_lakes(county);
  std::map<int, int> local;
  for (std::size_t i = 0; i < lakes.size(); ++i)
    local[lakes[i]] = static_cast<int>(i);

  Weight constant = 0;
  std::map<int, Weight> x_coeff;
  for (int e : sets.county[county].internal) {
    const Arc& a = inst.arcs()[e];
    if (slice[local.at(a.from)] || slice[local.at(a.to)]) constant += a.weight;
  }
  for (int e : sets.county[county].inbound) {
    const Arc& a = inst.arcs()[e];
    if (slice[local.at(a.to)])
      constant += a.weight;
    else
      x_coeff[a.from] += a.weight;
  }

  LinearConstraint con;
  for (auto [l, w] : x_coeff) con.x_terms.emplace_back(l, w);
  for (int e : sets.county[county].selfish_support)
    con.y_terms.emplace_back(e, -inst.arcs()[e].weight);
  con.sense = ConstraintSense::Le;
  con.rhs = -constant;
  return con;
}

}  // namespace ebmc
