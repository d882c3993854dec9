#pragma once

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ebmc/equilibrium.hpp"
#include "ebmc/errors.hpp"
#include "ebmc/instance.hpp"
#include "ebmc/rng.hpp"
#include "ebmc/solver.hpp"

namespace ebmc {

struct History {
  std::vector<StrategyProfile> snapshots;

  void clear() { snapshots.clear(); }
  void append(const StrategyProfile& p) { snapshots.push_back(p); }
};

// true iff some profile appears twice anywhere in the history
inline bool cycle_diagnostic(const History& h) {
  for (std::size_t i = 0; i < h.snapshots.size(); ++i)
    for (std::size_t j = i + 1; j < h.snapshots.size(); ++j)
      if (h.snapshots[i] == h.snapshots[j]) return true;
  return false;
}

struct DynamicsConfig {
  int t_max = 60;     // rounds per attempt before a random restart
  int init_max = 3;   // attempts (first uses the caller's init)
  std::uint64_t seed = 0;
  std::optional<double> zr_time_limit_s;
  std::optional<double> bounded_time_limit_s;  // improvement-model solves
  bool zr_all_county_cuts = false;
};

struct RunRecord {
  std::string algorithm;
  std::string init_label;
  bool pne_found = false;
  std::optional<StrategyProfile> final_profile;
  std::optional<Weight> phi_value;
  int rounds = 0;  // accumulated across restarts
  bool cycle_detected = false;
  int cuts_added = 0;
  double elapsed_s = 0.0;
  std::vector<StrategyProfile> pne_list;
};

// uniformly random profile selecting exactly min(budget, county size) lakes
// per county
inline StrategyProfile random_profile(const Instance& inst, Rng& rng) {
  StrategyProfile p = zero_profile(inst);
  for (int c = 0; c < inst.num_counties(); ++c) {
    const auto& lakes = inst.county_lakes(c);
    const int m = std::min<int>(inst.budget(c), lakes.size());
    for (int i : sample_without_replacement(rng, static_cast<int>(lakes.size()), m))
      p.x[lakes[i]] = 1;
  }
  return p;
}

struct BrsResult {
  std::optional<StrategyProfile> pne;
  RunRecord record;
};

namespace detail {

// One best-response pass structure shared by the public entry point and the
// improvement scheme. `hint` biases tie-breaking among strict improvements
// toward the hinted slice via the solver's warm-start preference.
inline BrsResult brs_free_impl(const Instance& inst, const ArcSets& sets,
                               const StrategyProfile& init,
                               const DynamicsConfig& cfg, UtilityKind kind,
                               Rng& rng,
                               const std::optional<StrategyProfile>& hint) {
  if (!feasible(inst, init))
    throw InvalidParams("initial profile violates a budget");
  const auto start = std::chrono::steady_clock::now();

  BrsResult out;
  out.record.algorithm = "BRS";
  const int nc = inst.num_counties();
  StrategyProfile x = init;

  for (int attempt = 0; attempt < std::max(1, cfg.init_max); ++attempt) {
    if (attempt > 0) x = random_profile(inst, rng);
    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    bool randomized = false;
    History h;

    for (int t = 0; t < cfg.t_max; ++t) {
      for (int c : order) {
        const Weight cur = utility(inst, sets, kind, c, x);
        ModelSpec model = build_best_response(inst, sets, c, kind, x);
        if (hint) {
          StrategyProfile w = x;
          apply_slice(inst, c, county_slice(inst, c, *hint), w);
          model.warm_start = std::move(w);
        }
        const SolveResult res = solve(model);
        if (res.objective > cur)
          apply_slice(inst, c, county_slice(inst, c, *res.profile), x);
      }
      ++out.record.rounds;
      h.append(x);
      const std::size_t m = h.snapshots.size();
      if (m >= 2 && h.snapshots[m - 1] == h.snapshots[m - 2]) {
        out.pne = x;
        out.record.pne_found = true;
        out.record.final_profile = x;
        out.record.phi_value = phi(inst, x);
        out.record.elapsed_s = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        return out;
      }
      if (randomized) {
        shuffle_vec(order, rng);
      } else if (cycle_diagnostic(h)) {
        randomized = true;
        out.record.cycle_detected = true;
        shuffle_vec(order, rng);
      }
    }
  }

  out.record.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

}  // namespace detail

// Clockwork rounds of exact per-county best responses with keep-on-tie;
// a no-change round is a certified equilibrium, a repeated profile flips
// the county order to random, exhausted rounds trigger random restarts.
inline BrsResult brs_free(const Instance& inst, const ArcSets& sets,
                          const StrategyProfile& init,
                          const DynamicsConfig& cfg,
                          UtilityKind kind = UtilityKind::Selfish) {
  Rng rng(cfg.seed);
  return detail::brs_free_impl(inst, sets, init, cfg, kind, rng, std::nullopt);
}

enum class BrPlusExit {
  BoundedNoImprove,  // improvement model could not beat the last equilibrium
  NoProgress,        // a later equilibrium failed to raise the potential
  BrsFailed          // best-response scheme found nothing to continue from
};

struct BrPlusResult {
  std::optional<StrategyProfile> best;
  RunRecord record;
  BrPlusExit exit = BrPlusExit::BrsFailed;
};

// Escalation loop: find an equilibrium, then solve for the best profile that
// keeps every county at least as well off and restart the scheme from it.
// Stops when that model cannot improve, or two consecutive equilibria fail
// to raise the potential, or the scheme comes back empty-handed.
inline BrPlusResult br_plus(const Instance& inst, const ArcSets& sets,
                            const StrategyProfile& init,
                            const DynamicsConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);

  BrPlusResult out;
  out.record.algorithm = "BRP";
  std::vector<StrategyProfile> found;
  StrategyProfile x = init;
  std::optional<StrategyProfile> hint;

  const auto finish = [&](std::optional<StrategyProfile> best, BrPlusExit why) {
    out.best = std::move(best);
    out.exit = why;
    out.record.pne_found = out.best.has_value();
    if (out.best) {
      out.record.final_profile = *out.best;
      out.record.phi_value = phi(inst, *out.best);
    }
    out.record.pne_list = std::move(found);
    out.record.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return out;
  };

  for (;;) {
    DynamicsConfig stage = cfg;
    if (!found.empty()) stage.init_max = 1;
    BrsResult r = detail::brs_free_impl(inst, sets, x, stage,
                                        UtilityKind::Selfish, rng, hint);
    out.record.rounds += r.record.rounds;
    out.record.cycle_detected |= r.record.cycle_detected;

    if (!r.pne) {
      if (found.empty()) return finish(std::nullopt, BrPlusExit::BrsFailed);
      return finish(found.back(), BrPlusExit::BrsFailed);
    }
    found.push_back(*r.pne);

    const std::size_t m = found.size();
    if (m >= 2 && phi(inst, found[m - 2]) >= phi(inst, found[m - 1])) {
      // no potential progress; keep the better one, ties toward the later
      const bool later = phi(inst, found[m - 1]) >= phi(inst, found[m - 2]);
      return finish(found[later ? m - 1 : m - 2], BrPlusExit::NoProgress);
    }

    ModelSpec bounded = build_pne_bounded(inst, sets, found.back());
    bounded.warm_start = found.back();
    bounded.time_limit_s = cfg.bounded_time_limit_s;
    const SolveResult res = solve(bounded);
    const Weight keep = phi(inst, found.back());
    if (!res.profile || res.objective <= keep)
      return finish(found.back(), BrPlusExit::BoundedNoImprove);
    x = *res.profile;
    hint = *res.profile;
  }
}

enum class ZrStatus {
  PneFound,
  NoPneCertified,  // master turned infeasible: no equilibrium exists
  TimeLimit        // expired without certifying either way
};

struct ZrResult {
  ZrStatus status = ZrStatus::TimeLimit;
  std::optional<StrategyProfile> pne;
  RunRecord record;
  std::vector<LinearConstraint> cuts;
  std::vector<Weight> master_objectives;
};

// Cutting-plane search for the potential-maximal equilibrium: maximize the
// potential, ask each county in turn for a strictly improving deviation,
// cut the current optimum off with the corresponding equilibrium
// inequality, resolve. Infeasibility certifies that no equilibrium exists.
inline ZrResult zr(const Instance& inst, const ArcSets& sets,
                   const std::optional<StrategyProfile>& warm,
                   const DynamicsConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  ZrResult out;
  out.record.algorithm = "ZR";

  const auto finish_with = [&](ZrStatus st,
                               std::optional<StrategyProfile> pne) {
    out.status = st;
    out.pne = std::move(pne);
    out.record.pne_found = out.pne.has_value();
    if (out.pne) {
      out.record.final_profile = *out.pne;
      out.record.phi_value = phi(inst, *out.pne);
    }
    out.record.elapsed_s = elapsed();
    return out;
  };

  std::optional<StrategyProfile> last_candidate;
  const auto expire = [&] {
    // best profile verified as an equilibrium so far, if any
    if (last_candidate &&
        check_separation(inst, sets, UtilityKind::Selfish, *last_candidate)
            .is_pne)
      return finish_with(ZrStatus::TimeLimit, last_candidate);
    if (warm &&
        check_separation(inst, sets, UtilityKind::Selfish, *warm).is_pne)
      return finish_with(ZrStatus::TimeLimit, warm);
    return finish_with(ZrStatus::TimeLimit, std::nullopt);
  };

  for (;;) {
    std::optional<double> remaining;
    if (cfg.zr_time_limit_s) {
      remaining = *cfg.zr_time_limit_s - elapsed();
      if (*remaining <= 0.0) return expire();
    }

    ModelSpec master = build_sb(inst);
    master.constraints = out.cuts;
    master.warm_start = warm;  // ignored by the solver once cut off
    master.time_limit_s = remaining;
    const SolveResult res = solve(master);
    ++out.record.rounds;  // master iterations

    if (res.status == SolveStatus::Infeasible)
      return finish_with(ZrStatus::NoPneCertified, std::nullopt);
    if (res.status == SolveStatus::TimeLimitIncumbent) {
      if (res.profile) last_candidate = res.profile;
      return expire();
    }

    last_candidate = res.profile;
    out.master_objectives.push_back(res.objective);

    if (cfg.zr_all_county_cuts) {
      bool any = false;
      for (int c = 0; c < inst.num_counties(); ++c) {
        const Weight cur =
            utility(inst, sets, UtilityKind::Selfish, c, *res.profile);
        const SolveResult br = solve(build_best_response(
            inst, sets, c, UtilityKind::Selfish, *res.profile));
        if (br.objective > cur) {
          any = true;
          out.cuts.push_back(equilibrium_cut(
              inst, sets, c, county_slice(inst, c, *br.profile)));
          ++out.record.cuts_added;
        }
      }
      if (!any) return finish_with(ZrStatus::PneFound, res.profile);
    } else {
      const PneCertificate cert =
          check_separation(inst, sets, UtilityKind::Selfish, *res.profile);
      if (cert.is_pne) return finish_with(ZrStatus::PneFound, res.profile);
      out.cuts.push_back(
          equilibrium_cut(inst, sets, cert.county, cert.deviation));
      ++out.record.cuts_added;
    }
  }
}

namespace detail {

// all slices of a county with 0..min(budget, size) selections,
// sizes ascending, positions lexicographic
inline std::vector<std::vector<std::uint8_t>> county_slice_universe(
    const Instance& inst, int county, bool full_budget_only) {
  const auto& lakes = inst.county_lakes(county);
  const int n = static_cast<int>(lakes.size());
  const int cap = std::min(inst.budget(county), n);
  std::vector<std::vector<std::uint8_t>> out;
  const int lo = full_budget_only ? cap : 0;
  for (int size = lo; size <= cap; ++size) {
    std::vector<int> pos(size);
    std::iota(pos.begin(), pos.end(), 0);
    for (;;) {
      std::vector<std::uint8_t> slice(n, 0);
      for (int p : pos) slice[p] = 1;
      out.push_back(std::move(slice));
      int i = size - 1;
      while (i >= 0 && pos[i] == n - size + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int j = i + 1; j < size; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  return out;
}

// C(n, k), saturated at cap + 1; the ascending-product intermediates are
// themselves binomials, so exceeding the cap midway is conclusive
inline std::uint64_t binom_capped(int n, int k, std::uint64_t cap) {
  k = std::min(k, n - k);
  if (k < 0) return 0;
  __uint128_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

// number of budget-feasible slices of one county, saturated at cap + 1
inline std::uint64_t count_county_slices(int n, int b, bool full_budget_only,
                                         std::uint64_t cap) {
  const int top = std::min(b, n);
  if (full_budget_only) return binom_capped(n, top, cap);
  std::uint64_t total = 0;
  for (int s = 0; s <= top; ++s) {
    total += binom_capped(n, s, cap);
    if (total > cap) return cap + 1;
  }
  return total;
}

}  // namespace detail

struct EnumeratePneResult {
  // sorted by potential, descending; ties keep enumeration order
  std::vector<StrategyProfile> pnes;
  std::vector<Weight> phis;
  std::uint64_t profiles_checked = 0;
};

// Exhaustive equilibrium oracle over every budget-feasible profile, with a
// per-county slice enumeration as the inner best-response check. Intended
// for small instances; refuses to start past `cap` profiles.
inline EnumeratePneResult enumerate_pne(const Instance& inst,
                                        const ArcSets& sets,
                                        UtilityKind kind = UtilityKind::Selfish,
                                        std::uint64_t cap = 10'000'000) {
  const int nc = inst.num_counties();
  std::uint64_t total = 1;
  for (int c = 0; c < nc; ++c) {
    const std::uint64_t sz = detail::count_county_slices(
        static_cast<int>(inst.county_lakes(c).size()), inst.budget(c), false,
        cap);
    total = (total > (cap + 1) / sz + 1) ? cap + 1
                                         : std::min<std::uint64_t>(total * sz,
                                                                   cap + 1);
    if (total > cap)
      throw TooLarge("profile space exceeds the enumeration cap");
  }
  std::vector<std::vector<std::vector<std::uint8_t>>> universe(nc);
  for (int c = 0; c < nc; ++c)
    universe[c] = detail::county_slice_universe(inst, c, false);

  EnumeratePneResult out;
  std::vector<std::size_t> odo(nc, 0);
  StrategyProfile x = zero_profile(inst);
  for (int c = 0; c < nc; ++c) apply_slice(inst, c, universe[c][0], x);

  for (;;) {
    ++out.profiles_checked;
    bool is_pne = true;
    for (int c = 0; c < nc && is_pne; ++c) {
      const Weight cur = utility(inst, sets, kind, c, x);
      const auto saved = county_slice(inst, c, x);
      for (const auto& slice : universe[c]) {
        apply_slice(inst, c, slice, x);
        if (utility(inst, sets, kind, c, x) > cur) {
          is_pne = false;
          break;
        }
      }
      apply_slice(inst, c, saved, x);
    }
    if (is_pne) {
      out.pnes.push_back(x);
      out.phis.push_back(phi(inst, x));
    }

    int c = nc - 1;
    while (c >= 0 && odo[c] + 1 == universe[c].size()) {
      odo[c] = 0;
      apply_slice(inst, c, universe[c][0], x);
      --c;
    }
    if (c < 0) break;
    ++odo[c];
    apply_slice(inst, c, universe[c][odo[c]], x);
  }

  std::vector<std::size_t> order(out.pnes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.phis[a] > out.phis[b];
  });
  EnumeratePneResult sorted;
  sorted.profiles_checked = out.profiles_checked;
  for (std::size_t i : order) {
    sorted.pnes.push_back(std::move(out.pnes[i]));
    sorted.phis.push_back(out.phis[i]);
  }
  return sorted;
}

}  // namespace ebmc
