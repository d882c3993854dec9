#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "ebmc/dynamics.hpp"
#include "ebmc/equilibrium.hpp"
#include "ebmc/instance.hpp"
#include "ebmc/rng.hpp"
#include "ebmc/solver.hpp"

namespace ebmc {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

namespace detail {

inline StrategyProfile random_feasible_profile(const Instance& inst, Rng& rng) {
  StrategyProfile p = zero_profile(inst);
  for (int c = 0; c < inst.num_counties(); ++c) {
    const auto& lakes = inst.county_lakes(c);
    const int cap = std::min<int>(inst.budget(c), lakes.size());
    const int m = rand_int(rng, 0, cap);
    for (int i : sample_without_replacement(rng, static_cast<int>(lakes.size()), m))
      p.x[lakes[i]] = 1;
  }
  return p;
}

inline std::string profile_str(const StrategyProfile& p) {
  std::string s = "[";
  bool first = true;
  for (int l = 0; l < p.size(); ++l) {
    if (!p.selected(l)) continue;
    if (!first) s += ",";
    s += std::to_string(l);
    first = false;
  }
  return s + "]";
}

}  // namespace detail

// Structural and game-theoretic identities, sampled where exhaustive
// checking is infeasible. Every comparison is exact integer equality.
inline std::vector<CheckResult> verify_theory(const Instance& inst,
                                              const ArcSets& sets,
                                              std::uint64_t seed,
                                              int num_profiles = 100,
                                              int num_deviations = 100) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  {
    CheckResult r{"arc_partition", check_partition_identity(inst, sets), ""};
    if (!r.ok) r.detail = "some arc missing or repeated across county supports";
    out.push_back(std::move(r));
  }

  {
    CheckResult r{"potential_decomposition", true, ""};
    for (int i = 0; i < num_profiles && r.ok; ++i) {
      const StrategyProfile p = detail::random_feasible_profile(inst, rng);
      Weight sum = 0;
      for (int c = 0; c < inst.num_counties(); ++c)
        sum += utility(inst, sets, UtilityKind::Selfish, c, p);
      const Weight total = phi(inst, p);
      if (sum != total) {
        r.ok = false;
        std::ostringstream os;
        os << "profile " << detail::profile_str(p) << ": potential " << total
           << " != county sum " << sum;
        r.detail = os.str();
      }
    }
    out.push_back(std::move(r));
  }

  {
    CheckResult r{"exact_potential", true, ""};
    for (int i = 0; i < num_deviations && r.ok; ++i) {
      const StrategyProfile base = detail::random_feasible_profile(inst, rng);
      const int c =
          static_cast<int>(rand_below(rng, inst.num_counties()));
      StrategyProfile alt = base;
      const StrategyProfile fresh = detail::random_feasible_profile(inst, rng);
      apply_slice(inst, c, county_slice(inst, c, fresh), alt);
      const Weight dphi = phi(inst, alt) - phi(inst, base);
      const Weight dutil = utility(inst, sets, UtilityKind::Altruistic, c, alt) -
                           utility(inst, sets, UtilityKind::Altruistic, c, base);
      if (dphi != dutil) {
        r.ok = false;
        std::ostringstream os;
        os << "county " << c << " deviation " << detail::profile_str(base)
           << " -> " << detail::profile_str(alt) << ": potential delta " << dphi
           << " != utility delta " << dutil;
        r.detail = os.str();
      }
    }
    out.push_back(std::move(r));
  }

  {
    CheckResult r{"social_optimum_altruistic_pne", false, ""};
    const SolveResult sb = solve(build_sb(inst));
    if (!sb.profile) {
      r.detail = "social model returned no profile";
    } else {
      const PneCertificate cert =
          check_separation(inst, sets, UtilityKind::Altruistic, *sb.profile);
      r.ok = cert.is_pne;
      if (!r.ok) {
        std::ostringstream os;
        os << "county " << cert.county << " gains " << cert.gain << " at "
           << detail::profile_str(*sb.profile);
        r.detail = os.str();
      }
    }
    out.push_back(std::move(r));
  }

  {
    CheckResult r{"non_game_sufficiency", true, ""};
    const StrategyProfile ng = non_game_profile(inst, sets);
    const SufficiencyCondition cond = sufficiency_condition(inst, ng);
    if (cond == SufficiencyCondition::NotApplicable) {
      r.detail = "condition not applicable; nothing claimed";
    } else {
      const PneCertificate cert =
          check_separation(inst, sets, UtilityKind::Selfish, ng);
      r.ok = cert.is_pne;
      if (!r.ok) {
        std::ostringstream os;
        os << to_string(cond) << " held but county " << cert.county
           << " gains " << cert.gain << " at " << detail::profile_str(ng);
        r.detail = os.str();
      }
    }
    out.push_back(std::move(r));
  }

  return out;
}

// One row of a claimed-counterexample deviation table: whenever the trigger
// lake matches and the county is not already on the target slice, switching
// to the target slice must strictly improve that county.
struct DeviationRule {
  int trigger_lake = 0;
  bool trigger_selected = true;
  int county = 0;
  std::vector<std::uint8_t> target_slice;
};

namespace detail {

// iterate all profiles where every county spends its whole budget
template <typename Fn>
void for_each_full_budget_profile(const Instance& inst, Fn&& fn) {
  const int nc = inst.num_counties();
  std::vector<std::vector<std::vector<std::uint8_t>>> universe(nc);
  for (int c = 0; c < nc; ++c)
    universe[c] = county_slice_universe(inst, c, true);
  std::vector<std::size_t> odo(nc, 0);
  StrategyProfile x = zero_profile(inst);
  for (int c = 0; c < nc; ++c) apply_slice(inst, c, universe[c][0], x);
  for (;;) {
    fn(const_cast<const StrategyProfile&>(x));
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
}

}  // namespace detail

// A claimed no-equilibrium instance checks out iff exhaustive enumeration
// over every budget-feasible profile finds nothing, and every deviation-table
// row strictly improves on every full-budget profile it matches.
inline std::vector<CheckResult> verify_counterexample(
    const Instance& inst, const ArcSets& sets,
    const std::vector<DeviationRule>& rules, const std::string& prefix,
    std::uint64_t cap = 10'000'000) {
  std::vector<CheckResult> out;

  {
    CheckResult r{prefix + "/no_equilibrium", false, ""};
    const EnumeratePneResult found =
        enumerate_pne(inst, sets, UtilityKind::Selfish, cap);
    r.ok = found.pnes.empty();
    if (!r.ok) {
      std::ostringstream os;
      os << found.pnes.size() << " equilibrium(s) exist, e.g. "
         << detail::profile_str(found.pnes.front()) << " with potential "
         << found.phis.front();
      r.detail = os.str();
    }
    out.push_back(std::move(r));
  }

  for (std::size_t i = 0; i < rules.size(); ++i) {
    const DeviationRule& rule = rules[i];
    CheckResult r{prefix + "/row_" + std::to_string(i + 1), true, ""};
    detail::for_each_full_budget_profile(inst, [&](const StrategyProfile& p) {
      if (!r.ok) return;
      if (p.selected(rule.trigger_lake) != rule.trigger_selected) return;
      if (county_slice(inst, rule.county, p) == rule.target_slice) return;
      const Weight cur = utility(inst, sets, UtilityKind::Selfish, rule.county, p);
      StrategyProfile q = p;
      apply_slice(inst, rule.county, rule.target_slice, q);
      const Weight dev = utility(inst, sets, UtilityKind::Selfish, rule.county, q);
      if (dev <= cur) {
        r.ok = false;
        std::ostringstream os;
        os << "at " << detail::profile_str(p) << " the claimed deviation moves "
           << "county " << rule.county << " from " << cur << " to " << dev;
        r.detail = os.str();
      }
    });
    out.push_back(std::move(r));
  }

  return out;
}

}  // namespace ebmc
