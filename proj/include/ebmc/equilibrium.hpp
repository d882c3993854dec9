#pragma once

#include <vector>

#include "ebmc/instance.hpp"
#include "ebmc/solver.hpp"

namespace ebmc {

// Either a certified equilibrium, or the first county (ascending id) with a
// strictly improving deviation, together with that county's best slice and
// the integer utility gain.
struct PneCertificate {
  bool is_pne = false;
  int county = -1;
  std::vector<std::uint8_t> deviation;
  Weight gain = 0;
};

inline PneCertificate check_separation(const Instance& inst,
                                       const ArcSets& sets, UtilityKind kind,
                                       const StrategyProfile& p) {
  for (int c = 0; c < inst.num_counties(); ++c) {
    const Weight cur = utility(inst, sets, kind, c, p);
    const SolveResult res = solve(build_best_response(inst, sets, c, kind, p));
    if (res.objective > cur) {
      return PneCertificate{false, c, county_slice(inst, c, *res.profile),
                            res.objective - cur};
    }
  }
  return PneCertificate{true, -1, {}, 0};
}

// Each county best-responds to a world with no stations at all;
// the slices are concatenated without further interaction.
inline StrategyProfile non_game_profile(const Instance& inst,
                                        const ArcSets& sets) {
  StrategyProfile p = zero_profile(inst);
  const StrategyProfile zero = zero_profile(inst);
  for (int c = 0; c < inst.num_counties(); ++c) {
    const SolveResult res =
        solve(build_best_response(inst, sets, c, UtilityKind::Selfish, zero));
    apply_slice(inst, c, county_slice(inst, c, *res.profile), p);
  }
  return p;
}

enum class SufficiencyCondition {
  AllUninfested,         // every selected lake is clean (vacuous when empty)
  AllInfestedSingleAis,  // single AIS type and every selected lake is infested
  NotApplicable
};

inline const char* to_string(SufficiencyCondition c) {
  switch (c) {
    case SufficiencyCondition::AllUninfested: return "all_uninfested";
    case SufficiencyCondition::AllInfestedSingleAis:
      return "all_infested_single_ais";
    case SufficiencyCondition::NotApplicable: return "not_applicable";
  }
  return "?";
}

inline SufficiencyCondition sufficiency_condition(const Instance& inst,
                                            const StrategyProfile& p) {
  bool any_infested = false;
  bool any_clean = false;
  for (int l = 0; l < inst.num_lakes(); ++l) {
    if (!p.selected(l)) continue;
    (inst.is_infested(l) ? any_infested : any_clean) = true;
  }
  if (!any_infested) return SufficiencyCondition::AllUninfested;
  if (!any_clean && inst.num_ais_types() == 1)
    return SufficiencyCondition::AllInfestedSingleAis;
  return SufficiencyCondition::NotApplicable;
}

}  // namespace ebmc
