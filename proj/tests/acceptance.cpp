// Acceptance gate: one line per criterion, exit code = number of failures.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ebmc/dynamics.hpp"
#include "ebmc/equilibrium.hpp"
#include "ebmc/experiment.hpp"
#include "ebmc/fixtures.hpp"
#include "ebmc/generator.hpp"
#include "ebmc/instance.hpp"
#include "ebmc/io.hpp"
#include "ebmc/rng.hpp"
#include "ebmc/solver.hpp"
#include "ebmc/verify.hpp"

using namespace ebmc;

namespace {

using Body = std::function<std::optional<std::string>()>;

int g_fails = 0;

void criterion(int number, const char* title, double budget_s, const Body& body) {
  const auto start = std::chrono::steady_clock::now();
  std::optional<std::string> failure;
  try {
    failure = body();
  } catch (const std::exception& e) {
    failure = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (!failure && elapsed > budget_s) {
    std::ostringstream os;
    os.precision(1);
    os << std::fixed << "took " << elapsed << "s, budget " << budget_s << "s";
    failure = os.str();
  }
  if (failure) {
    ++g_fails;
    std::printf("FAIL criterion %d: %s -- %s\n", number, title,
                failure->c_str());
  } else {
    std::printf("PASS criterion %d: %s (%.1fs)\n", number, title, elapsed);
  }
}

StrategyProfile profile_of(const Instance& inst, std::initializer_list<int> sel) {
  StrategyProfile p = zero_profile(inst);
  for (int l : sel) p.x[l] = 1;
  return p;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

// independent walk over every completion of a model's free lakes
std::optional<Weight> enumerate_optimum(const ModelSpec& m) {
  const Instance& inst = *m.instance;
  std::vector<int> free;
  StrategyProfile p{std::vector<std::uint8_t>(inst.num_lakes(), 0)};
  for (int l = 0; l < inst.num_lakes(); ++l) {
    if (m.assignment[l] == -1)
      free.push_back(l);
    else
      p.x[l] = static_cast<std::uint8_t>(m.assignment[l]);
  }
  std::optional<Weight> best;
  for (std::uint32_t bits = 0; bits < (1u << free.size()); ++bits) {
    for (std::size_t i = 0; i < free.size(); ++i)
      p.x[free[i]] = (bits >> i) & 1;
    bool ok = true;
    for (int c = 0; c < inst.num_counties() && ok; ++c) {
      if (!m.budget_active[c]) continue;
      int used = 0;
      for (int l : inst.county_lakes(c)) used += p.x[l];
      if (used > inst.budget(c)) ok = false;
    }
    for (const auto& con : m.constraints)
      if (ok && !satisfies(inst, con, p)) ok = false;
    if (!ok) continue;
    Weight v = 0;
    for (auto [e, w] : m.objective) {
      const Arc& a = inst.arcs()[e];
      if (p.x[a.from] || p.x[a.to]) v += w;
    }
    if (!best || v > *best) best = v;
  }
  return best;
}

bool in_list(const std::vector<StrategyProfile>& list, const StrategyProfile& p) {
  return std::find(list.begin(), list.end(), p) != list.end();
}

}  // namespace

int main() {
  // 1. shipped no-equilibrium claims verify in full
  criterion(1, "claimed counterexamples verify", 5.0, []() -> std::optional<std::string> {
    std::vector<std::string> bad;
    {
      const Instance inst = counterexample_multi_type();
      const ArcSets sets = build_arc_sets(inst);
      for (const CheckResult& c : verify_counterexample(
               inst, sets, counterexample_multi_type_rules(), "multi_type"))
        if (!c.ok) bad.push_back(c.name + ": " + c.detail);
    }
    {
      const Instance inst = counterexample_single_type();
      const ArcSets sets = build_arc_sets(inst);
      for (const CheckResult& c : verify_counterexample(
               inst, sets, counterexample_single_type_rules(), "single_type"))
        if (!c.ok) bad.push_back(c.name + ": " + c.detail);
    }
    if (!bad.empty()) return join(bad);
    return std::nullopt;
  });

  // 2. the demo walkthrough lands exactly where it should
  criterion(2, "demo dynamics reach the known equilibrium", 1.0,
            []() -> std::optional<std::string> {
    const Instance inst = demo_instance();
    const ArcSets sets = build_arc_sets(inst);
    const StrategyProfile expect = profile_of(inst, {2, 3});
    DynamicsConfig cfg;

    const BrsResult brs = brs_free(inst, sets, zero_profile(inst), cfg);
    if (!brs.pne || *brs.pne != expect || brs.record.rounds > 3 ||
        brs.record.phi_value != 15)
      return "best-response scheme missed the equilibrium";

    const BrPlusResult brp = br_plus(inst, sets, zero_profile(inst), cfg);
    if (!brp.best || *brp.best != expect ||
        brp.exit != BrPlusExit::BoundedNoImprove || brp.record.phi_value != 15)
      return "improvement scheme missed the equilibrium";

    const ZrResult z = zr(inst, sets, std::nullopt, cfg);
    if (z.status != ZrStatus::PneFound || *z.pne != expect ||
        z.record.cuts_added != 1 || z.record.phi_value != 15)
      return "cut generation missed the equilibrium";
    return std::nullopt;
  });

  // 3. potential identities hold exactly on 50 seeded instances
  criterion(3, "exact potential identities across 50 instances", 30.0,
            []() -> std::optional<std::string> {
    for (std::uint64_t s = 1; s <= 50; ++s) {
      GenParams gp;
      gp.counties = 2 + static_cast<int>(s % 4);
      gp.lakes_per_county = 5 + static_cast<int>(s % 6);
      gp.num_ais_types = (s % 2) ? 1 : 4;
      gp.budget_ratio = 0.5;
      gp.seed = s;
      const Instance inst = generate(gp);
      const ArcSets sets = build_arc_sets(inst);
      if (!check_partition_identity(inst, sets))
        return "arc partition broken at seed " + std::to_string(s);
      Rng rng(s);
      for (int i = 0; i < 30; ++i) {
        const StrategyProfile p = detail::random_feasible_profile(inst, rng);
        Weight sum = 0;
        for (int c = 0; c < inst.num_counties(); ++c)
          sum += utility(inst, sets, UtilityKind::Selfish, c, p);
        if (sum != phi(inst, p))
          return "potential decomposition broken at seed " + std::to_string(s);
      }
      for (int i = 0; i < 30; ++i) {
        const StrategyProfile base = detail::random_feasible_profile(inst, rng);
        const int c = static_cast<int>(rand_below(rng, inst.num_counties()));
        StrategyProfile alt = base;
        const StrategyProfile fresh = detail::random_feasible_profile(inst, rng);
        apply_slice(inst, c, county_slice(inst, c, fresh), alt);
        const Weight dphi = phi(inst, alt) - phi(inst, base);
        const Weight dutil =
            utility(inst, sets, UtilityKind::Altruistic, c, alt) -
            utility(inst, sets, UtilityKind::Altruistic, c, base);
        if (dphi != dutil)
          return "exact potential broken at seed " + std::to_string(s);
      }
    }
    return std::nullopt;
  });

  // 4. the social optimum is an altruistic equilibrium, 20 instances
  criterion(4, "social optima are altruistic equilibria", 60.0,
            []() -> std::optional<std::string> {
    int done = 0;
    for (std::uint64_t s = 1; s <= 400 && done < 20; ++s) {
      GenParams gp;
      gp.counties = 2 + static_cast<int>(s % 3);
      gp.lakes_per_county = 3 + static_cast<int>(s % 3);
      gp.num_ais_types = 1 + static_cast<int>(s % 3);
      gp.budget_ratio = 0.5;
      gp.seed = 1000 + s;
      const Instance inst = generate(gp);
      int slots = 0;
      for (int c = 0; c < inst.num_counties(); ++c)
        slots += std::min<int>(inst.budget(c), inst.county_lakes(c).size());
      if (slots < 1 || slots > 12) continue;
      ++done;
      const ArcSets sets = build_arc_sets(inst);
      const SolveResult sb = solve(build_sb(inst));
      if (sb.status != SolveStatus::Optimal || !sb.profile)
        return "social solve failed at seed " + std::to_string(gp.seed);
      if (!check_separation(inst, sets, UtilityKind::Altruistic, *sb.profile)
               .is_pne)
        return "social optimum unstable at seed " + std::to_string(gp.seed);
    }
    if (done < 20) return "found only " + std::to_string(done) + " instances";
    return std::nullopt;
  });

  // 5. the sufficiency conditions really are sufficient
  criterion(5, "sufficiency conditions certify stable profiles", 5.0,
            []() -> std::optional<std::string> {
    {
      // clean selections: the budget sits where the risk arrives
      const Instance inst(1, {true, false, true},
                          {CountySpec{0, {0}}, CountySpec{1, {1, 2}}},
                          {{0, 1, 5}});
      const ArcSets sets = build_arc_sets(inst);
      const StrategyProfile ng = non_game_profile(inst, sets);
      if (sufficiency_condition(inst, ng) != SufficiencyCondition::AllUninfested)
        return "clean-selection condition not recognized";
      if (!check_separation(inst, sets, UtilityKind::Selfish, ng).is_pne)
        return "clean-selection profile unstable";
    }
    {
      // single type, everything infested: no risky traffic can exist
      const Instance inst(1, {true, true, true, true},
                          {CountySpec{1, {0, 1}}, CountySpec{1, {2, 3}}}, {});
      const ArcSets sets = build_arc_sets(inst);
      const StrategyProfile ng = non_game_profile(inst, sets);
      if (sufficiency_condition(inst, ng) !=
          SufficiencyCondition::AllInfestedSingleAis)
        return "all-infested condition not recognized";
      if (!check_separation(inst, sets, UtilityKind::Selfish, ng).is_pne)
        return "all-infested profile unstable";
    }
    {
      // zero budgets: nothing can be selected, vacuously clean
      const Instance inst(2, {true, false},
                          {CountySpec{0, {0}}, CountySpec{0, {1}}},
                          {{0, 1, 7}});
      const ArcSets sets = build_arc_sets(inst);
      const StrategyProfile ng = non_game_profile(inst, sets);
      if (sufficiency_condition(inst, ng) != SufficiencyCondition::AllUninfested)
        return "empty selection not recognized as vacuous";
      if (!check_separation(inst, sets, UtilityKind::Selfish, ng).is_pne)
        return "empty profile unstable under zero budgets";
    }
    return std::nullopt;
  });

  // 6. every search algorithm agrees with the exhaustive oracle
  criterion(6, "searches agree with exhaustive enumeration", 300.0,
            []() -> std::optional<std::string> {
    std::vector<std::pair<std::string, Instance>> cases;
    cases.emplace_back("single_type", counterexample_single_type());
    cases.emplace_back("multi_type", counterexample_multi_type());
    for (std::uint64_t s = 1; s <= 18; ++s) {
      GenParams gp;
      gp.counties = 2 + static_cast<int>(s % 2);
      gp.lakes_per_county = 4 + static_cast<int>(s % 2);
      gp.num_ais_types = 1 + static_cast<int>(s % 2);
      gp.budget_ratio = 0.6;
      gp.seed = 2000 + s;
      cases.emplace_back(gen_label(gp), generate(gp));
    }

    for (const auto& [name, inst] : cases) {
      const ArcSets sets = build_arc_sets(inst);
      const EnumeratePneResult oracle = enumerate_pne(inst, sets);

      DynamicsConfig cfg;
      cfg.t_max = 40;
      cfg.init_max = 3;
      cfg.seed = 77;

      const BrsResult brs = brs_free(inst, sets, zero_profile(inst), cfg);
      if (brs.pne && !in_list(oracle.pnes, *brs.pne))
        return name + ": best-response result not an equilibrium";

      const BrPlusResult brp = br_plus(inst, sets, zero_profile(inst), cfg);
      if (brp.best && !in_list(oracle.pnes, *brp.best))
        return name + ": improvement result not an equilibrium";

      const ZrResult z = zr(inst, sets, std::nullopt, cfg);
      if (z.status == ZrStatus::PneFound) {
        if (oracle.pnes.empty())
          return name + ": cut search invented an equilibrium";
        if (!in_list(oracle.pnes, *z.pne))
          return name + ": cut search result not an equilibrium";
        if (phi(inst, *z.pne) != oracle.phis.front())
          return name + ": cut search missed the best potential";
      } else if (z.status == ZrStatus::NoPneCertified) {
        if (!oracle.pnes.empty())
          return name + ": cut search denied an existing equilibrium";
      } else {
        return name + ": cut search expired without a verdict";
      }
      for (const auto& cut : z.cuts)
        for (const auto& p : oracle.pnes)
          if (!satisfies(inst, cut, p))
            return name + ": a cut excluded a true equilibrium";
    }
    return std::nullopt;
  });

  // 7. the exact solver matches brute force across 200 structured models
  criterion(7, "solver matches brute force on 200 models", 120.0,
            []() -> std::optional<std::string> {
    Rng rng(4242);
    int checked = 0;
    while (checked < 200) {
      GenParams gp;
      gp.counties = 2 + static_cast<int>(rand_below(rng, 2));
      gp.lakes_per_county = 3 + static_cast<int>(rand_below(rng, 2));
      gp.num_ais_types = 1 + static_cast<int>(rand_below(rng, 3));
      gp.budget_ratio = 0.6;
      gp.seed = 3000 + static_cast<std::uint64_t>(checked);
      const Instance inst = generate(gp);
      if (inst.num_lakes() > 12) continue;
      const ArcSets sets = build_arc_sets(inst);

      StrategyProfile rp = zero_profile(inst);
      for (int c = 0; c < inst.num_counties(); ++c) {
        const auto& lakes = inst.county_lakes(c);
        const int b = std::min<int>(inst.budget(c), lakes.size());
        const int m = b > 0 ? static_cast<int>(rand_below(rng, b + 1)) : 0;
        for (int i : sample_without_replacement(
                 rng, static_cast<int>(lakes.size()), m))
          rp.x[lakes[i]] = 1;
      }

      std::vector<ModelSpec> models;
      models.push_back(build_sb(inst));
      models.push_back(build_best_response(
          inst, sets, static_cast<int>(rand_below(rng, inst.num_counties())),
          rand_below(rng, 2) ? UtilityKind::Selfish : UtilityKind::Altruistic,
          rp));
      models.push_back(build_pne_bounded(inst, sets, rp));
      {
        ModelSpec cutm = build_sb(inst);
        const int c = static_cast<int>(rand_below(rng, inst.num_counties()));
        cutm.constraints.push_back(
            equilibrium_cut(inst, sets, c, county_slice(inst, c, rp)));
        models.push_back(std::move(cutm));
      }

      for (const ModelSpec& m : models) {
        const std::optional<Weight> expect = enumerate_optimum(m);
        const SolveResult got = solve(m);
        if (!expect) {
          if (got.status != SolveStatus::Infeasible)
            return "missed infeasibility at model " + std::to_string(checked);
        } else {
          if (got.status != SolveStatus::Optimal || got.objective != *expect)
            return "objective mismatch at model " + std::to_string(checked);
          for (const auto& con : m.constraints)
            if (!satisfies(inst, con, *got.profile))
              return "constraint violated at model " + std::to_string(checked);
          if (optimistic_root_bound(m) < *expect)
            return "optimistic bound below optimum at model " +
                   std::to_string(checked);
        }
        ++checked;
      }
    }
    return std::nullopt;
  });

  // 8. escalation from a worse equilibrium never loses potential
  criterion(8, "escalation from a worse equilibrium", 60.0,
            []() -> std::optional<std::string> {
    DynamicsConfig cfg;
    {
      // two tied equilibria: nothing to gain, and the scheme must say so
      const Instance inst = counterexample_single_type();
      const ArcSets sets = build_arc_sets(inst);
      const BrPlusResult r =
          br_plus(inst, sets, profile_of(inst, {3, 4, 7}), cfg);
      if (!r.best || phi(inst, *r.best) != 30)
        return "tied case lost potential";
      if (r.exit != BrPlusExit::BoundedNoImprove &&
          r.exit != BrPlusExit::NoProgress)
        return "tied case exited for the wrong reason";
    }
    {
      // eight equilibria with potentials 91..123: start from the worst
      GenParams gp;
      gp.counties = 2;
      gp.lakes_per_county = 4;
      gp.num_ais_types = 2;
      gp.budget_ratio = 0.5;
      gp.seed = 4;
      const Instance inst = generate(gp);
      const ArcSets sets = build_arc_sets(inst);
      const EnumeratePneResult oracle = enumerate_pne(inst, sets);
      if (oracle.pnes.size() < 2 || oracle.phis.front() == oracle.phis.back())
        return "scouted instance no longer has spread equilibria";
      const StrategyProfile worst = oracle.pnes.back();
      const Weight worst_phi = oracle.phis.back();
      const BrPlusResult r = br_plus(inst, sets, worst, cfg);
      if (!r.best) return "spread case found nothing";
      if (!in_list(oracle.pnes, *r.best))
        return "spread case ended off the equilibrium list";
      const Weight got = phi(inst, *r.best);
      if (got < worst_phi) return "spread case lost potential";
      if (got == worst_phi && r.exit != BrPlusExit::BoundedNoImprove &&
          r.exit != BrPlusExit::NoProgress)
        return "spread case stalled for the wrong reason";
    }
    return std::nullopt;
  });

  // 9. experiment plans are deterministic, workers included
  criterion(9, "experiment plans replay identically", 60.0,
            []() -> std::optional<std::string> {
    GenParams gp;
    gp.counties = 2;
    gp.lakes_per_county = 4;
    gp.num_ais_types = 2;
    gp.budget_ratio = 0.6;
    gp.seed = 17;

    ExperimentPlan plan;
    const std::string data = EBMC_DATA_DIR;
    plan.instances = {file_source(data + "/demo.json"),
                      file_source(data + "/counterexample_multi_type.json"),
                      generated_source(gp)};
    plan.algos.assign(std::begin(kAllAlgos), std::end(kAllAlgos));
    plan.seed = 5;
    plan.t_max = 10;
    plan.init_max = 2;

    const auto scrub = [](std::vector<ResultRow> rows) {
      for (ResultRow& r : rows) r.elapsed_s.reset();
      std::vector<std::string> lines;
      for (const ResultRow& r : rows) lines.push_back(csv_line(r));
      return lines;
    };
    const auto a = scrub(run_plan(plan));
    const auto b = scrub(run_plan(plan));
    ExperimentPlan wide = plan;
    wide.workers = 3;
    const auto c = scrub(run_plan(wide));
    if (a.size() != 30) return "expected 30 rows";
    if (a != b) return "two serial runs disagreed";
    if (a != c) return "parallel run disagreed";
    return std::nullopt;
  });

  // 10. the schemes handle a batch of 20-lake instances quickly
  criterion(10, "batch of 20-lake instances within budget", 60.0,
             []() -> std::optional<std::string> {
    ExperimentPlan plan;
    std::vector<GenParams> sources;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      GenParams gp;
      gp.counties = 4;
      gp.lakes_per_county = 5;
      gp.num_ais_types = 1;
      gp.budget_ratio = 0.3;
      gp.seed = 5000 + s;
      sources.push_back(gp);
      plan.instances.push_back(generated_source(gp));
    }
    plan.algos = {Algo::Brs0, Algo::Brp0};
    plan.t_max = 60;
    plan.init_max = 3;
    plan.time_limit_bounded = 10.0;
    const std::vector<ResultRow> rows = run_plan(plan);
    if (rows.size() != 20) return "expected 20 rows";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ResultRow& row = rows[i];
      if (!row.error.empty()) return row.instance + ": " + row.error;
      if (row.status != "pne" && row.status != "no_pne")
        return row.instance + ": unexpected status " + row.status;
      if (row.status == "pne") {
        const Instance inst = generate(sources[i / 2]);
        const ArcSets sets = build_arc_sets(inst);
        DynamicsConfig cfg;
        cfg.t_max = plan.t_max;
        cfg.init_max = plan.init_max;
        cfg.bounded_time_limit_s = plan.time_limit_bounded;
        cfg.seed = derive_seed(plan.seed, (i / 2) * 64 +
                                              static_cast<std::uint64_t>(
                                                  row.algorithm == "BRS"
                                                      ? Algo::Brs0
                                                      : Algo::Brp0));
        // re-derive the same run and verify its equilibrium independently
        std::optional<StrategyProfile> pne;
        if (row.algorithm == "BRS")
          pne = brs_free(inst, sets, zero_profile(inst), cfg).pne;
        else
          pne = br_plus(inst, sets, zero_profile(inst), cfg).best;
        if (!pne) return row.instance + ": replay lost the equilibrium";
        if (phi(inst, *pne) != row.phi_value)
          return row.instance + ": replay changed the potential";
        if (!check_separation(inst, sets, UtilityKind::Selfish, *pne).is_pne)
          return row.instance + ": reported profile is not an equilibrium";
      }
    }
    return std::nullopt;
  });

  if (g_fails)
    std::printf("%d criterion(s) failed\n", g_fails);
  else
    std::printf("all criteria passed\n");
  return g_fails;
}
