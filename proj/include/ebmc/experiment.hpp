#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ebmc/dynamics.hpp"
#include "ebmc/generator.hpp"
#include "ebmc/instance.hpp"
#include "ebmc/io.hpp"
#include "ebmc/rng.hpp"

namespace ebmc {

// Enumerator order is dependency order: warm-started rows come after the
// algorithms that produce their warm starts.
enum class Algo {
  Sb,      // exact social optimum
  Sbw,     // social optimum under a short time limit
  Brs0,    // best-response scheme from the empty profile
  BrsSbw,  // best-response scheme from the Sbw profile
  Brp0,    // improvement scheme from the empty profile
  BrpSbw,  // improvement scheme from the Sbw profile
  Zr,      // cutting-plane equilibrium search, cold
  ZrSbw,   // ... warm-started with the Sbw profile
  ZrPne1,  // ... warm-started with the Brs0 equilibrium
  ZrPne2,  // ... warm-started with the Brp0 equilibrium
};

inline constexpr Algo kAllAlgos[] = {
    Algo::Sb,     Algo::Sbw, Algo::Brs0,  Algo::BrsSbw, Algo::Brp0,
    Algo::BrpSbw, Algo::Zr,  Algo::ZrSbw, Algo::ZrPne1, Algo::ZrPne2};

struct AlgoNames {
  const char* token;  // CLI spelling
  const char* name;   // CSV algorithm column
  const char* init;   // CSV init_label column
};

inline AlgoNames algo_names(Algo a) {
  switch (a) {
    case Algo::Sb: return {"sb", "SB", ""};
    case Algo::Sbw: return {"sbw", "SBW", ""};
    case Algo::Brs0: return {"brs0", "BRS", "0"};
    case Algo::BrsSbw: return {"brs-sbw", "BRS", "sbw"};
    case Algo::Brp0: return {"brp0", "BRP", "0"};
    case Algo::BrpSbw: return {"brp-sbw", "BRP", "sbw"};
    case Algo::Zr: return {"zr", "ZR", ""};
    case Algo::ZrSbw: return {"zr-sbw", "ZR", "sbw"};
    case Algo::ZrPne1: return {"zr-pne1", "ZR", "pne1"};
    case Algo::ZrPne2: return {"zr-pne2", "ZR", "pne2"};
  }
  return {"?", "?", ""};
}

inline std::optional<Algo> parse_algo(const std::string& token) {
  for (Algo a : kAllAlgos)
    if (token == algo_names(a).token) return a;
  return std::nullopt;
}

// either a pre-built instance file or parameters to generate one
struct InstanceSource {
  std::string path;
  std::optional<GenParams> gen;
  std::string label;
};

inline InstanceSource file_source(const std::string& path) {
  std::string label = path;
  if (const auto slash = label.find_last_of('/'); slash != std::string::npos)
    label = label.substr(slash + 1);
  if (label.size() > 5 && label.substr(label.size() - 5) == ".json")
    label = label.substr(0, label.size() - 5);
  return {path, std::nullopt, label};
}

inline InstanceSource generated_source(const GenParams& params) {
  return {"", params, gen_label(params)};
}

struct ExperimentPlan {
  std::vector<InstanceSource> instances;
  std::vector<Algo> algos;
  std::uint64_t seed = 0;
  int t_max = 60;
  int init_max = 3;
  std::optional<double> time_limit_sb;
  std::optional<double> time_limit_sbw = 300.0;
  std::optional<double> time_limit_zr;
  std::optional<double> time_limit_bounded = 300.0;
  int workers = 1;
};

struct ResultRow {
  std::string instance;
  std::string algorithm;
  std::string init_label;
  std::string utility_kind;
  std::optional<Weight> phi_value;
  std::optional<bool> pne_found;
  std::optional<int> rounds;
  std::optional<bool> cycle_detected;
  std::optional<int> cuts_added;
  std::string status;
  std::optional<double> elapsed_s;
  std::string error;
};

inline const char* csv_header() {
  return "instance,algorithm,init_label,utility_kind,phi,pne_found,rounds,"
         "cycle_detected,cuts_added,status,elapsed_s,error";
}

inline std::string csv_line(const ResultRow& r) {
  const auto b = [](std::optional<bool> v) {
    return !v ? std::string() : std::string(*v ? "true" : "false");
  };
  std::string error = r.error;
  for (char& ch : error)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  std::string line = r.instance + "," + r.algorithm + "," + r.init_label + "," +
                     r.utility_kind + ",";
  if (r.phi_value) line += std::to_string(*r.phi_value);
  line += "," + b(r.pne_found) + ",";
  if (r.rounds) line += std::to_string(*r.rounds);
  line += "," + b(r.cycle_detected) + ",";
  if (r.cuts_added) line += std::to_string(*r.cuts_added);
  line += "," + r.status + ",";
  if (r.elapsed_s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *r.elapsed_s);
    line += buf;
  }
  line += "," + error;
  return line;
}

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << csv_header() << '\n';
  for (const ResultRow& r : rows) out << csv_line(r) << '\n';
}

namespace detail {

struct SbwCache {
  std::optional<StrategyProfile> profile;
  Weight objective = 0;
  SolveStatus status = SolveStatus::Infeasible;
  double elapsed_s = 0;
  bool done = false;
};

struct DynCache {
  std::optional<StrategyProfile> pne;
  RunRecord record;
  bool done = false;
};

struct InstanceRun {
  const ExperimentPlan* plan = nullptr;
  std::size_t index = 0;
  std::string label;
  std::optional<Instance> inst;
  std::optional<ArcSets> sets;
  SbwCache sbw;
  DynCache brs0;
  DynCache brp0;

  std::uint64_t algo_seed(Algo a) const {
    return derive_seed(plan->seed,
                       index * 64 + static_cast<std::uint64_t>(a));
  }

  DynamicsConfig config(Algo a) const {
    DynamicsConfig cfg;
    cfg.t_max = plan->t_max;
    cfg.init_max = plan->init_max;
    cfg.seed = algo_seed(a);
    cfg.zr_time_limit_s = plan->time_limit_zr;
    cfg.bounded_time_limit_s = plan->time_limit_bounded;
    return cfg;
  }

  const SbwCache& ensure_sbw() {
    if (!sbw.done) {
      ModelSpec m = build_sb(*inst);
      m.time_limit_s = plan->time_limit_sbw;
      const SolveResult res = solve(m);
      sbw.profile = res.profile;
      sbw.objective = res.objective;
      sbw.status = res.status;
      sbw.elapsed_s = res.elapsed_s;
      sbw.done = true;
    }
    return sbw;
  }

  const DynCache& ensure_brs0() {
    if (!brs0.done) {
      BrsResult r = brs_free(*inst, *sets, zero_profile(*inst),
                             config(Algo::Brs0));
      brs0.pne = std::move(r.pne);
      brs0.record = std::move(r.record);
      brs0.done = true;
    }
    return brs0;
  }

  const DynCache& ensure_brp0() {
    if (!brp0.done) {
      BrPlusResult r =
          br_plus(*inst, *sets, zero_profile(*inst), config(Algo::Brp0));
      brp0.pne = std::move(r.best);
      brp0.record = std::move(r.record);
      brp0.done = true;
    }
    return brp0;
  }
};

inline ResultRow base_row(const InstanceRun& run, Algo a) {
  ResultRow row;
  row.instance = run.label;
  row.algorithm = algo_names(a).name;
  row.init_label = algo_names(a).init;
  return row;
}

inline void fill_solver_row(ResultRow& row, SolveStatus status,
                            const std::optional<StrategyProfile>& profile,
                            Weight objective, double elapsed) {
  row.status = to_string(status);
  if (profile) row.phi_value = objective;
  row.elapsed_s = elapsed;
}

inline void fill_dynamics_row(ResultRow& row, const RunRecord& rec,
                              bool found) {
  row.utility_kind = to_string(UtilityKind::Selfish);
  row.pne_found = found;
  row.phi_value = rec.phi_value;
  row.rounds = rec.rounds;
  row.cycle_detected = rec.cycle_detected;
  row.status = found ? "pne" : "no_pne";
  row.elapsed_s = rec.elapsed_s;
}

inline ResultRow run_algo(InstanceRun& run, Algo a) {
  ResultRow row = base_row(run, a);
  const Instance& inst = *run.inst;
  const ArcSets& sets = *run.sets;

  switch (a) {
    case Algo::Sb: {
      ModelSpec m = build_sb(inst);
      m.time_limit_s = run.plan->time_limit_sb;
      const SolveResult res = solve(m);
      fill_solver_row(row, res.status, res.profile, res.objective,
                      res.elapsed_s);
      break;
    }
    case Algo::Sbw: {
      const SbwCache& c = run.ensure_sbw();
      fill_solver_row(row, c.status, c.profile, c.objective, c.elapsed_s);
      break;
    }
    case Algo::Brs0: {
      const DynCache& c = run.ensure_brs0();
      fill_dynamics_row(row, c.record, c.pne.has_value());
      break;
    }
    case Algo::BrsSbw: {
      const SbwCache& w = run.ensure_sbw();
      if (!w.profile) {
        row.error = "warm start unavailable: social solve returned no profile";
        break;
      }
      BrsResult r = brs_free(inst, sets, *w.profile, run.config(a));
      fill_dynamics_row(row, r.record, r.pne.has_value());
      *row.elapsed_s += w.elapsed_s;
      break;
    }
    case Algo::Brp0: {
      const DynCache& c = run.ensure_brp0();
      fill_dynamics_row(row, c.record, c.pne.has_value());
      break;
    }
    case Algo::BrpSbw: {
      const SbwCache& w = run.ensure_sbw();
      if (!w.profile) {
        row.error = "warm start unavailable: social solve returned no profile";
        break;
      }
      BrPlusResult r = br_plus(inst, sets, *w.profile, run.config(a));
      fill_dynamics_row(row, r.record, r.best.has_value());
      *row.elapsed_s += w.elapsed_s;
      break;
    }
    case Algo::Zr:
    case Algo::ZrSbw:
    case Algo::ZrPne1:
    case Algo::ZrPne2: {
      std::optional<StrategyProfile> warm;
      double warm_elapsed = 0;
      if (a == Algo::ZrSbw) {
        const SbwCache& w = run.ensure_sbw();
        if (!w.profile) {
          row.error = "warm start unavailable: social solve returned no profile";
          return row;
        }
        warm = w.profile;
        warm_elapsed = w.elapsed_s;
      } else if (a == Algo::ZrPne1 || a == Algo::ZrPne2) {
        const DynCache& c =
            a == Algo::ZrPne1 ? run.ensure_brs0() : run.ensure_brp0();
        if (!c.pne) {
          row.error = "warm start unavailable: no equilibrium to start from";
          return row;
        }
        warm = c.pne;
        warm_elapsed = c.record.elapsed_s;
      }
      const ZrResult r = zr(inst, sets, warm, run.config(a));
      row.utility_kind = to_string(UtilityKind::Selfish);
      row.pne_found = r.pne.has_value();
      row.phi_value = r.record.phi_value;
      row.rounds = r.record.rounds;
      row.cuts_added = r.record.cuts_added;
      switch (r.status) {
        case ZrStatus::PneFound: row.status = "pne"; break;
        case ZrStatus::NoPneCertified: row.status = "no_pne"; break;
        case ZrStatus::TimeLimit: row.status = "time_limit"; break;
      }
      row.elapsed_s = r.record.elapsed_s + warm_elapsed;
      break;
    }
  }
  return row;
}

}  // namespace detail

// canonical execution order with duplicates removed
inline std::vector<Algo> normalize_algos(const std::vector<Algo>& algos) {
  std::vector<Algo> out;
  for (Algo a : kAllAlgos)
    if (std::find(algos.begin(), algos.end(), a) != algos.end())
      out.push_back(a);
  return out;
}

// Runs every requested algorithm on every instance. Instances may run in
// parallel; each instance's rows run serially because warm starts chain
// inside an instance. Row order and all stored values are deterministic,
// only elapsed_s varies between runs.
inline std::vector<ResultRow> run_plan(const ExperimentPlan& plan) {
  const std::vector<Algo> algos = normalize_algos(plan.algos);
  std::vector<std::vector<ResultRow>> slots(plan.instances.size());

  const auto work = [&](std::size_t i) {
    detail::InstanceRun run;
    run.plan = &plan;
    run.index = i;
    run.label = plan.instances[i].label;
    try {
      if (plan.instances[i].gen)
        run.inst = generate(*plan.instances[i].gen);
      else
        run.inst = load_instance(plan.instances[i].path);
      run.sets = build_arc_sets(*run.inst);
    } catch (const std::exception& e) {
      for (Algo a : algos) {
        ResultRow row = detail::base_row(run, a);
        row.error = e.what();
        slots[i].push_back(std::move(row));
      }
      return;
    }
    for (Algo a : algos) {
      try {
        slots[i].push_back(detail::run_algo(run, a));
      } catch (const std::exception& e) {
        ResultRow row = detail::base_row(run, a);
        row.error = e.what();
        slots[i].push_back(std::move(row));
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(plan.workers,
                                static_cast<int>(plan.instances.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < plan.instances.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= plan.instances.size()) return;
          work(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  std::vector<ResultRow> rows;
  for (auto& slot : slots)
    for (auto& row : slot) rows.push_back(std::move(row));
  return rows;
}

}  // namespace ebmc
