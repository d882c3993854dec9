#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ebmc/dynamics.hpp"
#include "ebmc/equilibrium.hpp"
#include "ebmc/experiment.hpp"
#include "ebmc/fixtures.hpp"
#include "ebmc/generator.hpp"
#include "ebmc/instance.hpp"
#include "ebmc/io.hpp"
#include "ebmc/verify.hpp"

namespace {

using namespace ebmc;

std::vector<double> parse_prob_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& cell : detail::split(text, ',')) {
    try {
      out.push_back(std::stod(detail::trim(cell)));
    } catch (const std::exception&) {
      throw InvalidParams("bad probability \"" + cell + "\"");
    }
  }
  return out;
}

GenParams parse_gen_spec(const std::string& text) {
  const auto cells = detail::split(text, ',');
  if (cells.size() < 4 || cells.size() > 5)
    throw InvalidParams("--gen wants counties,lakes,types,budget_ratio[,seed]");
  GenParams p;
  long long v;
  if (!detail::parse_ll(cells[0], v)) throw InvalidParams("bad county count");
  p.counties = static_cast<int>(v);
  if (!detail::parse_ll(cells[1], v)) throw InvalidParams("bad lake count");
  p.lakes_per_county = static_cast<int>(v);
  if (!detail::parse_ll(cells[2], v)) throw InvalidParams("bad type count");
  p.num_ais_types = static_cast<int>(v);
  try {
    p.budget_ratio = std::stod(detail::trim(cells[3]));
  } catch (const std::exception&) {
    throw InvalidParams("bad budget ratio \"" + cells[3] + "\"");
  }
  if (cells.size() == 5) {
    if (!detail::parse_ll(cells[4], v)) throw InvalidParams("bad seed");
    p.seed = static_cast<std::uint64_t>(v);
  }
  return p;
}

int print_checks(const std::vector<CheckResult>& checks) {
  int fails = 0;
  for (const CheckResult& c : checks) {
    if (c.ok) {
      std::printf("ok   %s\n", c.name.c_str());
    } else {
      ++fails;
      std::printf("FAIL %s: %s\n", c.name.c_str(), c.detail.c_str());
    }
  }
  return fails;
}

std::string selected_str(const StrategyProfile& p) {
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

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-weighted budgeted maximum coverage games"};
  app.require_subcommand(1);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "write a random instance");
  GenParams gen_params;
  std::vector<std::string> prob_lists;
  double edge_deletion = -1.0;
  std::string gen_out;
  gen_cmd->add_option("--counties", gen_params.counties, "number of counties")
      ->required();
  gen_cmd
      ->add_option("--lakes-per-county", gen_params.lakes_per_county,
                   "lakes in each county")
      ->required();
  gen_cmd->add_option("--ais-types", gen_params.num_ais_types,
                      "number of AIS types")
      ->required();
  gen_cmd->add_option("--budget-ratio", gen_params.budget_ratio,
                      "budget as a share of infested lakes (default 0.3)");
  gen_cmd->add_option("--edge-deletion", edge_deletion,
                      "share of arcs to delete (default 0.2 single-type, 0.5)");
  gen_cmd->add_option("--traffic-min", gen_params.traffic_min,
                      "minimum boats per arc");
  gen_cmd->add_option("--traffic-max", gen_params.traffic_max,
                      "maximum boats per arc");
  gen_cmd->add_option("--infestation-probs", prob_lists,
                      "candidate probabilities for one type, comma separated; "
                      "repeat per type");
  gen_cmd->add_option("--seed", gen_params.seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "output instance file")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "run algorithms, emit CSV");
  std::vector<std::string> run_files;
  std::vector<std::string> run_gens;
  std::string algo_list = "sb,sbw,brs0,brs-sbw,brp0,brp-sbw,zr,zr-sbw,zr-pne1,zr-pne2";
  ExperimentPlan plan;
  double tl_sb = -1, tl_sbw = 300, tl_zr = -1, tl_bounded = 300;
  std::string run_out;
  run_cmd->add_option("instances", run_files, "instance files");
  run_cmd->add_option("--gen", run_gens,
                      "generate an instance: counties,lakes,types,budget_ratio"
                      "[,seed]; repeatable");
  run_cmd->add_option("--algos", algo_list, "comma separated algorithm list");
  run_cmd->add_option("--seed", plan.seed, "base seed for all runs");
  run_cmd->add_option("--t-max", plan.t_max, "rounds before a random restart");
  run_cmd->add_option("--init-max", plan.init_max, "attempts per scheme");
  run_cmd->add_option("--time-limit-sb", tl_sb, "seconds for the exact solve");
  run_cmd->add_option("--time-limit-sbw", tl_sbw,
                      "seconds for the warm-start solve (default 300)");
  run_cmd->add_option("--time-limit-zr", tl_zr, "seconds for the cut loop");
  run_cmd->add_option("--time-limit-bounded", tl_bounded,
                      "seconds per improvement solve (default 300)");
  run_cmd->add_option("--workers", plan.workers, "parallel instances");
  run_cmd->add_option("--out", run_out, "CSV file (default stdout)");

  // verify-counterexamples
  auto* cex_cmd = app.add_subcommand(
      "verify-counterexamples", "check the claimed no-equilibrium instances");
  std::string data_dir = "data";
  cex_cmd->add_option("--data-dir", data_dir, "directory with instance files");

  // verify-theory
  auto* theory_cmd =
      app.add_subcommand("verify-theory", "check identities on an instance");
  std::string theory_file;
  std::uint64_t theory_seed = 0;
  int theory_profiles = 100, theory_deviations = 100;
  theory_cmd->add_option("instance", theory_file, "instance file")->required();
  theory_cmd->add_option("--seed", theory_seed, "sampling seed");
  theory_cmd->add_option("--profiles", theory_profiles, "sampled profiles");
  theory_cmd->add_option("--deviations", theory_deviations,
                         "sampled deviations");

  // enumerate-pne
  auto* enum_cmd = app.add_subcommand(
      "enumerate-pne", "list every pure equilibrium of a small instance");
  std::string enum_file;
  std::string enum_kind = "selfish";
  std::uint64_t enum_cap = 10'000'000;
  enum_cmd->add_option("instance", enum_file, "instance file")->required();
  enum_cmd->add_option("--kind", enum_kind, "selfish or altruistic")
      ->check(CLI::IsMember({"selfish", "altruistic"}));
  enum_cmd->add_option("--cap", enum_cap, "largest profile space to accept");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      if (edge_deletion >= 0.0) gen_params.edge_deletion_ratio = edge_deletion;
      for (const std::string& text : prob_lists)
        gen_params.infestation_prob_choices.push_back(parse_prob_list(text));
      const Instance inst = generate(gen_params);
      save_instance(inst, gen_out);
      std::printf("wrote %s: lakes=%d counties=%d arcs=%d\n", gen_out.c_str(),
                  inst.num_lakes(), inst.num_counties(), inst.num_arcs());
      return 0;
    }

    if (*run_cmd) {
      for (const std::string& f : run_files)
        plan.instances.push_back(file_source(f));
      for (const std::string& g : run_gens)
        plan.instances.push_back(generated_source(parse_gen_spec(g)));
      if (plan.instances.empty())
        throw InvalidParams("nothing to run: pass instance files or --gen");
      for (const std::string& token : detail::split(algo_list, ',')) {
        const auto a = parse_algo(detail::trim(token));
        if (!a) throw InvalidParams("unknown algorithm \"" + token + "\"");
        plan.algos.push_back(*a);
      }
      if (tl_sb >= 0) plan.time_limit_sb = tl_sb;
      plan.time_limit_sbw = tl_sbw;
      if (tl_zr >= 0) plan.time_limit_zr = tl_zr;
      plan.time_limit_bounded = tl_bounded;
      const std::vector<ResultRow> rows = run_plan(plan);
      if (run_out.empty()) {
        write_csv(std::cout, rows);
      } else {
        std::ofstream out(run_out);
        if (!out) throw IoError("cannot open " + run_out + " for writing");
        write_csv(out, rows);
        std::printf("wrote %s: %zu rows\n", run_out.c_str(), rows.size());
      }
      return 0;
    }

    if (*cex_cmd) {
      int fails = 0;
      {
        const Instance inst =
            load_instance(data_dir + "/counterexample_multi_type.json");
        const ArcSets sets = build_arc_sets(inst);
        fails += print_checks(verify_counterexample(
            inst, sets, counterexample_multi_type_rules(), "multi_type"));
      }
      {
        const Instance inst =
            load_instance(data_dir + "/counterexample_single_type.json");
        const ArcSets sets = build_arc_sets(inst);
        fails += print_checks(verify_counterexample(
            inst, sets, counterexample_single_type_rules(), "single_type"));
      }
      if (fails) std::printf("%d check(s) failed\n", fails);
      return fails ? 1 : 0;
    }

    if (*theory_cmd) {
      const Instance inst = load_instance(theory_file);
      const ArcSets sets = build_arc_sets(inst);
      const int fails = print_checks(verify_theory(
          inst, sets, theory_seed, theory_profiles, theory_deviations));
      return fails ? 1 : 0;
    }

    if (*enum_cmd) {
      const Instance inst = load_instance(enum_file);
      const ArcSets sets = build_arc_sets(inst);
      const UtilityKind kind = enum_kind == "selfish" ? UtilityKind::Selfish
                                                      : UtilityKind::Altruistic;
      const EnumeratePneResult r = enumerate_pne(inst, sets, kind, enum_cap);
      for (std::size_t i = 0; i < r.pnes.size(); ++i)
        std::printf("pne %s phi=%lld\n", selected_str(r.pnes[i]).c_str(),
                    static_cast<long long>(r.phis[i]));
      std::printf("%zu equilibrium(s) among %llu profiles\n", r.pnes.size(),
                  static_cast<unsigned long long>(r.profiles_checked));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
