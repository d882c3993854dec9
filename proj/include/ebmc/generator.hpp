#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ebmc/errors.hpp"
#include "ebmc/instance.hpp"
#include "ebmc/rng.hpp"

namespace ebmc {

// risky boats on an arc: the full traffic carries every AIS type present at
// the tail and absent at the head
inline Weight risky_weight(Weight traffic, TypeMask tail_types,
                           TypeMask head_types) {
  return traffic *
         static_cast<Weight>(std::popcount(tail_types & ~head_types));
}

struct GenParams {
  int counties = 1;
  int lakes_per_county = 1;
  int num_ais_types = 1;
  double budget_ratio = 0.3;
  // defaults to 0.2 for a single AIS type, 0.5 otherwise
  std::optional<double> edge_deletion_ratio;
  int traffic_min = 10;
  int traffic_max = 20;
  // per-type candidate lists for the one infestation-probability draw;
  // empty entries (or a short list) fall back to the built-in ladder
  std::vector<std::vector<double>> infestation_prob_choices;
  std::uint64_t seed = 0;
};

// floor(ratio * count) with a nudge so short decimal ratios like 0.3
// land on the intended integer despite binary representation error
inline int floor_ratio(double ratio, int count) {
  return static_cast<int>(ratio * static_cast<double>(count) + 1e-9);
}

// type t draws from the first 5-t rungs of {0.2, 0.4, 0.6, 0.8, 1.0},
// never fewer than one
inline std::vector<double> default_prob_choices(int type) {
  static const double ladder[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  const int count = std::max(1, 5 - type);
  return std::vector<double>(ladder, ladder + count);
}

inline double effective_deletion_ratio(const GenParams& p) {
  if (p.edge_deletion_ratio) return *p.edge_deletion_ratio;
  return p.num_ais_types == 1 ? 0.2 : 0.5;
}

inline void validate(const GenParams& p) {
  if (p.counties < 1) throw InvalidParams("counties must be >= 1");
  if (p.lakes_per_county < 1)
    throw InvalidParams("lakes_per_county must be >= 1");
  if (p.num_ais_types < 1 || p.num_ais_types > kMaxAisTypes)
    throw InvalidParams("num_ais_types must be in [1, 64]");
  if (!(p.budget_ratio > 0.0 && p.budget_ratio <= 1.0))
    throw InvalidParams("budget_ratio must be in (0, 1]");
  const double del = effective_deletion_ratio(p);
  if (!(del >= 0.0 && del <= 1.0))
    throw InvalidParams("edge_deletion_ratio must be in [0, 1]");
  if (p.traffic_min < 1 || p.traffic_max < p.traffic_min)
    throw InvalidParams("traffic range must satisfy 1 <= min <= max");
  for (const auto& choices : p.infestation_prob_choices)
    for (double q : choices)
      if (!(q > 0.0 && q <= 1.0))
        throw InvalidParams("infestation probabilities must be in (0, 1]");
}

// Seeded random instance:
//   1. one infestation probability per type, drawn from its candidate list
//   2. lake-major independent infestation marks
//   3. complete digraph minus self-loops, integer traffic per arc
//   4. floor(ratio * |arcs|) arcs deleted uniformly without replacement
//   5. risky weights; zero-weight arcs vanish
//   6. county budgets floor(budget_ratio * infested count)
// All draws come from one engine in this order, so equal params mean
// byte-identical instances.
inline Instance generate(const GenParams& params) {
  validate(params);
  Rng rng(params.seed);
  const int n = params.counties * params.lakes_per_county;
  const int k = params.num_ais_types;

  std::vector<double> prob(k);
  for (int t = 0; t < k; ++t) {
    std::vector<double> choices =
        (t < static_cast<int>(params.infestation_prob_choices.size()) &&
         !params.infestation_prob_choices[t].empty())
            ? params.infestation_prob_choices[t]
            : default_prob_choices(t);
    prob[t] = choices[rand_below(rng, choices.size())];
  }

  std::vector<TypeMask> infested(n, 0);
  for (int l = 0; l < n; ++l)
    for (int t = 0; t < k; ++t)
      if (rand_bernoulli(rng, prob[t])) infested[l] |= TypeMask{1} << t;

  struct RawArc {
    int from, to;
    Weight traffic;
  };
  std::vector<RawArc> raw;
  raw.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        raw.push_back({i, j, static_cast<Weight>(rand_int(
                                 rng, params.traffic_min, params.traffic_max))});

  const int deleted_count =
      floor_ratio(effective_deletion_ratio(params), static_cast<int>(raw.size()));
  std::vector<std::uint8_t> deleted(raw.size(), 0);
  for (int idx :
       sample_without_replacement(rng, static_cast<int>(raw.size()),
                                  std::min<int>(deleted_count, raw.size())))
    deleted[idx] = 1;

  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (deleted[i]) continue;
    const Weight w =
        risky_weight(raw[i].traffic, infested[raw[i].from], infested[raw[i].to]);
    if (w > 0) arcs.push_back({raw[i].from, raw[i].to, w});
  }

  std::vector<CountySpec> counties(params.counties);
  for (int c = 0; c < params.counties; ++c) {
    auto& spec = counties[c];
    spec.lakes.resize(params.lakes_per_county);
    int infested_here = 0;
    for (int i = 0; i < params.lakes_per_county; ++i) {
      const int l = c * params.lakes_per_county + i;
      spec.lakes[i] = l;
      if (infested[l] != 0) ++infested_here;
    }
    spec.budget =
        std::min(infested_here, floor_ratio(params.budget_ratio, infested_here));
  }

  return Instance(k, std::move(infested), std::move(counties),
                  std::move(arcs));
}

inline std::string gen_label(const GenParams& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%dx%d_k%d_r%.2f_s%llu", p.counties,
                p.lakes_per_county, p.num_ais_types, p.budget_ratio,
                static_cast<unsigned long long>(p.seed));
  return buf;
}

}  // namespace ebmc
