#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ebmc/errors.hpp"

namespace ebmc {

using Weight = std::int64_t;

// bit t set <=> lake carries AIS type t
using TypeMask = std::uint64_t;

inline constexpr int kMaxAisTypes = 64;

struct Arc {
  int from = 0;
  int to = 0;
  Weight weight = 0;

  friend bool operator==(const Arc& a, const Arc& b) {
    return a.from == b.from && a.to == b.to && a.weight == b.weight;
  }
};

struct CountySpec {
  int budget = 0;
  std::vector<int> lakes;  // global lake ids, order defines the county slice layout
};

// Immutable game instance: lakes partitioned into counties, directed
// boat-traffic arcs weighted by risky boats, per-county budgets.
// The constructor validates every structural invariant and drops
// zero-weight arcs; all later code may assume a well-formed instance.
class Instance {
 public:
  Instance(int num_ais_types, std::vector<TypeMask> infested,
           std::vector<CountySpec> counties, std::vector<Arc> arcs)
      : num_ais_types_(num_ais_types),
        infested_(std::move(infested)),
        counties_(std::move(counties)),
        arcs_(std::move(arcs)) {
    validate_and_finish();
  }

  int num_lakes() const { return static_cast<int>(infested_.size()); }
  int num_counties() const { return static_cast<int>(counties_.size()); }
  int num_ais_types() const { return num_ais_types_; }

  const std::vector<Arc>& arcs() const { return arcs_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  TypeMask infested_types(int lake) const { return infested_[lake]; }
  bool is_infested(int lake) const { return infested_[lake] != 0; }

  int county_of(int lake) const { return lake_county_[lake]; }
  int budget(int county) const { return counties_[county].budget; }
  const std::vector<int>& county_lakes(int county) const {
    return counties_[county].lakes;
  }
  int infested_count(int county) const { return infested_count_[county]; }

  Weight total_weight() const { return total_weight_; }

 private:
  void validate_and_finish() {
    const int n = num_lakes();
    if (num_ais_types_ < 1 || num_ais_types_ > kMaxAisTypes)
      throw InvalidInstance("num_ais_types must be in [1, 64], got " +
                            std::to_string(num_ais_types_));
    for (int l = 0; l < n; ++l) {
      if (num_ais_types_ < kMaxAisTypes &&
          (infested_[l] >> num_ais_types_) != 0)
        throw InvalidInstance("lake " + std::to_string(l) +
                              " infested with a type >= num_ais_types");
    }

    lake_county_.assign(n, -1);
    for (int c = 0; c < num_counties(); ++c) {
      const auto& spec = counties_[c];
      for (int l : spec.lakes) {
        if (l < 0 || l >= n)
          throw PartitionViolation("county " + std::to_string(c) +
                                   " references unknown lake " +
                                   std::to_string(l));
        if (lake_county_[l] != -1)
          throw PartitionViolation("lake " + std::to_string(l) +
                                   " appears in two counties");
        lake_county_[l] = c;
      }
    }
    for (int l = 0; l < n; ++l) {
      if (lake_county_[l] == -1)
        throw PartitionViolation("lake " + std::to_string(l) +
                                 " belongs to no county");
    }

    infested_count_.assign(num_counties(), 0);
    for (int l = 0; l < n; ++l)
      if (is_infested(l)) ++infested_count_[lake_county_[l]];
    for (int c = 0; c < num_counties(); ++c) {
      const int b = counties_[c].budget;
      if (b < 0 || b > infested_count_[c])
        throw InvalidInstance("county " + std::to_string(c) + " budget " +
                              std::to_string(b) +
                              " outside [0, infested lake count " +
                              std::to_string(infested_count_[c]) + "]");
    }

    std::vector<Arc> kept;
    kept.reserve(arcs_.size());
    std::vector<std::pair<int, int>> seen;
    seen.reserve(arcs_.size());
    for (const Arc& a : arcs_) {
      if (a.from < 0 || a.from >= n || a.to < 0 || a.to >= n)
        throw InvalidInstance("arc endpoint out of range: " +
                              std::to_string(a.from) + "->" +
                              std::to_string(a.to));
      if (a.from == a.to)
        throw InvalidInstance("self-loop arc at lake " +
                              std::to_string(a.from));
      if (a.weight < 0)
        throw InvalidInstance("negative arc weight on " +
                              std::to_string(a.from) + "->" +
                              std::to_string(a.to));
      seen.emplace_back(a.from, a.to);
      if (a.weight > 0) kept.push_back(a);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw InvalidInstance("duplicate arc in input");
    arcs_ = std::move(kept);

    if (num_ais_types_ == 1) {
      for (const Arc& a : arcs_) {
        if (!is_infested(a.from) || is_infested(a.to))
          throw InvalidInstance(
              "single-type instance requires every arc to run from an "
              "infested lake to an uninfested lake, violated by " +
              std::to_string(a.from) + "->" + std::to_string(a.to));
      }
    }

    total_weight_ = 0;
    for (const Arc& a : arcs_) total_weight_ += a.weight;
  }

  int num_ais_types_;
  std::vector<TypeMask> infested_;
  std::vector<CountySpec> counties_;
  std::vector<Arc> arcs_;
  std::vector<int> lake_county_;
  std::vector<int> infested_count_;
  Weight total_weight_ = 0;
};

enum class UtilityKind { Selfish, Altruistic };

inline const char* to_string(UtilityKind k) {
  return k == UtilityKind::Selfish ? "selfish" : "altruistic";
}

// Arc indices induced by each county's lake set.
//   internal:        both endpoints in the county
//   inbound:         head in the county, tail elsewhere
//   outbound:        tail in the county, head elsewhere
//   neighborhood:    internal + inbound + outbound (altruistic utility support)
//   selfish_support: internal + inbound            (selfish utility support)
// All lists ascend by arc index.
struct CountyArcs {
  std::vector<int> internal;
  std::vector<int> inbound;
  std::vector<int> outbound;
  std::vector<int> neighborhood;
  std::vector<int> selfish_support;

  const std::vector<int>& support(UtilityKind kind) const {
    return kind == UtilityKind::Selfish ? selfish_support : neighborhood;
  }
};

struct ArcSets {
  std::vector<CountyArcs> county;
};

inline ArcSets build_arc_sets(const Instance& inst) {
  ArcSets sets;
  sets.county.resize(inst.num_counties());
  for (int e = 0; e < inst.num_arcs(); ++e) {
    const Arc& a = inst.arcs()[e];
    const int cf = inst.county_of(a.from);
    const int ct = inst.county_of(a.to);
    if (cf == ct) {
      sets.county[cf].internal.push_back(e);
    } else {
      sets.county[cf].outbound.push_back(e);
      sets.county[ct].inbound.push_back(e);
    }
  }
  for (auto& ca : sets.county) {
    ca.selfish_support.reserve(ca.internal.size() + ca.inbound.size());
    std::merge(ca.internal.begin(), ca.internal.end(), ca.inbound.begin(),
               ca.inbound.end(), std::back_inserter(ca.selfish_support));
    ca.neighborhood.reserve(ca.selfish_support.size() + ca.outbound.size());
    std::merge(ca.selfish_support.begin(), ca.selfish_support.end(),
               ca.outbound.begin(), ca.outbound.end(),
               std::back_inserter(ca.neighborhood));
  }
  return sets;
}

// Every arc must land in exactly one county's selfish support
// (the disjoint-union identity the potential argument rests on).
inline bool check_partition_identity(const Instance& inst,
                                     const ArcSets& sets) {
  std::vector<int> hits(inst.num_arcs(), 0);
  for (const auto& ca : sets.county)
    for (int e : ca.selfish_support) {
      if (e < 0 || e >= inst.num_arcs()) return false;
      ++hits[e];
    }
  return std::all_of(hits.begin(), hits.end(),
                     [](int h) { return h == 1; });
}

inline bool check_partition_identity(const Instance& inst) {
  return check_partition_identity(inst, build_arc_sets(inst));
}

// x[l] == 1 <=> lake l receives an inspection station
struct StrategyProfile {
  std::vector<std::uint8_t> x;

  bool selected(int lake) const { return x[lake] != 0; }
  int size() const { return static_cast<int>(x.size()); }

  friend bool operator==(const StrategyProfile& a, const StrategyProfile& b) {
    return a.x == b.x;
  }
};

inline StrategyProfile zero_profile(const Instance& inst) {
  return StrategyProfile{
      std::vector<std::uint8_t>(static_cast<std::size_t>(inst.num_lakes()), 0)};
}

inline bool feasible(const Instance& inst, const StrategyProfile& p) {
  if (p.size() != inst.num_lakes()) return false;
  for (int c = 0; c < inst.num_counties(); ++c) {
    int used = 0;
    for (int l : inst.county_lakes(c)) used += p.x[l];
    if (used > inst.budget(c)) return false;
  }
  return true;
}

// slice over county lakes, in county_lakes(c) order
inline std::vector<std::uint8_t> county_slice(const Instance& inst, int county,
                                              const StrategyProfile& p) {
  std::vector<std::uint8_t> s;
  s.reserve(inst.county_lakes(county).size());
  for (int l : inst.county_lakes(county)) s.push_back(p.x[l]);
  return s;
}

inline void apply_slice(const Instance& inst, int county,
                        const std::vector<std::uint8_t>& slice,
                        StrategyProfile& p) {
  const auto& lakes = inst.county_lakes(county);
  for (std::size_t i = 0; i < lakes.size(); ++i) p.x[lakes[i]] = slice[i];
}

struct Coverage {
  std::vector<std::uint8_t> y;  // y[e] == 1 <=> arc e has a selected endpoint
};

inline Coverage derive_coverage(const Instance& inst,
                                const StrategyProfile& p) {
  Coverage cov;
  cov.y.resize(inst.arcs().size());
  for (std::size_t e = 0; e < inst.arcs().size(); ++e) {
    const Arc& a = inst.arcs()[e];
    cov.y[e] = (p.x[a.from] || p.x[a.to]) ? 1 : 0;
  }
  return cov;
}

// total weight of the given arcs whose coverage is on under p
inline Weight coverage_value(const Instance& inst,
                             const std::vector<int>& arc_indices,
                             const StrategyProfile& p) {
  Weight v = 0;
  for (int e : arc_indices) {
    const Arc& a = inst.arcs()[e];
    if (p.x[a.from] || p.x[a.to]) v += a.weight;
  }
  return v;
}

// potential: total covered weight over all arcs
inline Weight phi(const Instance& inst, const StrategyProfile& p) {
  Weight v = 0;
  for (const Arc& a : inst.arcs())
    if (p.x[a.from] || p.x[a.to]) v += a.weight;
  return v;
}

inline Weight utility(const Instance& inst, const ArcSets& sets,
                      UtilityKind kind, int county,
                      const StrategyProfile& p) {
  return coverage_value(inst, sets.county[county].support(kind), p);
}

}  // namespace ebmc
