#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "ebmc/fixtures.hpp"
#include "ebmc/instance.hpp"

using namespace ebmc;

TEST_CASE("constructor enforces the structural invariants") {
  SECTION("a lake in two counties is rejected") {
    CHECK_THROWS_AS(Instance(1, {TypeMask{1}, 0},
                             {{0, {0, 1}}, {0, {1}}}, {}),
                    PartitionViolation);
  }
  SECTION("an unassigned lake is rejected") {
    CHECK_THROWS_AS(Instance(1, {TypeMask{1}, 0}, {{0, {0}}}, {}),
                    PartitionViolation);
  }
  SECTION("self-loops are rejected") {
    CHECK_THROWS_AS(
        Instance(1, {TypeMask{1}, 0}, {{0, {0, 1}}}, {{0, 0, 2}}),
        InvalidInstance);
  }
  SECTION("duplicate arcs are rejected") {
    CHECK_THROWS_AS(Instance(1, {TypeMask{1}, 0}, {{0, {0, 1}}},
                             {{0, 1, 2}, {0, 1, 3}}),
                    InvalidInstance);
  }
  SECTION("budgets beyond the infested count are rejected") {
    CHECK_THROWS_AS(Instance(1, {TypeMask{1}, 0}, {{2, {0, 1}}}, {}),
                    InvalidInstance);
  }
  SECTION("single-type arcs must run infested to uninfested") {
    CHECK_THROWS_AS(Instance(1, {TypeMask{1}, TypeMask{1}}, {{1, {0, 1}}},
                             {{0, 1, 2}}),
                    InvalidInstance);
    CHECK_THROWS_AS(Instance(1, {0, 0}, {{0, {0, 1}}}, {{0, 1, 2}}),
                    InvalidInstance);
  }
  SECTION("infested types outside the type count are rejected") {
    CHECK_THROWS_AS(Instance(1, {TypeMask{2}, 0}, {{0, {0, 1}}}, {}),
                    InvalidInstance);
  }
  SECTION("zero-weight arcs vanish silently") {
    const Instance inst(1, {TypeMask{1}, 0}, {{1, {0, 1}}},
                        {{0, 1, 0}});
    CHECK(inst.num_arcs() == 0);
  }
}

TEST_CASE("demo fixture has the documented shape") {
  const Instance inst = demo_instance();
  CHECK(inst.num_lakes() == 6);
  CHECK(inst.num_counties() == 2);
  CHECK(inst.num_ais_types() == 2);
  CHECK(inst.num_arcs() == 8);
  CHECK(inst.total_weight() == 17);
  CHECK(inst.county_of(0) == 0);
  CHECK(inst.county_of(5) == 1);
  CHECK(inst.budget(0) == 1);
  CHECK(inst.infested_count(0) == 1);
  CHECK(inst.infested_count(1) == 2);
  CHECK(inst.is_infested(0));
  CHECK_FALSE(inst.is_infested(2));
}

TEST_CASE("induced arc sets split internal, inbound and outbound") {
  const Instance inst = demo_instance();
  const ArcSets sets = build_arc_sets(inst);

  CHECK(sets.county[0].internal == std::vector<int>{0, 1});
  CHECK(sets.county[0].inbound == std::vector<int>{4, 7});
  CHECK(sets.county[0].outbound == std::vector<int>{2, 3});
  CHECK(sets.county[0].selfish_support == std::vector<int>{0, 1, 4, 7});
  CHECK(sets.county[0].neighborhood == std::vector<int>{0, 1, 2, 3, 4, 7});
  CHECK(sets.county[1].internal == std::vector<int>{5, 6});
  CHECK(sets.county[1].inbound == std::vector<int>{2, 3});
  CHECK(sets.county[1].outbound == std::vector<int>{4, 7});

  SECTION("matches a set-based recomputation") {
    for (int c = 0; c < inst.num_counties(); ++c) {
      std::set<int> internal, inbound, outbound;
      for (int e = 0; e < inst.num_arcs(); ++e) {
        const bool from_in = inst.county_of(inst.arcs()[e].from) == c;
        const bool to_in = inst.county_of(inst.arcs()[e].to) == c;
        if (from_in && to_in) internal.insert(e);
        if (!from_in && to_in) inbound.insert(e);
        if (from_in && !to_in) outbound.insert(e);
      }
      CHECK(std::set<int>(sets.county[c].internal.begin(),
                          sets.county[c].internal.end()) == internal);
      CHECK(std::set<int>(sets.county[c].inbound.begin(),
                          sets.county[c].inbound.end()) == inbound);
      CHECK(std::set<int>(sets.county[c].outbound.begin(),
                          sets.county[c].outbound.end()) == outbound);
    }
  }

  SECTION("single-county instances keep every arc internal") {
    const Instance solo(2, {TypeMask{1}, 0, 0}, {{1, {0, 1, 2}}},
                        {{0, 1, 4}, {2, 1, 5}});
    const ArcSets s = build_arc_sets(solo);
    CHECK(s.county[0].internal == std::vector<int>{0, 1});
    CHECK(s.county[0].inbound.empty());
    CHECK(s.county[0].outbound.empty());
  }
}

TEST_CASE("every arc lands in exactly one selfish support") {
  const Instance inst = demo_instance();
  ArcSets sets = build_arc_sets(inst);
  CHECK(check_partition_identity(inst, sets));
  CHECK(check_partition_identity(inst));

  SECTION("a corrupted support is caught") {
    ArcSets broken = sets;
    broken.county[0].selfish_support.pop_back();
    CHECK_FALSE(check_partition_identity(inst, broken));
    ArcSets doubled = sets;
    doubled.county[1].selfish_support.push_back(0);
    CHECK_FALSE(check_partition_identity(inst, doubled));
  }
}

namespace {

StrategyProfile profile_of(const Instance& inst, std::initializer_list<int> sel) {
  StrategyProfile p = zero_profile(inst);
  for (int l : sel) p.x[l] = 1;
  return p;
}

}  // namespace

TEST_CASE("coverage saturates at any selected endpoint") {
  const Instance inst = demo_instance();
  CHECK(derive_coverage(inst, zero_profile(inst)).y ==
        std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(derive_coverage(inst, profile_of(inst, {0, 1, 2, 3, 4, 5})).y ==
        std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(derive_coverage(inst, profile_of(inst, {2, 3})).y ==
        std::vector<std::uint8_t>{0, 1, 1, 0, 1, 1, 1, 1});
}

TEST_CASE("potential and utilities on the demo fixture") {
  const Instance inst = demo_instance();
  const ArcSets sets = build_arc_sets(inst);

  CHECK(phi(inst, zero_profile(inst)) == 0);
  CHECK(phi(inst, profile_of(inst, {0, 1, 2, 3, 4, 5})) == 17);
  CHECK(phi(inst, profile_of(inst, {2, 3})) == 15);

  CHECK(utility(inst, sets, UtilityKind::Selfish, 0,
                profile_of(inst, {0, 3})) == 5);
  CHECK(utility(inst, sets, UtilityKind::Selfish, 0,
                profile_of(inst, {2, 3})) == 6);
  CHECK(utility(inst, sets, UtilityKind::Selfish, 1,
                profile_of(inst, {2, 3})) == 9);
  CHECK(utility(inst, sets, UtilityKind::Selfish, 1, zero_profile(inst)) == 0);

  SECTION("altruistic utility adds the outbound arcs") {
    const StrategyProfile p = profile_of(inst, {0, 3});
    const Weight selfish = utility(inst, sets, UtilityKind::Selfish, 0, p);
    const Weight altruistic = utility(inst, sets, UtilityKind::Altruistic, 0, p);
    CHECK(altruistic == selfish + coverage_value(inst, sets.county[0].outbound, p));
    CHECK(altruistic == 9);
  }

  SECTION("potential equals the sum of selfish utilities") {
    for (auto sel : {std::initializer_list<int>{}, {0}, {2, 3}, {1, 5},
                     {0, 4}}) {
      const StrategyProfile p = profile_of(inst, sel);
      CHECK(phi(inst, p) == utility(inst, sets, UtilityKind::Selfish, 0, p) +
                                utility(inst, sets, UtilityKind::Selfish, 1, p));
    }
  }
}

TEST_CASE("profile helpers") {
  const Instance inst = demo_instance();
  CHECK(feasible(inst, zero_profile(inst)));
  CHECK(feasible(inst, profile_of(inst, {2, 3})));
  CHECK_FALSE(feasible(inst, profile_of(inst, {0, 1})));

  StrategyProfile p = profile_of(inst, {2, 3});
  CHECK(county_slice(inst, 0, p) == std::vector<std::uint8_t>{0, 0, 1});
  apply_slice(inst, 0, {1, 0, 0}, p);
  CHECK(p == profile_of(inst, {0, 3}));
}
