#pragma once

#include <vector>

#include "ebmc/instance.hpp"
#include "ebmc/verify.hpp"

namespace ebmc {

// Two counties of three lakes, two AIS types, budget 1 each. Small enough to
// reason about by hand, rich enough to exercise every code path; the worked
// example across the tests and the README.
//
//   county 0: lakes 0,1,2 (lake 0 carries type 0)
//   county 1: lakes 3,4,5 (lake 3 carries type 1, lake 4 carries type 0)
inline Instance demo_instance() {
  return Instance(
      2,
      {TypeMask{1}, 0, 0, TypeMask{2}, TypeMask{1}, 0},
      {{1, {0, 1, 2}}, {1, {3, 4, 5}}},
      {{0, 1, 1},
       {0, 2, 1},
       {0, 3, 3},
       {0, 5, 1},
       {3, 0, 3},
       {3, 4, 3},
       {3, 5, 3},
       {4, 2, 2}});
}

// Shipped with a claimed deviation table asserting no equilibrium exists for
// a single-type game; verify-counterexamples puts the claim on trial.
//
//   county 0: lakes 0..5 (0,1,2 infested), budget 2
//   county 1: lakes 6..8 (6 infested), budget 1
inline Instance counterexample_single_type() {
  return Instance(
      1,
      {TypeMask{1}, TypeMask{1}, TypeMask{1}, 0, 0, 0, TypeMask{1}, 0, 0},
      {{2, {0, 1, 2, 3, 4, 5}}, {1, {6, 7, 8}}},
      {{0, 3, 5},
       {0, 4, 2},
       {0, 5, 2},
       {1, 3, 5},
       {1, 4, 2},
       {1, 5, 2},
       {2, 4, 3},
       {2, 5, 3},
       {2, 7, 2},
       {6, 3, 10},
       {6, 7, 1},
       {6, 8, 1}});
}

inline std::vector<DeviationRule> counterexample_single_type_rules() {
  return {
      {2, true, 1, {1, 0, 0}},        // lake 2 guarded -> county 1 wants lake 6
      {2, false, 1, {0, 1, 0}},       // lake 2 open    -> county 1 wants lake 7
      {6, true, 0, {1, 1, 0, 0, 0, 0}},   // lake 6 guarded -> county 0 wants 0,1
      {6, false, 0, {0, 0, 1, 1, 0, 0}},  // lake 6 open    -> county 0 wants 2,3
  };
}

// Four lakes in a directed exchange ring, two AIS types, budget 1 each:
// the two counties chase each other forever. Genuinely equilibrium-free.
//
//   county 0: lakes 0,1 (type 0)   county 1: lakes 2,3 (type 1)
inline Instance counterexample_multi_type() {
  return Instance(2,
                  {TypeMask{1}, TypeMask{1}, TypeMask{2}, TypeMask{2}},
                  {{1, {0, 1}}, {1, {2, 3}}},
                  {{0, 2, 1}, {1, 3, 2}, {2, 1, 2}, {3, 0, 1}});
}

inline std::vector<DeviationRule> counterexample_multi_type_rules() {
  return {
      {0, true, 1, {0, 1}},   // lake 0 guarded -> county 1 wants lake 3
      {0, false, 1, {1, 0}},  // lake 0 open    -> county 1 wants lake 2
      {2, true, 0, {1, 0}},   // lake 2 guarded -> county 0 wants lake 0
      {2, false, 0, {0, 1}},  // lake 2 open    -> county 0 wants lake 1
  };
}

}  // namespace ebmc
