#pragma once

#include <string>
#include <vector>

#include "holo/pseudogroup.hpp"

namespace holo {

// Bundled pseudogroups with known analytic behavior, used by tests and docs.
//
//   doubling                 { 2x on (-0.5, 0.5) }
//   isometric_translation    { x + 0.3 }
//   isometric_rotation_pair  two incommensurate circle rotations (chart
//                            pieces of a Z^2 suspension)
//   ifs_ping_pong            { x/4, (x+3)/4 }
//   morse_smale_suspension   circle map with multipliers 2 and 1/2 plus a
//                            rotation spreading the germ along a dense orbit
//   moebius_slow             { x/(x+1) } restricted off its parabolic point
//
// All builders add inverses and identities and return finalized groups.

Pseudogroup build_example(const std::string& name);

std::vector<std::string> example_names();

// Expected quantity table per example, re-derived by the test suite.
struct ExpectedQuantity {
  std::string quantity;
  double value;
  double tol;
};
std::vector<ExpectedQuantity> example_expectations(const std::string& name);

}  // namespace holo
