#pragma once

#include <string>

#include "holo/pseudogroup.hpp"

namespace holo {

// Plain-text pseudogroup description:
//
//   [[component]]
//   core = [-1, 1]
//   extended = [-1.125, 1.125]
//
//   [[generator]]
//   id = "h"
//   kind = "affine"            # affine | moebius | hermite
//   params = [2, 0]            # slope,offset | a,b,c,d
//   component = 0
//   target = 0
//   domain = [-0.5, 0.5]
//   extended_domain = [-0.5625, 0.5625]
//   inverse_of = "h^-1"        # optional; inverses auto-added when absent
//   identity = false           # optional
//
// hermite generators carry knots/values/derivs arrays instead of params.
// Missing inverses and identities are added at load. Throws ParseError
// (line, field) or ValidationError (named invariant).

Pseudogroup load_config_text(const std::string& text);
Pseudogroup load_config_file(const std::string& path);

std::string dump_config(const Pseudogroup& pg);

}  // namespace holo
