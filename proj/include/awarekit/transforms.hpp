#pragma once

// Constructive transformations between the three model classes:
//   L:  HMS model          -> Kripke lattice model (plus state correspondence)
//   H:  partitional KLM    -> HMS model
//   K:  FH model with KA   -> Kripke lattice model
//   FH: Kripke lattice model -> FH model with atom-generated awareness
// Every output passes its class validator before it is returned.

#include <map>
#include <string>
#include <vector>

#include "awarekit/fh.hpp"
#include "awarekit/hms.hpp"
#include "awarekit/klm.hpp"
#include "awarekit/report.hpp"

namespace awarekit {

/// HMS state s -> {w_X : r^T_{S(s)}(w) = s, X = At(S(s))}.
using StateCorrespondence = std::map<StateId, std::vector<WorldId>>;

struct LTransformResult {
  KripkeLatticeModel model;
  StateCorrespondence correspondence;
  /// D, II, NS of the pointwise map, then "equivalence" of the relations.
  PropertyReport report;
  std::vector<std::string> notes;
};

/// Atoms defined throughout space S: those whose valuation is based at or
/// below S.
AtomSet space_atoms(const HMSModel& m, std::size_t space);

/// Throws ModelError if the frame fails validation, if some realized atom
/// set has no unique least space, or if the output is not a Kripke lattice
/// model.
LTransformResult l_transform(const HMSModel& m);

/// Throws ModelError if some relation is not an equivalence (per-agent
/// witness), CapacityError above the lattice cap or frame size limit.
HMSModel h_transform(const KripkeLatticeModel& k);

/// Throws ModelError if KA fails.
KripkeLatticeModel k_transform(const FHModel& s);

FHModel fh_transform(const KripkeLatticeModel& k);

/// Space name used by h_transform for W_X, e.g. "W{i,l}".
std::string space_name(const AtomSet& vocabulary);

}  // namespace awarekit
