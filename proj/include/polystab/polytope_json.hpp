#pragma once

#include <optional>
#include <string>

#include "polystab/reductions.hpp"

namespace polystab {

// On-disk polytope document:
//   {"n": int, "k": int, "matrices": [[row-major reals]...],
//    "meta": {"kind": str, "j": int, "r": real, "graph": dimacs-str}}
// "meta" is present only for graph-derived polytopes; hand-authored files
// omit it.

std::string polytope_to_json(const MatrixPolytope& p);
std::string instance_to_json(const ReductionInstance& inst);

struct LoadedPolytope {
    MatrixPolytope polytope;
    // Reconstructed from meta and cross-checked against the stored
    // matrices; absent for raw polytopes.
    std::optional<ReductionInstance> instance;
};

// Throws ParseError on malformed documents or when meta disagrees with
// the stored matrices.
LoadedPolytope polytope_from_json(const std::string& text);

} // namespace polystab
