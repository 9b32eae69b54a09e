#pragma once

#include <string>
#include <vector>

#include "detdepth/spec.hpp"

namespace detdepth {

// Builds a commitment from its serializable recipe. `requires_prior` names
// are resolved against the basis names first, then the environment moves;
// the commitment is applicable only after every named event has occurred.
Commitment CommitmentFromRecipe(const std::string& name, const CommitmentRecipe& recipe,
                                int universe, const std::vector<std::string>& basis_names,
                                const std::vector<std::string>& env_moves);

// JSON document with keys outcomes, env_moves, basis, admissible_table,
// horizon. Outcomes, moves and commitments are referenced by name.
ExplicitSpec SpecFromJson(const std::string& text);
ExplicitSpec LoadSpecFile(const std::string& path);

// Requires a table-backed spec whose commitments all carry recipes.
std::string SpecToJson(const ExplicitSpec& spec);

// Three candidate values; the environment may retract any one of them.
ExplicitSpec ThreeValuedConsensus();

// Two initial proposals, a third may arrive until the proposal phase is
// closed; the winner is drawn from the closed set.
ExplicitSpec ConsensusServer();

}  // namespace detdepth
