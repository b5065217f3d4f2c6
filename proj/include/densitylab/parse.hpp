#pragma once

// Text grammars for sets, index sequences, permutations and measure rules.
// Whitespace is ignored between tokens. The printers (to_string) emit the same
// grammar, so print-then-parse reproduces a rule.

#include <string>

#include "densitylab/measure.hpp"
#include "densitylab/nset.hpp"
#include "densitylab/perm.hpp"
#include "densitylab/sequence.hpp"

namespace densitylab {

SymbolicSet parse_set(const std::string& text);
IndexSequence parse_sequence(const std::string& text);
PermutationRule parse_permutation(const std::string& text);
MeasureRule parse_measure(const std::string& text);

}  // namespace densitylab
