#pragma once
#include <vector>

#include "knotcs/wilson_graph.hpp"

namespace knotcs {

inline constexpr int k_enumeration_degree_cap = 4;
inline constexpr int k_integration_degree_cap = 3;

// One representative (canonical labeling, sign +1) per isomorphism class of connected
// trivalent Wilson graphs of the given degree (n + t = 2*degree over all n >= 1),
// ordered by canonical code. Chord self-loops are omitted: such classes are null and
// their integrand vanishes identically, so they contribute neither columns nor
// relation content. Throws std::invalid_argument for degree < 1.
std::vector<WilsonGraph> trivalent_classes(int degree);

// Class representatives of connected graphs with exactly one 4-valent vertex and all
// others trivalent (n + t = 2*degree - 1). A chord loop is allowed only at the
// 4-valent vertex: a loop anywhere else forces every lift to be a null class, making
// the induced relation trivially zero.
std::vector<WilsonGraph> tetravalent_classes(int degree);

// Exhaustive dart-matching enumeration; cost grows like (n + 3t - 1)!!, so this is a
// test oracle for degree <= 3 only.
std::vector<WilsonGraph> trivalent_classes_brute(int degree);

}  // namespace knotcs
