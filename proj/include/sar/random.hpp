#pragma once

#include <cstdint>
#include <random>

#include "sar/dynamics.hpp"
#include "sar/model.hpp"

namespace sar::random {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

double uniform(Rng& rng, double lo, double hi);

/**
 * Random recursive tree on n nodes rooted at 0: every other node is attached to
 * a uniformly chosen earlier node. Non-root labels are permuted and the edge
 * list is shuffled, so edge order and node labels carry no structure.
 */
Arborescence random_tree(Rng& rng, int node_count);

/// Random tree with masses in [0.1, 2] and lengths in [0.1, 1].
SarModel random_model(Rng& rng, int node_count);

/// Valid state: random root, random rod directions, random angular rates.
SystemState random_state(Rng& rng, const SarModel& model, double rate_scale = 2.0);

PlanarMatrix random_forces(Rng& rng, int node_count, double scale = 5.0);

/// Rows u_j = s_j * perp(r_ej), each exactly orthogonal to its rod up to rounding.
PlanarMatrix random_orthogonal_inputs(Rng& rng, const PlanarMatrix& qe, double scale = 5.0);

} // namespace sar::random
