#pragma once

#include <span>
#include <vector>

#include "episode_miner/model.hpp"

namespace epm {

// One single-node episode per alphabet symbol, in id order.
std::vector<Episode> seed_level1(const Alphabet& alphabet);

// Level-wise join. For size-1 inputs: every ordered pair of types times every
// constraint. For size N >= 2: alpha and beta join when alpha minus its first
// node equals beta minus its last node (types and constraints), giving
// alpha extended by beta's last edge and type. Output is sorted and unique.
// Throws InvalidArgument when input sizes differ.
std::vector<Episode> grow(std::span<const Episode> frequent, std::span<const IntervalConstraint> constraints);

}  // namespace epm
