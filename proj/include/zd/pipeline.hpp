#pragma once

#include <cstdint>
#include <vector>

#include "zd/grammar.hpp"
#include "zd/layout.hpp"
#include "zd/repair.hpp"

namespace zd {

struct GeneratedDungeon {
    Dungeon dungeon;
    int roomsRepaired = 0;
    int attempts = 1;
};

/// build_dungeon followed by repair_loop. A seed whose build or repair fails
/// is retried with seeds derived from it, up to `maxAttempts`; the seed that
/// succeeded is stored in meta.seed. Throws GenerationError when all fail.
GeneratedDungeon generate_beatable(const std::vector<RoomSymbol>& backbone, const RuleSet& rules,
                                   const RoomSource& source, std::uint64_t seed, int maxAttempts = 10);

/// Seed of the i-th dungeon of a batch.
std::uint64_t batch_seed(std::uint64_t master, int index);

}  // namespace zd
