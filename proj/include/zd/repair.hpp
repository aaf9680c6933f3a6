#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zd/action.hpp"
#include "zd/core.hpp"
#include "zd/rng.hpp"

namespace zd {

class RepairError : public Error {
public:
    using Error::Error;
};

enum class PoiKind : std::uint8_t { Start, Door, Key, PuzzlePre, PuzzlePost, Raft, Triforce };
std::string_view poi_kind_name(PoiKind k);

struct Poi {
    PoiKind kind = PoiKind::Door;
    GridPos room;
    Cell cell;
    auto operator<=>(const Poi&) const = default;
};

/// Points of interest of every room, in room order then kind order.
std::vector<Poi> collect_pois(const Dungeon& d);

struct SolveResult {
    bool solved = false;
    std::vector<Action> plan;  // Bomb actions precede the first crossing of each bombable door
    std::size_t expanded = 0;
    std::vector<Poi> visited;
    std::vector<Poi> unvisited;
};

/// A* over (cell, items held, locks opened, puzzles pushed) from the start
/// cell to the Triforce. Enemies are ignored and bombs are unlimited.
SolveResult solve(const Dungeon& d);

/// Floor along line4(from, to), door slot cells excepted.
Room carve(Room room, Cell from, Cell to);

struct RepairResult {
    Dungeon dungeon;
    int repairCount = 0;
    int roomsRepaired = 0;  // distinct rooms touched by a carve
};

/// Carves between a random unvisited POI and a visited (else another
/// unvisited) POI of the same room until the dungeon solves. Only pairs whose
/// line changes at least one tile are drawn. Throws RepairError after
/// `maxIterations` carves or when no such pair remains.
RepairResult repair_loop(Dungeon d, Rng& rng, int maxIterations = 100);

}  // namespace zd
