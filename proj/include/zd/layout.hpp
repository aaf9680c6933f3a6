#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "zd/core.hpp"
#include "zd/gan.hpp"
#include "zd/grammar.hpp"
#include "zd/rng.hpp"

namespace zd {

class PlacementExhausted : public Error {
public:
    using Error::Error;
};
class GenerationError : public Error {
public:
    using Error::Error;
};

struct Placement {
    std::vector<GridPos> positions;  // by node id
    std::vector<Edge> realizedEdges;
    std::vector<Edge> lostEdges;
};

/// Edges in breadth-first order from the start node. Outgoing edges of a
/// node are visited in order of target id.
std::vector<Edge> bfs_edges(const MissionGraph& g);
/// Nodes in the order the breadth-first walk discovers them.
std::vector<int> bfs_order(const MissionGraph& g);

/// Places the start room at (0,0), then every unplaced edge target next to
/// the edge's source, trying the four neighbours in a per-decision random
/// order and undoing the most recent placement when a room has no free
/// neighbour. Throws PlacementExhausted once every alternative has been
/// tried or `maxSteps` placement attempts have been spent.
Placement place_rooms(const MissionGraph& g, Rng& rng, std::size_t maxSteps = 200000);

struct DoorPlan {
    std::vector<std::pair<GridPos, Side>> doors;  // one entry per door pair, canonical side
    std::vector<Edge> realized;
    std::vector<Edge> lost;
};

/// Edges whose endpoints ended up orthogonally adjacent become doors.
DoorPlan realize_doors(const Placement& placement, const MissionGraph& g);
/// Adds Normal open doors (and Floor slot tiles) on both facing sides.
void apply_doors(Dungeon& d, const DoorPlan& plan);

class RoomSource {
public:
    static RoomSource gan(std::shared_ptr<const WeightBundle> weights);
    static RoomSource pool(std::shared_ptr<const std::vector<Room>> rooms);

    SourceKind kind() const { return kind_; }
    Room draw(Rng& rng) const;

private:
    SourceKind kind_ = SourceKind::Gan;
    std::shared_ptr<const WeightBundle> weights_;
    std::shared_ptr<const std::vector<Room>> pool_;
};

struct DecorateOptions {
    double bombableProbability = 0.40;
};

/// Interior Floor cells not taken by an item, an enemy or the puzzle block.
std::vector<Cell> empty_floor_cells(const Room& r);

/// Places enemies, keys, the raft, the puzzle block and the Triforce, turns
/// onward doors into Locked/SoftLocked/Puzzle doors and rolls bombable doors.
/// A missing onward door is recorded in Dungeon::warnings.
Dungeon decorate(Dungeon d, Rng& rng, const DecorateOptions& opts = {});

struct BuildOptions {
    int placementAttempts = 20;
    DecorateOptions decorate;
};

/// expand -> validate -> place_rooms -> fill from source -> doors -> decorate.
Dungeon build_dungeon(const std::vector<RoomSymbol>& backbone, const RuleSet& rules, const RoomSource& source,
                      std::uint64_t seed, const BuildOptions& opts = {});

}  // namespace zd
