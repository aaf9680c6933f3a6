#pragma once

#include <optional>

#include "zd/core.hpp"

namespace zd {

/// A cell in a specific room.
struct Loc {
    GridPos room;
    Cell cell;
    auto operator<=>(const Loc&) const = default;
};

/// Cell reached by one step from `at`. Leaving a room is only possible from
/// the outer cell of a door slot into an existing neighbour, which places the
/// player on the facing outer slot cell.
std::optional<Loc> world_step(const Dungeon& d, Loc at, Side dir);

/// Door whose slot holds `c`, if the room has one there.
std::optional<Door> door_at(const Room& r, Cell c);

/// Manhattan distance on the dungeon-wide tile lattice.
int world_distance(Loc a, Loc b);

/// First Triforce item of the dungeon, if any.
std::optional<Loc> triforce_loc(const Dungeon& d);
Loc start_loc(const Dungeon& d);

}  // namespace zd
