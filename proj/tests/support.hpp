#pragma once

#include "zd/core.hpp"

namespace zd::testing {

inline RoomSymbol sym(const char* name) { return *symbol_from_name(name); }

inline Room open_room() {
    Room r;
    for (Cell c : interior_cells()) r.set(c, Tile::Floor);
    return r;
}

/// Sets the door on both facing sides and floors their slots.
inline void set_door(Dungeon& d, GridPos a, Side s, DoorKind kind, bool open = false) {
    for (auto [p, side] : {std::pair{a, s}, std::pair{step(a, s), opposite(s)}}) {
        Room& r = d.rooms.at(p);
        r.door(side) = Door{side, kind, open};
        for (Cell c : door_slot(side)) r.set(c, Tile::Floor);
    }
}

/// Rooms (0,0)..(count-1,0) joined by open Normal doors. The start is the
/// west end, the Triforce sits on the centre of the east end.
inline Dungeon row(int count, const Room& base = open_room()) {
    Dungeon d;
    for (int i = 0; i < count; ++i) {
        d.rooms[{i, 0}] = base;
        d.graph.add_node(sym(i == 0 ? "s" : (i + 1 == count ? "t" : "e")), i);
        d.positions.push_back({i, 0});
        if (i > 0) d.graph.edges.push_back({i - 1, i});
    }
    d.graph.refresh_endpoints();
    d.rooms[{count - 1, 0}].items.push_back({ItemKind::Triforce, kRoomCenter});
    for (int i = 0; i + 1 < count; ++i) set_door(d, {i, 0}, Side::E, DoorKind::Normal, true);
    return d;
}

}  // namespace zd::testing
