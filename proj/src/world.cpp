#include "zd/world.hpp"

#include <cstdlib>

#include "zd/action.hpp"

namespace zd {

std::optional<Loc> world_step(const Dungeon& d, Loc at, Side dir) {
    Cell next = step(at.cell, dir);
    if (in_room(next)) return Loc{at.room, next};
    auto slot = door_slot_side(at.cell);
    if (slot != dir) return std::nullopt;
    const Room* here = d.room_at(at.room);
    if (!here || !here->has_door(dir)) return std::nullopt;
    auto there = d.neighbour(at.room, dir);
    if (!there) return std::nullopt;
    switch (dir) {
        case Side::N: next.y = kRoomHeight - 1; break;
        case Side::S: next.y = 0; break;
        case Side::E: next.x = 0; break;
        case Side::W: next.x = kRoomWidth - 1; break;
    }
    return Loc{*there, next};
}

std::optional<Door> door_at(const Room& r, Cell c) {
    auto side = door_slot_side(c);
    if (!side) return std::nullopt;
    return r.door(*side);
}

int world_distance(Loc a, Loc b) {
    const int ax = a.room.x * kRoomWidth + a.cell.x, ay = a.room.y * kRoomHeight + a.cell.y;
    const int bx = b.room.x * kRoomWidth + b.cell.x, by = b.room.y * kRoomHeight + b.cell.y;
    return std::abs(ax - bx) + std::abs(ay - by);
}

std::optional<Loc> triforce_loc(const Dungeon& d) {
    for (const auto& [pos, room] : d.rooms)
        for (const auto& item : room.items)
            if (item.kind == ItemKind::Triforce) return Loc{pos, item.cell};
    return std::nullopt;
}

Loc start_loc(const Dungeon& d) {
    GridPos p = d.start_room();
    const Room* r = d.room_at(p);
    return {p, r ? start_cell(*r) : kRoomCenter};
}

std::string action_name(Action a) {
    return std::string(a.kind == ActionKind::Move ? "Move" : "Bomb") + side_char(a.dir);
}

std::optional<Action> action_from_name(std::string_view s) {
    if (s.size() != 5) return std::nullopt;
    Action a;
    if (s.substr(0, 4) == "Move")
        a.kind = ActionKind::Move;
    else if (s.substr(0, 4) == "Bomb")
        a.kind = ActionKind::Bomb;
    else
        return std::nullopt;
    auto side = side_from_char(s[4]);
    if (!side) return std::nullopt;
    a.dir = *side;
    return a;
}

}  // namespace zd
