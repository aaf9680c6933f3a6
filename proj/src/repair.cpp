#include "zd/repair.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "zd/dungeon_io.hpp"
#include "zd/raster.hpp"
#include "zd/world.hpp"

namespace zd {

std::string_view poi_kind_name(PoiKind k) {
    switch (k) {
        case PoiKind::Start: return "Start";
        case PoiKind::Door: return "Door";
        case PoiKind::Key: return "Key";
        case PoiKind::PuzzlePre: return "PuzzlePre";
        case PoiKind::PuzzlePost: return "PuzzlePost";
        case PoiKind::Raft: return "Raft";
        case PoiKind::Triforce: return "Triforce";
    }
    return "?";
}

std::vector<Poi> collect_pois(const Dungeon& d) {
    std::vector<Poi> out;
    const Loc start = start_loc(d);
    for (const auto& [pos, room] : d.rooms) {
        if (pos == start.room) out.push_back({PoiKind::Start, pos, start.cell});
        for (Side s : kSides)
            if (room.has_door(s)) out.push_back({PoiKind::Door, pos, door_inner_cell(s)});
        for (const auto& item : room.items) {
            switch (item.kind) {
                case ItemKind::Key: out.push_back({PoiKind::Key, pos, item.cell}); break;
                case ItemKind::Raft: out.push_back({PoiKind::Raft, pos, item.cell}); break;
                case ItemKind::Triforce: out.push_back({PoiKind::Triforce, pos, item.cell}); break;
                default: break;
            }
        }
        if (room.puzzle) {
            out.push_back({PoiKind::PuzzlePre, pos, room.puzzle->prePush});
            out.push_back({PoiKind::PuzzlePost, pos, room.puzzle->postPush});
        }
    }
    return out;
}

namespace {

struct State {
    Loc at;
    std::uint64_t items = 0;   // collected keys and rafts
    std::uint64_t locks = 0;   // opened Locked doors
    std::uint64_t pushed = 0;  // pushed puzzle blocks
    bool operator==(const State&) const = default;
};

struct StateHash {
    std::size_t operator()(const State& s) const {
        std::uint64_t h = splitmix64(static_cast<std::uint64_t>(s.at.room.x) * 0x10001 +
                                     static_cast<std::uint64_t>(s.at.room.y));
        h = splitmix64(h ^ static_cast<std::uint64_t>(s.at.cell.x * 64 + s.at.cell.y));
        h = splitmix64(h ^ s.items);
        h = splitmix64(h ^ s.locks);
        return splitmix64(h ^ s.pushed);
    }
};

struct Index {
    std::map<Loc, int> keyBit;
    std::map<Loc, int> raftBit;
    std::uint64_t keyMask = 0;
    std::uint64_t raftMask = 0;
    std::map<DoorId, int> lockBit;
    std::map<GridPos, int> puzzleBit;
};

class Searcher {
public:
    explicit Searcher(const Dungeon& d) : d_(d) {
        int bit = 0;
        for (const auto& [pos, room] : d.rooms) {
            for (const auto& item : room.items) {
                if (bit >= 64) throw Error("too many collectible items for the solver");
                if (item.kind == ItemKind::Key) {
                    idx_.keyBit[{pos, item.cell}] = bit;
                    idx_.keyMask |= 1ULL << bit++;
                } else if (item.kind == ItemKind::Raft) {
                    idx_.raftBit[{pos, item.cell}] = bit;
                    idx_.raftMask |= 1ULL << bit++;
                }
            }
        }
        int lock = 0, puzzle = 0;
        for (const auto& [pos, room] : d.rooms) {
            for (Side s : kSides) {
                const auto& door = room.door(s);
                if (door && door->kind == DoorKind::Locked) {
                    DoorId id = canonical_door(pos, s);
                    if (!idx_.lockBit.count(id)) idx_.lockBit[id] = lock++;
                }
            }
            if (room.puzzle) idx_.puzzleBit[pos] = puzzle++;
        }
        if (lock > 64 || puzzle > 64) throw Error("too many locks or puzzles for the solver");
    }

    struct Move {
        State next;
        int cost = 1;
    };

    // Applies one move to `s`. Mirrors the game rules with enemies removed
    // and bombs unlimited.
    std::optional<Move> apply(const State& s, Side dir) const {
        auto target = world_step(d_, s.at, dir);
        if (!target) return std::nullopt;
        const Room& room = *d_.room_at(target->room);
        State n = s;
        int cost = 1;

        if (auto door = door_at(room, target->cell)) {
            if (room.at(target->cell) != Tile::Floor) return std::nullopt;
            if (slot_door(s.at) != canonical_door(target->room, door->side) &&
                !door_passable(n, target->room, *door))
                return std::nullopt;
            n.at = *target;
        } else if (door_slot_side(target->cell)) {
            return std::nullopt;
        } else {
            Tile t = room.at(target->cell);
            if (t == Tile::Wall) return std::nullopt;
            if (t == Tile::Water) {
                if (!(s.items & idx_.raftMask)) return std::nullopt;
                Cell far = step(target->cell, dir);
                if (!in_interior(far) || room.at(far) != Tile::Floor) return std::nullopt;
                if (blocked_by_puzzle(s, target->room, far)) return std::nullopt;
                n.at = {target->room, far};
                cost = 2;
            } else if (blocked_by_puzzle(s, target->room, target->cell)) {
                const auto& p = *room.puzzle;
                const int bit = idx_.puzzleBit.at(target->room);
                const bool pushed = (s.pushed >> bit) & 1;
                if (pushed || s.at.room != target->room || s.at.cell != p.prePush || dir != p.pushDirection)
                    return std::nullopt;
                if (room.at(p.postPush) != Tile::Floor) return std::nullopt;
                n.pushed |= 1ULL << bit;
                n.at = *target;
            } else {
                n.at = *target;
            }
        }

        if (auto it = idx_.keyBit.find(n.at); it != idx_.keyBit.end()) n.items |= 1ULL << it->second;
        if (auto it = idx_.raftBit.find(n.at); it != idx_.raftBit.end()) n.items |= 1ULL << it->second;
        return Move{n, cost};
    }

    std::optional<DoorId> slot_door(Loc at) const {
        auto door = door_at(*d_.room_at(at.room), at.cell);
        if (!door) return std::nullopt;
        return canonical_door(at.room, door->side);
    }

    bool blocked_by_puzzle(const State& s, GridPos pos, Cell c) const {
        const Room& room = *d_.room_at(pos);
        if (!room.puzzle) return false;
        const bool pushed = (s.pushed >> idx_.puzzleBit.at(pos)) & 1;
        return c == (pushed ? room.puzzle->postPush : room.puzzle->blockCell);
    }

    // Entering the slot of `door` from outside it. May open a lock.
    bool door_passable(State& s, GridPos pos, const Door& door) const {
        if (door.open) return true;
        switch (door.kind) {
            case DoorKind::Normal:
            case DoorKind::SoftLocked:
            case DoorKind::Bombable: return true;
            case DoorKind::Locked: {
                const int bit = idx_.lockBit.at(canonical_door(pos, door.side));
                if ((s.locks >> bit) & 1) return true;
                const int keys = std::popcount(s.items & idx_.keyMask) - std::popcount(s.locks);
                if (keys < 1) return false;
                s.locks |= 1ULL << bit;
                return true;
            }
            case DoorKind::Puzzle: {
                for (GridPos p : {pos, step(pos, door.side)}) {
                    auto it = idx_.puzzleBit.find(p);
                    if (it != idx_.puzzleBit.end() && ((s.pushed >> it->second) & 1)) return true;
                }
                return false;
            }
        }
        return false;
    }

    SolveResult run() const {
        SolveResult result;
        auto goal = triforce_loc(d_);
        const Loc start = start_loc(d_);
        State s0{start};
        if (auto it = idx_.keyBit.find(start); it != idx_.keyBit.end()) s0.items |= 1ULL << it->second;
        if (auto it = idx_.raftBit.find(start); it != idx_.raftBit.end()) s0.items |= 1ULL << it->second;

        struct Node {
            State parent;
            Side dir = Side::N;
            int g = 0;
            bool root = false;
        };
        std::unordered_map<State, Node, StateHash> best;
        std::unordered_map<State, bool, StateHash> closed;
        std::set<Loc> seenLocs;
        std::set<GridPos> pushedRooms;
        struct Open {
            int f, g;
            std::uint64_t order;
            State s;
            bool operator>(const Open& o) const {
                if (f != o.f) return f > o.f;
                if (g != o.g) return g < o.g;
                return order > o.order;
            }
        };
        std::priority_queue<Open, std::vector<Open>, std::greater<>> open;
        std::uint64_t counter = 0;
        auto h = [&](const State& s) { return goal ? world_distance(s.at, *goal) : 0; };
        best[s0] = Node{s0, Side::N, 0, true};
        open.push({h(s0), 0, counter++, s0});

        std::optional<State> found;
        while (!open.empty()) {
            Open cur = open.top();
            open.pop();
            if (closed.count(cur.s)) continue;
            closed[cur.s] = true;
            ++result.expanded;
            seenLocs.insert(cur.s.at);
            for (const auto& [pos, bit] : idx_.puzzleBit)
                if ((cur.s.pushed >> bit) & 1) pushedRooms.insert(pos);
            if (goal && cur.s.at == *goal) {
                found = cur.s;
                break;
            }
            for (Side dir : kSides) {
                auto mv = apply(cur.s, dir);
                if (!mv || closed.count(mv->next)) continue;
                const int g = cur.g + mv->cost;
                auto it = best.find(mv->next);
                if (it != best.end() && it->second.g <= g) continue;
                best[mv->next] = Node{cur.s, dir, g, false};
                open.push({g + h(mv->next), g, counter++, mv->next});
            }
        }

        for (const Poi& p : collect_pois(d_)) {
            bool seen = seenLocs.count({p.room, p.cell}) > 0;
            if (p.kind == PoiKind::PuzzlePost) seen = pushedRooms.count(p.room) > 0;
            (seen ? result.visited : result.unvisited).push_back(p);
        }
        if (!found) return result;

        result.solved = true;
        std::vector<Side> dirs;
        for (State s = *found; !best.at(s).root; s = best.at(s).parent) dirs.push_back(best.at(s).dir);
        std::reverse(dirs.begin(), dirs.end());

        std::set<DoorId> bombed;
        Loc at = start;
        for (Side dir : dirs) {
            auto target = world_step(d_, at, dir);
            const Room& room = *d_.room_at(target->room);
            auto door = door_at(room, target->cell);
            if (door && door->kind == DoorKind::Bombable && !door->open) {
                DoorId id = canonical_door(target->room, door->side);
                if (slot_door(at) != id && bombed.insert(id).second)
                    result.plan.push_back({ActionKind::Bomb, dir});
            }
            result.plan.push_back({ActionKind::Move, dir});
            at = *target;
            if (room.at(target->cell) == Tile::Water) at.cell = step(target->cell, dir);
        }
        return result;
    }

private:
    const Dungeon& d_;
    Index idx_;
};

}  // namespace

SolveResult solve(const Dungeon& d) { return Searcher(d).run(); }

Room carve(Room room, Cell from, Cell to) {
    for (Cell c : line4(from, to)) {
        if (!in_room(c) || door_slot_side(c)) continue;
        room.set(c, Tile::Floor);
    }
    return room;
}

namespace {

bool productive(const Room& room, Cell a, Cell b) {
    for (Cell c : line4(a, b))
        if (in_room(c) && !door_slot_side(c) && room.at(c) != Tile::Floor) return true;
    return false;
}

}  // namespace

RepairResult repair_loop(Dungeon d, Rng& rng, int maxIterations) {
    RepairResult out;
    std::set<GridPos> touched;
    for (int iter = 0;; ++iter) {
        SolveResult r = solve(d);
        if (r.solved) break;
        if (iter >= maxIterations)
            throw RepairError("repair did not converge after " + std::to_string(maxIterations) + " carves\n" +
                              dungeon_to_text(d));

        struct Choice {
            Poi target;
            std::vector<Poi> partners;
        };
        std::vector<Choice> choices;
        for (const Poi& u : r.unvisited) {
            const Room& room = *d.room_at(u.room);
            Choice c{u, {}};
            for (const Poi& v : r.visited)
                if (v.room == u.room && productive(room, u.cell, v.cell)) c.partners.push_back(v);
            if (c.partners.empty())
                for (const Poi& v : r.unvisited)
                    if (v.room == u.room && v != u && productive(room, u.cell, v.cell)) c.partners.push_back(v);
            if (!c.partners.empty()) choices.push_back(std::move(c));
        }
        if (choices.empty())
            throw RepairError("no carve can change the dungeon, yet it is not beatable\n" + dungeon_to_text(d));

        const Choice& pickChoice = pick(choices, rng);
        const Poi& from = pick(pickChoice.partners, rng);
        Room& room = *d.room_at(pickChoice.target.room);
        room = carve(room, from.cell, pickChoice.target.cell);
        touched.insert(pickChoice.target.room);
        ++out.repairCount;
    }
    d.meta.repairCount += out.repairCount;
    out.roomsRepaired = static_cast<int>(touched.size());
    out.dungeon = std::move(d);
    return out;
}

}  // namespace zd
