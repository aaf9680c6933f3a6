#include "zd/engine.hpp"

#include <algorithm>
#include <cstdlib>

#include "zd/raster.hpp"

namespace zd {

TierParams tier_params(int tier) {
    switch (std::clamp(tier, 0, kMaxTier)) {
        case 0: return {4, 0.30};
        case 1: return {6, 0.60};
        case 2: return {8, 0.90};
        default: return {20, 0.90};
    }
}

std::string_view status_name(Status s) {
    switch (s) {
        case Status::Playing: return "Playing";
        case Status::Won: return "Won";
        case Status::Dead: return "Dead";
    }
    return "?";
}

std::string_view event_type_name(EventType t) {
    switch (t) {
        case EventType::Moved: return "Moved";
        case EventType::Blocked: return "Blocked";
        case EventType::Attacked: return "Attacked";
        case EventType::EnemyKilled: return "EnemyKilled";
        case EventType::Drop: return "Drop";
        case EventType::PickedUp: return "PickedUp";
        case EventType::DoorOpened: return "DoorOpened";
        case EventType::Bombed: return "Bombed";
        case EventType::PuzzleSolved: return "PuzzleSolved";
        case EventType::RoomCleared: return "RoomCleared";
        case EventType::Damaged: return "Damaged";
        case EventType::Died: return "Died";
        case EventType::Restarted: return "Restarted";
        case EventType::Won: return "Won";
    }
    return "?";
}

double GameState::heart_drop_rate() const { return options.heartDropRate.value_or(tier_params(tier).heartDropRate); }

std::optional<Cell> GameState::block_cell(GridPos room) const {
    const Room* r = dungeon->room_at(room);
    if (!r || !r->puzzle) return std::nullopt;
    return rooms.at(room).pushed ? r->puzzle->postPush : r->puzzle->blockCell;
}

const Door* GameState::door(GridPos room, Side side) const {
    auto it = doors.find(canonical_door(room, side));
    return it == doors.end() ? nullptr : &it->second;
}

namespace {

void reset_world(GameState& s) {
    const Dungeon& d = *s.dungeon;
    const TierParams tp = tier_params(s.tier);
    s.hearts = s.maxHearts = tp.hearts;
    s.bombs = 0;
    s.keys = 0;
    s.hasRaft = false;
    s.keysCollected = 0;
    s.locksOpened = 0;
    s.status = Status::Playing;
    s.player = start_loc(d);
    s.rooms.clear();
    s.doors.clear();
    for (const auto& [pos, room] : d.rooms) {
        RoomState rs;
        if (s.options.enemiesEnabled)
            for (const auto& e : room.enemies) rs.enemies.push_back(e.cell);
        rs.items = room.items;
        rs.keyRevealed = rs.enemies.empty();
        s.rooms[pos] = std::move(rs);
        for (Side side : kSides) {
            const auto& door = room.door(side);
            if (!door) continue;
            DoorId id = canonical_door(pos, side);
            Door canon = *door;
            canon.side = id.side;
            s.doors.emplace(id, canon);
        }
    }
}

bool occupied_by_enemy(const RoomState& rs, Cell c) {
    return std::find(rs.enemies.begin(), rs.enemies.end(), c) != rs.enemies.end();
}

class Stepper {
public:
    Stepper(GameState& s, std::vector<Event>& ev) : s_(s), ev_(ev) {}

    void emit(EventType t, GridPos room, Cell cell, std::string detail = {}) {
        ev_.push_back({t, s_.turn, room, cell, std::move(detail)});
    }

    // Opens SoftLocked doors and reveals keys once the room has no enemies.
    void settle_room(GridPos pos, bool announce) {
        RoomState& rs = s_.rooms.at(pos);
        if (!rs.enemies.empty()) return;
        if (announce) emit(EventType::RoomCleared, pos, s_.player.cell);
        rs.keyRevealed = true;
        const Room& room = *s_.dungeon->room_at(pos);
        for (Side side : kSides) {
            if (!room.has_door(side)) continue;
            Door& door = s_.doors.at(canonical_door(pos, side));
            if (door.kind == DoorKind::SoftLocked && !door.open) {
                door.open = true;
                emit(EventType::DoorOpened, pos, door_inner_cell(side), "SoftLocked " + std::string(1, side_char(side)));
            }
        }
    }

    void pick_up() {
        RoomState& rs = s_.rooms.at(s_.player.room);
        for (auto it = rs.items.begin(); it != rs.items.end();) {
            if (it->cell != s_.player.cell || (it->kind == ItemKind::Key && !rs.keyRevealed)) {
                ++it;
                continue;
            }
            const ItemKind kind = it->kind;
            switch (kind) {
                case ItemKind::Key:
                    ++s_.keys;
                    ++s_.keysCollected;
                    break;
                case ItemKind::Raft: s_.hasRaft = true; break;
                case ItemKind::Heart: s_.hearts = std::min(s_.maxHearts, s_.hearts + 1); break;
                case ItemKind::Bomb: ++s_.bombs; break;
                case ItemKind::Triforce:
                    s_.status = Status::Won;
                    emit(EventType::Won, s_.player.room, s_.player.cell);
                    return;
            }
            emit(EventType::PickedUp, s_.player.room, s_.player.cell, std::string(item_kind_name(kind)));
            it = rs.items.erase(it);
        }
    }

    void enter_room(GridPos pos) {
        RoomState& rs = s_.rooms.at(pos);
        if (s_.options.enemiesEnabled && rs.enemies.empty() && s_.bombs == 0 && !s_.options.infiniteBombs &&
            bernoulli(s_.rng, s_.options.respawnChance)) {
            const Room& room = *s_.dungeon->room_at(pos);
            const int count = uniform_int(s_.rng, 1, 3);
            for (int i = 0; i < count; ++i) {
                std::vector<Cell> free;
                for (Cell c : interior_cells())
                    if (room.at(c) == Tile::Floor && c != s_.player.cell && !occupied_by_enemy(rs, c) &&
                        s_.block_cell(pos) != c)
                        free.push_back(c);
                if (free.empty()) break;
                rs.enemies.push_back(pick(free, s_.rng));
            }
        }
        settle_room(pos, false);
    }

    void kill(GridPos pos, Cell cell) {
        RoomState& rs = s_.rooms.at(pos);
        rs.enemies.erase(std::find(rs.enemies.begin(), rs.enemies.end(), cell));
        emit(EventType::Attacked, pos, cell, "player");
        emit(EventType::EnemyKilled, pos, cell);
        if (auto drop = drop_roll(s_, pos, cell)) emit(EventType::Drop, pos, cell, std::string(item_kind_name(*drop)));
        settle_room(pos, rs.enemies.empty());
    }

    std::optional<DoorId> slot_door(Loc at) const {
        auto side = door_slot_side(at.cell);
        if (!side || !s_.dungeon->room_at(at.room)->has_door(*side)) return std::nullopt;
        return canonical_door(at.room, *side);
    }

    // Returns true when the action consumed a turn.
    bool player_move(Side dir) {
        const Dungeon& d = *s_.dungeon;
        auto target = world_step(d, s_.player, dir);
        if (!target) return false;
        const Room& room = *d.room_at(target->room);
        RoomState& rs = s_.rooms.at(target->room);

        if (target->room == s_.player.room && occupied_by_enemy(rs, target->cell)) {
            kill(target->room, target->cell);
            return true;
        }

        if (auto side = door_slot_side(target->cell)) {
            if (!room.has_door(*side) || room.at(target->cell) != Tile::Floor) return false;
            DoorId id = canonical_door(target->room, *side);
            Door& door = s_.doors.at(id);
            if (slot_door(s_.player) != id && !door.open) {
                if (door.kind != DoorKind::Locked || s_.keys < 1) return false;
                --s_.keys;
                ++s_.locksOpened;
                door.open = true;
                emit(EventType::DoorOpened, target->room, target->cell, "Locked");
            }
            relocate(*target);
            return true;
        }

        const Tile t = room.at(target->cell);
        if (t == Tile::Wall) return false;
        if (t == Tile::Water) {
            auto far = raft_cross(s_, dir);
            if (!far) return false;
            relocate({target->room, *far});
            return true;
        }
        if (s_.block_cell(target->room) == target->cell) {
            const PuzzleSpec& p = *room.puzzle;
            if (rs.pushed || s_.player.room != target->room || s_.player.cell != p.prePush || dir != p.pushDirection ||
                room.at(p.postPush) != Tile::Floor || occupied_by_enemy(rs, p.postPush))
                return false;
            rs.pushed = true;
            emit(EventType::PuzzleSolved, target->room, p.postPush);
            for (Side side : kSides) {
                if (!room.has_door(side)) continue;
                Door& door = s_.doors.at(canonical_door(target->room, side));
                if (door.kind == DoorKind::Puzzle && !door.open) {
                    door.open = true;
                    emit(EventType::DoorOpened, target->room, door_inner_cell(side), "Puzzle");
                }
            }
            relocate(*target);
            return true;
        }
        relocate(*target);
        return true;
    }

    void relocate(Loc to) {
        const bool changed = to.room != s_.player.room;
        s_.player = to;
        emit(EventType::Moved, to.room, to.cell);
        pick_up();
        if (changed && s_.status == Status::Playing) enter_room(to.room);
    }

    bool player_bomb(Side dir) {
        if (s_.bombs < 1 && !s_.options.infiniteBombs) return false;
        Cell target = step(s_.player.cell, dir);
        if (!in_room(target)) return false;
        auto side = door_slot_side(target);
        const Room& room = *s_.dungeon->room_at(s_.player.room);
        if (!side || !room.has_door(*side)) return false;
        DoorId id = canonical_door(s_.player.room, *side);
        if (slot_door(s_.player) == id) return false;
        Door& door = s_.doors.at(id);
        if (door.kind != DoorKind::Bombable || door.open) return false;
        if (!s_.options.infiniteBombs) --s_.bombs;
        door.open = true;
        emit(EventType::Bombed, s_.player.room, target);
        emit(EventType::DoorOpened, s_.player.room, target, "Bombable");
        return true;
    }

    void enemy_phase() {
        const GridPos pos = s_.player.room;
        RoomState& rs = s_.rooms.at(pos);
        const Room& room = *s_.dungeon->room_at(pos);
        for (std::size_t i = 0; i < rs.enemies.size(); ++i) {
            Cell& e = rs.enemies[i];
            const Cell p = s_.player.cell;
            if (std::max(std::abs(e.x - p.x), std::abs(e.y - p.y)) <= 1) {
                const bool hit = bernoulli(s_.rng, s_.options.enemyHitChance);
                emit(EventType::Attacked, pos, e, hit ? "hit" : "miss");
                if (hit) {
                    --s_.hearts;
                    emit(EventType::Damaged, pos, p, std::to_string(s_.hearts));
                    if (s_.hearts <= 0) {
                        s_.hearts = 0;
                        s_.status = Status::Dead;
                        emit(EventType::Died, pos, p);
                        on_death(s_);
                        emit(EventType::Restarted, s_.player.room, s_.player.cell, std::to_string(s_.hearts));
                        return;
                    }
                }
                continue;
            }
            std::vector<Cell> options;
            auto free = [&](Cell c) {
                return in_interior(c) && room.at(c) != Tile::Wall && c != p && !occupied_by_enemy(rs, c) &&
                       s_.block_cell(pos) != c;
            };
            const int dist = std::abs(e.x - p.x) + std::abs(e.y - p.y);
            const bool chase = line_of_sight(room, e, p);
            for (Side side : kSides) {
                Cell c = step(e, side);
                if (!free(c)) continue;
                if (chase && std::abs(c.x - p.x) + std::abs(c.y - p.y) >= dist) continue;
                options.push_back(c);
            }
            if (!options.empty()) e = pick(options, s_.rng);
        }
    }

private:
    GameState& s_;
    std::vector<Event>& ev_;
};

}  // namespace

GameState new_session(std::shared_ptr<const Dungeon> dungeon, int tier, std::uint64_t seed,
                      const EngineOptions& options) {
    if (!dungeon) throw Error("new_session needs a dungeon");
    GameState s;
    s.dungeon = std::move(dungeon);
    s.options = options;
    s.tier = std::clamp(tier, 0, kMaxTier);
    s.rng = derive_rng(seed, "session");
    reset_world(s);
    std::vector<Event> ignored;
    Stepper st(s, ignored);
    st.settle_room(s.player.room, false);
    return s;
}

void on_death(GameState& s) {
    ++s.deaths;
    s.tier = std::min(s.tier + 1, kMaxTier);
    reset_world(s);
    std::vector<Event> ignored;
    Stepper(s, ignored).settle_room(s.player.room, false);
}

std::vector<Event> step(GameState& s, Action action) {
    if (s.status != Status::Playing)
        throw StateError(std::string("session is not playing (") + std::string(status_name(s.status)) + ")");
    std::vector<Event> events;
    Stepper st(s, events);
    const GameState before = s;
    const bool took = action.kind == ActionKind::Move ? st.player_move(action.dir) : st.player_bomb(action.dir);
    if (!took) {
        events.clear();
        s = before;
        events.push_back({EventType::Blocked, s.turn, s.player.room, s.player.cell, action_name(action)});
        return events;
    }
    if (s.status == Status::Playing && s.options.enemiesEnabled) st.enemy_phase();
    ++s.turn;
    return events;
}

bool line_of_sight(const Room& room, Cell enemy, Cell player) {
    if (std::abs(enemy.x - player.x) + std::abs(enemy.y - player.y) > 4) return false;
    for (Cell c : line4(enemy, player))
        if (room.at(c) == Tile::Wall) return false;
    return true;
}

std::optional<Cell> raft_cross(const GameState& s, Side dir) {
    if (!s.hasRaft) return std::nullopt;
    const Room& room = *s.dungeon->room_at(s.player.room);
    Cell water = step(s.player.cell, dir);
    Cell far = step(water, dir);
    if (!in_room(water) || room.at(water) != Tile::Water) return std::nullopt;
    if (!in_interior(far) || room.at(far) != Tile::Floor) return std::nullopt;
    const RoomState& rs = s.rooms.at(s.player.room);
    if (occupied_by_enemy(rs, far) || s.block_cell(s.player.room) == far) return std::nullopt;
    return far;
}

std::optional<ItemKind> drop_roll(GameState& s, GridPos room, Cell cell) {
    std::optional<ItemKind> drop;
    if (bernoulli(s.rng, s.heart_drop_rate()))
        drop = ItemKind::Heart;
    else if (bernoulli(s.rng, s.options.bombDropRate))
        drop = ItemKind::Bomb;
    if (drop) s.rooms.at(room).items.push_back({*drop, cell});
    return drop;
}

namespace {

nlohmann::json xy(int x, int y) { return nlohmann::json::array({x, y}); }

}  // namespace

nlohmann::json state_to_json(const GameState& s) {
    using nlohmann::json;
    json rooms = json::object();
    for (const auto& [pos, rs] : s.rooms) {
        json enemies = json::array();
        for (Cell c : rs.enemies) enemies.push_back(xy(c.x, c.y));
        json items = json::array();
        for (const auto& it : rs.items) {
            if (it.kind == ItemKind::Key && !rs.keyRevealed) continue;
            items.push_back({{"kind", item_kind_name(it.kind)}, {"cell", xy(it.cell.x, it.cell.y)}});
        }
        json block = nullptr;
        if (auto b = s.block_cell(pos)) block = xy(b->x, b->y);
        rooms[std::to_string(pos.x) + "," + std::to_string(pos.y)] = {
            {"enemies", enemies}, {"items", items}, {"block", block}, {"pushed", rs.pushed}};
    }
    json doors = json::array();
    for (const auto& [id, door] : s.doors)
        doors.push_back({{"room", xy(id.room.x, id.room.y)},
                         {"side", std::string(1, side_char(id.side))},
                         {"kind", door_kind_name(door.kind)},
                         {"open", door.open}});
    return {{"status", status_name(s.status)},
            {"turn", s.turn},
            {"tier", s.tier},
            {"deaths", s.deaths},
            {"hearts", s.hearts},
            {"maxHearts", s.maxHearts},
            {"heartDropRate", s.heart_drop_rate()},
            {"bombs", s.bombs},
            {"keys", s.keys},
            {"hasRaft", s.hasRaft},
            {"player", {{"room", xy(s.player.room.x, s.player.room.y)}, {"cell", xy(s.player.cell.x, s.player.cell.y)}}},
            {"rooms", rooms},
            {"doors", doors}};
}

nlohmann::json event_to_json(const Event& e) {
    nlohmann::json j = {{"type", event_type_name(e.type)},
                        {"turn", e.turn},
                        {"room", xy(e.room.x, e.room.y)},
                        {"cell", xy(e.cell.x, e.cell.y)}};
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

nlohmann::json events_to_json(const std::vector<Event>& events) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : events) out.push_back(event_to_json(e));
    return out;
}

}  // namespace zd
