#include "zd/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace zd {

char tile_char(Tile t) {
    switch (t) {
        case Tile::Floor: return '.';
        case Tile::Wall: return 'W';
        case Tile::Water: return '~';
    }
    return '?';
}

std::optional<Tile> tile_from_char(char c) {
    switch (c) {
        case '.': return Tile::Floor;
        case 'W': return Tile::Wall;
        case '~': return Tile::Water;
        default: return std::nullopt;
    }
}

Side opposite(Side s) { return static_cast<Side>((static_cast<int>(s) + 2) % 4); }

char side_char(Side s) { return "NESW"[static_cast<int>(s)]; }

std::optional<Side> side_from_char(char c) {
    switch (c) {
        case 'N': return Side::N;
        case 'E': return Side::E;
        case 'S': return Side::S;
        case 'W': return Side::W;
        default: return std::nullopt;
    }
}

namespace {
constexpr std::array<int, 4> kDx{0, 1, 0, -1};
constexpr std::array<int, 4> kDy{-1, 0, 1, 0};
}  // namespace

Cell step(Cell c, Side d) {
    return {c.x + kDx[static_cast<int>(d)], c.y + kDy[static_cast<int>(d)]};
}

GridPos step(GridPos p, Side d) {
    return {p.x + kDx[static_cast<int>(d)], p.y + kDy[static_cast<int>(d)]};
}

std::optional<Side> facing_side(GridPos from, GridPos to) {
    for (Side s : kSides)
        if (step(from, s) == to) return s;
    return std::nullopt;
}

bool in_room(Cell c) { return c.x >= 0 && c.x < kRoomWidth && c.y >= 0 && c.y < kRoomHeight; }

bool in_interior(Cell c) {
    return c.x >= kWallThickness && c.x < kRoomWidth - kWallThickness && c.y >= kWallThickness &&
           c.y < kRoomHeight - kWallThickness;
}

std::pair<Cell, Cell> door_anchor(Side side) {
    switch (side) {
        case Side::N: return {{7, 0}, {8, 0}};
        case Side::S: return {{7, 10}, {8, 10}};
        case Side::W: return {{0, 5}, {1, 5}};
        case Side::E: return {{15, 5}, {14, 5}};
    }
    return {};
}

std::vector<Cell> door_slot(Side side) {
    switch (side) {
        case Side::N: return {{7, 0}, {8, 0}, {7, 1}, {8, 1}};
        case Side::S: return {{7, 9}, {8, 9}, {7, 10}, {8, 10}};
        case Side::W: return {{0, 5}, {1, 5}};
        case Side::E: return {{14, 5}, {15, 5}};
    }
    return {};
}

std::optional<Side> door_slot_side(Cell c) {
    if ((c.x == 7 || c.x == 8) && (c.y == 0 || c.y == 1)) return Side::N;
    if ((c.x == 7 || c.x == 8) && (c.y == 9 || c.y == 10)) return Side::S;
    if (c.y == 5 && (c.x == 0 || c.x == 1)) return Side::W;
    if (c.y == 5 && (c.x == 14 || c.x == 15)) return Side::E;
    return std::nullopt;
}

Cell door_inner_cell(Side side) {
    switch (side) {
        case Side::N: return {7, 2};
        case Side::S: return {7, 8};
        case Side::W: return {2, 5};
        case Side::E: return {13, 5};
    }
    return {};
}

const std::vector<Cell>& interior_cells() {
    static const std::vector<Cell> cells = [] {
        std::vector<Cell> v;
        v.reserve(kInteriorCells);
        for (int y = kWallThickness; y < kRoomHeight - kWallThickness; ++y)
            for (int x = kWallThickness; x < kRoomWidth - kWallThickness; ++x) v.push_back({x, y});
        return v;
    }();
    return cells;
}

namespace {
constexpr std::array<std::string_view, 5> kDoorKindNames{"Normal", "Locked", "SoftLocked", "Puzzle",
                                                         "Bombable"};
constexpr std::array<std::string_view, 5> kItemNames{"Key", "Raft", "Triforce", "Heart", "Bomb"};
constexpr std::array<std::string_view, 3> kSourceNames{"gan", "pool", "original"};
constexpr std::array<std::string_view, 7> kSymbolShort{"s", "e", "k", "l", "sl", "p", "t"};

template <class Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<Enum>(i);
    return std::nullopt;
}
}  // namespace

std::string_view door_kind_name(DoorKind k) { return kDoorKindNames[static_cast<int>(k)]; }
std::optional<DoorKind> door_kind_from_name(std::string_view s) {
    return lookup<DoorKind>(kDoorKindNames, s);
}

std::string_view item_kind_name(ItemKind k) { return kItemNames[static_cast<int>(k)]; }
std::optional<ItemKind> item_kind_from_name(std::string_view s) {
    return lookup<ItemKind>(kItemNames, s);
}

std::string_view source_kind_name(SourceKind k) { return kSourceNames[static_cast<int>(k)]; }
std::optional<SourceKind> source_kind_from_name(std::string_view s) {
    return lookup<SourceKind>(kSourceNames, s);
}

std::string symbol_name(RoomSymbol s) {
    std::string name(kSymbolShort[static_cast<int>(s.kind)]);
    if (!s.terminal)
        std::transform(name.begin(), name.end(), name.begin(), [](char c) { return c - 'a' + 'A'; });
    return name;
}

std::optional<RoomSymbol> symbol_from_name(std::string_view s) {
    if (s.empty() || s.size() > 2) return std::nullopt;
    bool upper = std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
    bool lower = std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
    if (!upper && !lower) return std::nullopt;
    std::string low(s);
    if (upper)
        std::transform(low.begin(), low.end(), low.begin(), [](char c) { return c - 'A' + 'a'; });
    auto kind = lookup<SymbolKind>(kSymbolShort, low);
    if (!kind) return std::nullopt;
    return RoomSymbol{*kind, lower};
}

PuzzleSpec make_puzzle(Cell block, Side dir) {
    return PuzzleSpec{block, dir, step(block, opposite(dir)), step(block, dir)};
}

Room::Room() { tiles_.fill(Tile::Wall); }

bool Room::same_interior(const Room& other) const {
    for (Cell c : interior_cells())
        if (at(c) != other.at(c)) return false;
    return true;
}

std::vector<std::string> room_rows(const Room& r) {
    std::vector<std::string> rows(kRoomHeight, std::string(kRoomWidth, ' '));
    for (int y = 0; y < kRoomHeight; ++y)
        for (int x = 0; x < kRoomWidth; ++x) rows[y][x] = tile_char(r.at(x, y));
    return rows;
}

Room room_from_rows(const std::vector<std::string>& rows) {
    if (rows.size() != kRoomHeight)
        throw Error("room must have " + std::to_string(kRoomHeight) + " rows, got " +
                    std::to_string(rows.size()));
    Room r;
    for (int y = 0; y < kRoomHeight; ++y) {
        if (rows[y].size() != kRoomWidth)
            throw Error("room row " + std::to_string(y) + " has " + std::to_string(rows[y].size()) +
                        " characters, expected " + std::to_string(kRoomWidth));
        for (int x = 0; x < kRoomWidth; ++x) {
            auto t = tile_from_char(rows[y][x]);
            if (!t)
                throw Error(std::string("bad tile character '") + rows[y][x] + "' at (" +
                            std::to_string(x) + "," + std::to_string(y) + ")");
            r.set({x, y}, *t);
        }
    }
    return r;
}

int MissionGraph::add_node(RoomSymbol s, int originIndex) {
    nodes.push_back(s);
    origin.push_back(originIndex);
    return static_cast<int>(nodes.size()) - 1;
}

std::vector<int> MissionGraph::successors(int node) const {
    std::vector<int> out;
    for (const Edge& e : edges)
        if (e.from == node) out.push_back(e.to);
    return out;
}

std::vector<int> MissionGraph::predecessors(int node) const {
    std::vector<int> out;
    for (const Edge& e : edges)
        if (e.to == node) out.push_back(e.from);
    return out;
}

bool MissionGraph::terminal_only() const {
    return std::all_of(nodes.begin(), nodes.end(), [](RoomSymbol s) { return s.terminal; });
}

void MissionGraph::refresh_endpoints() {
    startNode = triforceNode = -1;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (nodes[i].kind == SymbolKind::Start && startNode < 0) startNode = i;
        if (nodes[i].kind == SymbolKind::Triforce && triforceNode < 0) triforceNode = i;
    }
}

const Room* Dungeon::room_at(GridPos p) const {
    auto it = rooms.find(p);
    return it == rooms.end() ? nullptr : &it->second;
}

Room* Dungeon::room_at(GridPos p) {
    auto it = rooms.find(p);
    return it == rooms.end() ? nullptr : &it->second;
}

GridPos Dungeon::start_room() const {
    if (graph.startNode >= 0 && graph.startNode < static_cast<int>(positions.size()))
        return positions[graph.startNode];
    return rooms.empty() ? GridPos{} : rooms.begin()->first;
}

std::optional<GridPos> Dungeon::neighbour(GridPos p, Side s) const {
    GridPos q = step(p, s);
    if (rooms.count(q)) return q;
    return std::nullopt;
}

Cell start_cell(const Room& r) {
    std::optional<Cell> best;
    int bestDist = 0;
    for (Cell c : interior_cells()) {
        if (r.at(c) != Tile::Floor) continue;
        int d = std::abs(c.x - kRoomCenter.x) + std::abs(c.y - kRoomCenter.y);
        if (!best || d < bestDist) {
            best = c;
            bestDist = d;
        }
    }
    return best.value_or(kRoomCenter);
}

DoorId canonical_door(GridPos room, Side side) {
    if (side == Side::W) return {step(room, Side::W), Side::E};
    if (side == Side::N) return {step(room, Side::N), Side::S};
    return {room, side};
}

std::vector<std::string> check_invariants(const Dungeon& d) {
    std::vector<std::string> problems;
    auto where = [](GridPos p) { return "room " + std::to_string(p.x) + "," + std::to_string(p.y); };
    for (const auto& [pos, room] : d.rooms) {
        for (int y = 0; y < kRoomHeight; ++y) {
            for (int x = 0; x < kRoomWidth; ++x) {
                Cell c{x, y};
                if (in_interior(c)) continue;
                auto slot = door_slot_side(c);
                if (slot && room.has_door(*slot)) continue;
                if (room.at(c) == Tile::Floor)
                    problems.push_back(where(pos) + ": floor on border at " + std::to_string(x) + "," +
                                       std::to_string(y));
            }
        }
        for (Side s : kSides) {
            const auto& door = room.door(s);
            if (!door) continue;
            if (door->side != s) problems.push_back(where(pos) + ": door side mismatch");
            auto other = d.room_at(step(pos, s));
            if (!other) {
                problems.push_back(where(pos) + ": door " + side_char(s) + " leads nowhere");
                continue;
            }
            const auto& back = other->door(opposite(s));
            if (!back || back->kind != door->kind || back->open != door->open)
                problems.push_back(where(pos) + ": door " + side_char(s) + " not mirrored");
            for (Cell c : door_slot(s))
                if (room.at(c) != Tile::Floor)
                    problems.push_back(where(pos) + ": door slot " + side_char(s) + " not floor");
        }
        for (const auto& it : room.items)
            if (!in_interior(it.cell)) problems.push_back(where(pos) + ": item outside interior");
        for (const auto& e : room.enemies)
            if (!in_interior(e.cell)) problems.push_back(where(pos) + ": enemy outside interior");
        if (room.puzzle) {
            const auto& p = *room.puzzle;
            if (!in_interior(p.blockCell) || !in_interior(p.prePush) || !in_interior(p.postPush) ||
                step(p.prePush, p.pushDirection) != p.blockCell ||
                step(p.blockCell, p.pushDirection) != p.postPush)
                problems.push_back(where(pos) + ": malformed puzzle");
        }
    }
    std::set<GridPos> seen;
    for (GridPos p : d.positions)
        if (!seen.insert(p).second) problems.push_back(where(p) + ": two nodes share a coordinate");
    return problems;
}

}  // namespace zd
