#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zd {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or unsupported file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

inline constexpr int kRoomWidth = 16;
inline constexpr int kRoomHeight = 11;
inline constexpr int kRoomCells = kRoomWidth * kRoomHeight;
inline constexpr int kWallThickness = 2;
inline constexpr int kInteriorWidth = kRoomWidth - 2 * kWallThickness;   // 12
inline constexpr int kInteriorHeight = kRoomHeight - 2 * kWallThickness; // 7
inline constexpr int kInteriorCells = kInteriorWidth * kInteriorHeight;  // 84

enum class Tile : std::uint8_t { Floor = 0, Wall = 1, Water = 2 };

char tile_char(Tile t);
std::optional<Tile> tile_from_char(char c);

/// Cell inside a room: x is the column (0..15), y the row (0..10).
struct Cell {
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

/// Room coordinate on the dungeon grid. y grows southward.
struct GridPos {
    int x = 0;
    int y = 0;
    auto operator<=>(const GridPos&) const = default;
};

enum class Side : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };
inline constexpr std::array<Side, 4> kSides{Side::N, Side::E, Side::S, Side::W};

Side opposite(Side s);
char side_char(Side s);
std::optional<Side> side_from_char(char c);
Cell step(Cell c, Side d);
GridPos step(GridPos p, Side d);
/// Side of `from` that faces `to`, if the two are orthogonal neighbours.
std::optional<Side> facing_side(GridPos from, GridPos to);

bool in_room(Cell c);
bool in_interior(Cell c);

/// The two wall cells at the centre of a side. N/S span the two centre
/// columns on the outer row; E/W span the wall thickness on the centre row.
std::pair<Cell, Cell> door_anchor(Side side);
/// Every cell a door on `side` occupies (N/S: 2x2 block, E/W: 2x1).
std::vector<Cell> door_slot(Side side);
/// Side whose door slot contains `c`, if any.
std::optional<Side> door_slot_side(Cell c);
/// Interior cell just inside the door on `side`.
Cell door_inner_cell(Side side);

/// 12x7 inner region in row-major order, columns 2-13, rows 2-8.
const std::vector<Cell>& interior_cells();
/// Centre of the interior used for the Triforce and the start position.
inline constexpr Cell kRoomCenter{7, 5};

enum class DoorKind : std::uint8_t { Normal, Locked, SoftLocked, Puzzle, Bombable };
std::string_view door_kind_name(DoorKind k);
std::optional<DoorKind> door_kind_from_name(std::string_view s);

struct Door {
    Side side = Side::N;
    DoorKind kind = DoorKind::Normal;
    bool open = true;
    bool operator==(const Door&) const = default;
};

enum class SymbolKind : std::uint8_t { Start, Enemy, Key, Lock, SoftLock, Puzzle, Triforce };

struct RoomSymbol {
    SymbolKind kind = SymbolKind::Start;
    bool terminal = true;
    auto operator<=>(const RoomSymbol&) const = default;
};

/// Non-terminals print upper-case (S, E, K, L, SL, P, T), terminals lower-case.
std::string symbol_name(RoomSymbol s);
std::optional<RoomSymbol> symbol_from_name(std::string_view s);

enum class ItemKind : std::uint8_t { Key, Raft, Triforce, Heart, Bomb };
std::string_view item_kind_name(ItemKind k);
std::optional<ItemKind> item_kind_from_name(std::string_view s);

struct ItemPlacement {
    ItemKind kind = ItemKind::Key;
    Cell cell;
    bool operator==(const ItemPlacement&) const = default;
};

struct EnemyPlacement {
    Cell cell;
    bool operator==(const EnemyPlacement&) const = default;
};

/// A pushable block. The player stands on prePush and pushes the block from
/// blockCell onto postPush; both flank the block along pushDirection.
struct PuzzleSpec {
    Cell blockCell;
    Side pushDirection = Side::N;
    Cell prePush;
    Cell postPush;
    bool operator==(const PuzzleSpec&) const = default;
};

PuzzleSpec make_puzzle(Cell block, Side dir);

class Room {
public:
    Room();

    Tile at(Cell c) const { return tiles_[index(c)]; }
    Tile at(int x, int y) const { return at(Cell{x, y}); }
    void set(Cell c, Tile t) { tiles_[index(c)] = t; }
    const std::array<Tile, kRoomCells>& tiles() const { return tiles_; }

    const std::optional<Door>& door(Side s) const { return doors_[static_cast<int>(s)]; }
    std::optional<Door>& door(Side s) { return doors_[static_cast<int>(s)]; }
    bool has_door(Side s) const { return door(s).has_value(); }

    std::vector<ItemPlacement> items;
    std::vector<EnemyPlacement> enemies;
    std::optional<PuzzleSpec> puzzle;
    std::optional<RoomSymbol> symbol;

    /// Fills every cell with `t`.
    void fill(Tile t) { tiles_.fill(t); }
    /// True when the 12x7 interiors are identical.
    bool same_interior(const Room& other) const;

    bool operator==(const Room&) const = default;

private:
    static int index(Cell c) { return c.y * kRoomWidth + c.x; }

    std::array<Tile, kRoomCells> tiles_{};
    std::array<std::optional<Door>, 4> doors_{};
};

/// Renders the tile grid as 11 strings over {'.', 'W', '~'}.
std::vector<std::string> room_rows(const Room& r);
/// Room with the given rows; throws zd::Error on bad shape or characters.
Room room_from_rows(const std::vector<std::string>& rows);

struct Edge {
    int from = 0;
    int to = 0;
    auto operator<=>(const Edge&) const = default;
};

struct MissionGraph {
    std::vector<RoomSymbol> nodes;
    std::vector<Edge> edges;
    int startNode = -1;
    int triforceNode = -1;
    /// Backbone index each node was derived from (kept through rewriting).
    std::vector<int> origin;

    int add_node(RoomSymbol s, int originIndex = -1);
    std::vector<int> successors(int node) const;
    std::vector<int> predecessors(int node) const;
    bool terminal_only() const;
    /// Recomputes startNode / triforceNode from the node symbols.
    void refresh_endpoints();
    bool operator==(const MissionGraph&) const = default;
};

enum class SourceKind : std::uint8_t { Gan, Pool, Original };
std::string_view source_kind_name(SourceKind k);
std::optional<SourceKind> source_kind_from_name(std::string_view s);

struct DungeonMeta {
    std::uint64_t seed = 0;
    SourceKind sourceKind = SourceKind::Gan;
    int repairCount = 0;
    std::string name;
    bool operator==(const DungeonMeta&) const = default;
};

struct Dungeon {
    std::map<GridPos, Room> rooms;
    MissionGraph graph;
    /// Grid coordinate of each graph node; empty for ingested originals.
    std::vector<GridPos> positions;
    std::vector<Edge> lostEdges;
    std::vector<std::string> warnings;
    DungeonMeta meta;

    const Room* room_at(GridPos p) const;
    Room* room_at(GridPos p);
    GridPos start_room() const;
    /// Position of the neighbour behind a door, if that room exists.
    std::optional<GridPos> neighbour(GridPos p, Side s) const;
    bool operator==(const Dungeon&) const = default;
};

/// Floor cell the player starts on: the interior Floor cell closest to the
/// room centre (Manhattan, then row-major), or the centre when none exists.
Cell start_cell(const Room& r);

/// Identifies the door shared by two rooms, canonicalised to the E or S side
/// of the western/northern room.
struct DoorId {
    GridPos room;
    Side side = Side::E;
    auto operator<=>(const DoorId&) const = default;
};
DoorId canonical_door(GridPos room, Side side);

/// Checks structural invariants (border ring, door symmetry, placements in
/// bounds). Returns the list of violations, empty when the dungeon is sound.
std::vector<std::string> check_invariants(const Dungeon& d);

}  // namespace zd
