#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zd/core.hpp"

namespace zd {

class IngestError : public Error {
public:
    using Error::Error;
};

inline constexpr char kVglcVoid = '-';

/// Reduces a VGLC Zelda character to a tile: F is Floor; W, B, D, S are
/// Wall; P, O, I, M are Water. The void filler maps to Wall when it shows up
/// inside a room. Throws IngestError naming the character and `where`.
Tile simplify_tile(char c, std::string_view where = {});

struct VglcDungeon {
    std::string name;  // file stem, e.g. "tloz4_1"
    std::string id;    // "dungeon-quest", e.g. "4-1"
    std::vector<std::string> grid;
};

/// Parses a VGLC text dump. Trailing blank lines and CR characters are
/// dropped; every remaining row must have the same width.
VglcDungeon parse_vglc(std::string name, std::string_view text);

/// Partitions the grid on the 16x11 lattice. Fully void blocks are skipped,
/// and so are blocks with no orthogonal neighbour (stair-only rooms). Door
/// characters on a side's centre slot become Normal doors.
std::vector<std::pair<GridPos, Room>> split_rooms(const VglcDungeon& dungeon);

/// Door slots become Wall and the door list is cleared.
Room strip_doors(Room room);

/// First occurrence of each distinct tile grid, in order.
std::vector<Room> dedupe(const std::vector<Room>& rooms);

/// Ingested dungeon as a playable-schema Dungeon (sourceKind original).
Dungeon to_dungeon(const VglcDungeon& v);

struct Corpus {
    std::vector<VglcDungeon> dungeons;
    std::vector<Dungeon> originals;   // one per dungeon, rooms door-stripped
    std::vector<Room> allRooms;       // door-stripped, corpus order
    std::vector<std::string> sources; // "name@x,y" per allRooms entry
    std::vector<Room> uniqueRooms;
    std::vector<std::string> uniqueSources;
};

/// Loads every *.txt file of a directory, sorted by file name.
Corpus load_corpus(const std::filesystem::path& dir);

/// Trainer export: header "count 11 16 3", then per room 11 lines of
/// 16 * 3 digits (channel fastest, channels Floor, Wall, Water).
std::string onehot_text(const std::vector<Room>& rooms);

}  // namespace zd
