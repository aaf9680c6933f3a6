#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "zd/core.hpp"

namespace zd {

class MetricError : public Error {
public:
    using Error::Error;
};

/// Interior cells where the tiles differ, divided by 84.
double room_distance(const Room& a, const Room& b);

/// Mean distance from rooms[index] to every other room in `rooms`.
double room_novelty(const std::vector<Room>& rooms, std::size_t index);
/// Mean room novelty over the dungeon's rooms.
double dungeon_novelty(const Dungeon& d);
double dungeon_novelty(const std::vector<Room>& rooms);

enum class Scope { Dungeons, AllRooms, UniqueRooms };
std::string_view scope_name(Scope s);

struct Summary {
    std::size_t n = 0;
    double mean = 0;
    double stdev = 0;  // sample standard deviation
    double min = 0;
    double max = 0;
};
Summary summarize_values(const std::vector<double>& values);

struct NoveltyReport {
    Scope scope = Scope::Dungeons;
    std::vector<double> values;  // one per dungeon or room
    Summary summary;
};

/// Dungeons: one value per dungeon. AllRooms: each room against the other
/// rooms of its own dungeon. UniqueRooms: the rooms with distinct interiors,
/// pooled and scored against each other.
NoveltyReport summarize(const std::vector<Dungeon>& dungeons, Scope scope);

/// Rooms with pairwise distinct interiors, first occurrence kept.
std::vector<Room> unique_interiors(const std::vector<Room>& rooms);

struct TableRow {
    std::string type;
    Summary summary;
};
/// Columns: Type, N, Avg ± StDev, Min, Max.
std::string format_table(const std::vector<TableRow>& rows);
nlohmann::json table_json(const std::vector<TableRow>& rows);

}  // namespace zd
