#include "zd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace zd {

double room_distance(const Room& a, const Room& b) {
    int diff = 0;
    for (Cell c : interior_cells())
        if (a.at(c) != b.at(c)) ++diff;
    return static_cast<double>(diff) / kInteriorCells;
}

double room_novelty(const std::vector<Room>& rooms, std::size_t index) {
    if (rooms.size() < 2) throw MetricError("novelty needs at least two rooms");
    if (index >= rooms.size()) throw MetricError("room index out of range");
    double sum = 0;
    for (std::size_t j = 0; j < rooms.size(); ++j)
        if (j != index) sum += room_distance(rooms[index], rooms[j]);
    return sum / static_cast<double>(rooms.size() - 1);
}

double dungeon_novelty(const std::vector<Room>& rooms) {
    if (rooms.size() < 2) throw MetricError("novelty needs at least two rooms");
    double sum = 0;
    for (std::size_t i = 0; i < rooms.size(); ++i) sum += room_novelty(rooms, i);
    return sum / static_cast<double>(rooms.size());
}

namespace {

std::vector<Room> rooms_of(const Dungeon& d) {
    std::vector<Room> out;
    for (const auto& [pos, room] : d.rooms) out.push_back(room);
    return out;
}

std::array<Tile, kInteriorCells> interior_key(const Room& r) {
    std::array<Tile, kInteriorCells> key{};
    const auto& cells = interior_cells();
    for (std::size_t i = 0; i < cells.size(); ++i) key[i] = r.at(cells[i]);
    return key;
}

}  // namespace

double dungeon_novelty(const Dungeon& d) { return dungeon_novelty(rooms_of(d)); }

std::string_view scope_name(Scope s) {
    switch (s) {
        case Scope::Dungeons: return "dungeons";
        case Scope::AllRooms: return "allRooms";
        case Scope::UniqueRooms: return "uniqueRooms";
    }
    return "?";
}

Summary summarize_values(const std::vector<double>& values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stdev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

std::vector<Room> unique_interiors(const std::vector<Room>& rooms) {
    std::vector<Room> out;
    std::set<std::array<Tile, kInteriorCells>> seen;
    for (const Room& r : rooms)
        if (seen.insert(interior_key(r)).second) out.push_back(r);
    return out;
}

NoveltyReport summarize(const std::vector<Dungeon>& dungeons, Scope scope) {
    NoveltyReport report;
    report.scope = scope;
    switch (scope) {
        case Scope::Dungeons:
            for (const Dungeon& d : dungeons) report.values.push_back(dungeon_novelty(d));
            break;
        case Scope::AllRooms:
            for (const Dungeon& d : dungeons) {
                auto rooms = rooms_of(d);
                for (std::size_t i = 0; i < rooms.size(); ++i) report.values.push_back(room_novelty(rooms, i));
            }
            break;
        case Scope::UniqueRooms: {
            std::vector<Room> all;
            for (const Dungeon& d : dungeons)
                for (const auto& [pos, room] : d.rooms) all.push_back(room);
            auto pool = unique_interiors(all);
            if (pool.size() == 1)
                report.values.push_back(0.0);
            else
                for (std::size_t i = 0; i < pool.size(); ++i) report.values.push_back(room_novelty(pool, i));
            break;
        }
    }
    report.summary = summarize_values(report.values);
    return report;
}

std::string format_table(const std::vector<TableRow>& rows) {
    std::size_t width = 4;
    for (const auto& r : rows) width = std::max(width, r.type.size());
    auto pad = [&](std::string s) {
        s.resize(width, ' ');
        return s;
    };
    std::string out = pad("Type") + "  " + "    N" + "  " + "Avg +- StDev     " + "  Min     Max\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "  %5zu  %.4f +- %.4f  %.4f  %.4f\n", r.summary.n, r.summary.mean,
                      r.summary.stdev, r.summary.min, r.summary.max);
        out += pad(r.type) + buf;
    }
    return out;
}

nlohmann::json table_json(const std::vector<TableRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"type", r.type},
                       {"n", r.summary.n},
                       {"mean", r.summary.mean},
                       {"stdev", r.summary.stdev},
                       {"min", r.summary.min},
                       {"max", r.summary.max}});
    return out;
}

}  // namespace zd
