#include "zd/vglc.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <tuple>

#include "zd/dungeon_io.hpp"

namespace zd {

Tile simplify_tile(char c, std::string_view where) {
    switch (c) {
        case 'F': return Tile::Floor;
        case 'W':
        case 'B':
        case 'D':
        case 'S':
        case kVglcVoid: return Tile::Wall;
        case 'P':
        case 'O':
        case 'I':
        case 'M': return Tile::Water;
        default: break;
    }
    std::string msg = "unknown VGLC character '";
    msg += c;
    msg += "'";
    if (!where.empty()) {
        msg += " at ";
        msg += where;
    }
    throw IngestError(msg);
}

VglcDungeon parse_vglc(std::string name, std::string_view text) {
    VglcDungeon d;
    d.name = std::move(name);
    static const std::regex stem(R"(tloz(\d+)_(\d+))");
    std::smatch m;
    if (std::regex_search(d.name, m, stem))
        d.id = m[1].str() + "-" + m[2].str();
    else
        d.id = d.name;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string line(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
        d.grid.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    while (!d.grid.empty() &&
           d.grid.back().find_first_not_of(" \t") == std::string::npos)
        d.grid.pop_back();
    if (d.grid.empty()) throw IngestError(d.name + ": empty dungeon text");
    const std::size_t width = d.grid.front().size();
    for (std::size_t y = 0; y < d.grid.size(); ++y)
        if (d.grid[y].size() != width)
            throw IngestError(d.name + ": row " + std::to_string(y + 1) + " has width " +
                              std::to_string(d.grid[y].size()) + ", expected " + std::to_string(width));
    return d;
}

std::vector<std::pair<GridPos, Room>> split_rooms(const VglcDungeon& dungeon) {
    const auto& g = dungeon.grid;
    const std::size_t height = g.size();
    const std::size_t width = height ? g.front().size() : 0;
    if (height == 0 || width == 0 || height % kRoomHeight != 0 || width % kRoomWidth != 0)
        throw IngestError(dungeon.name + ": grid " + std::to_string(width) + "x" + std::to_string(height) +
                          " is not a multiple of the " + std::to_string(kRoomWidth) + "x" +
                          std::to_string(kRoomHeight) + " room lattice");
    const int cols = static_cast<int>(width) / kRoomWidth;
    const int rows = static_cast<int>(height) / kRoomHeight;

    auto block_void = [&](int bx, int by) {
        for (int y = 0; y < kRoomHeight; ++y)
            for (int x = 0; x < kRoomWidth; ++x)
                if (g[by * kRoomHeight + y][bx * kRoomWidth + x] != kVglcVoid) return false;
        return true;
    };

    std::set<GridPos> present;
    for (int by = 0; by < rows; ++by)
        for (int bx = 0; bx < cols; ++bx)
            if (!block_void(bx, by)) present.insert({bx, by});

    std::vector<std::pair<GridPos, Room>> out;
    for (GridPos p : present) {
        bool connected = false;
        for (Side s : kSides) connected = connected || present.count(step(p, s)) > 0;
        if (!connected) continue;

        Room room;
        for (int y = 0; y < kRoomHeight; ++y) {
            for (int x = 0; x < kRoomWidth; ++x) {
                char c = g[p.y * kRoomHeight + y][p.x * kRoomWidth + x];
                std::string where = dungeon.name + " row " + std::to_string(p.y * kRoomHeight + y + 1) +
                                    " col " + std::to_string(p.x * kRoomWidth + x + 1);
                room.set({x, y}, simplify_tile(c, where));
            }
        }
        for (Side s : kSides) {
            bool door = false;
            for (Cell c : door_slot(s))
                door = door || g[p.y * kRoomHeight + c.y][p.x * kRoomWidth + c.x] == 'D';
            if (door) room.door(s) = Door{s, DoorKind::Normal, true};
        }
        out.emplace_back(p, std::move(room));
    }
    // Row-major lattice order.
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.y, a.first.x) < std::tie(b.first.y, b.first.x);
    });
    return out;
}

Room strip_doors(Room room) {
    for (Side s : kSides) {
        for (Cell c : door_slot(s)) room.set(c, Tile::Wall);
        room.door(s).reset();
    }
    return room;
}

std::vector<Room> dedupe(const std::vector<Room>& rooms) {
    std::vector<Room> out;
    std::set<std::array<Tile, kRoomCells>> seen;
    for (const Room& r : rooms)
        if (seen.insert(r.tiles()).second) out.push_back(r);
    return out;
}

Dungeon to_dungeon(const VglcDungeon& v) {
    Dungeon d;
    d.meta.sourceKind = SourceKind::Original;
    d.meta.name = v.id;
    for (auto& [pos, room] : split_rooms(v)) d.rooms[pos] = strip_doors(room);
    return d;
}

Corpus load_corpus(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IngestError("corpus directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IngestError("no VGLC .txt files in " + dir.string());

    Corpus corpus;
    for (const auto& f : files) {
        VglcDungeon v = parse_vglc(f.stem().string(), read_text_file(f));
        Dungeon d = to_dungeon(v);
        for (const auto& [pos, room] : d.rooms) {
            corpus.allRooms.push_back(room);
            corpus.sources.push_back(v.name + "@" + std::to_string(pos.x) + "," + std::to_string(pos.y));
        }
        corpus.dungeons.push_back(std::move(v));
        corpus.originals.push_back(std::move(d));
    }
    std::set<std::array<Tile, kRoomCells>> seen;
    for (std::size_t i = 0; i < corpus.allRooms.size(); ++i) {
        if (seen.insert(corpus.allRooms[i].tiles()).second) {
            corpus.uniqueRooms.push_back(corpus.allRooms[i]);
            corpus.uniqueSources.push_back(corpus.sources[i]);
        }
    }
    return corpus;
}

std::string onehot_text(const std::vector<Room>& rooms) {
    std::string out = std::to_string(rooms.size()) + " " + std::to_string(kRoomHeight) + " " +
                      std::to_string(kRoomWidth) + " 3\n";
    for (const Room& r : rooms) {
        for (int y = 0; y < kRoomHeight; ++y) {
            for (int x = 0; x < kRoomWidth; ++x) {
                int ch = static_cast<int>(r.at(x, y));
                for (int k = 0; k < 3; ++k) out += (k == ch) ? '1' : '0';
            }
            out += '\n';
        }
    }
    return out;
}

}  // namespace zd
