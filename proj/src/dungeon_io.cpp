#include "zd/dungeon_io.hpp"

#include <fstream>
#include <sstream>

namespace zd {

using nlohmann::json;

namespace {

json cell_json(Cell c) { return json::array({c.x, c.y}); }

Cell cell_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("cell must be [x, y]");
    Cell c{j[0].get<int>(), j[1].get<int>()};
    if (!in_room(c)) throw FormatError("cell out of room bounds");
    return c;
}

Side side_from(const json& j) {
    auto s = j.get<std::string>();
    if (s.size() != 1 || !side_from_char(s[0])) throw FormatError("bad side '" + s + "'");
    return *side_from_char(s[0]);
}

GridPos pos_from_key(const std::string& key) {
    auto comma = key.find(',');
    if (comma == std::string::npos) throw FormatError("bad room key '" + key + "'");
    try {
        return {std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
    } catch (const std::exception&) {
        throw FormatError("bad room key '" + key + "'");
    }
}

std::string pos_key(GridPos p) { return std::to_string(p.x) + "," + std::to_string(p.y); }

}  // namespace

json room_to_json(const Room& r) {
    json j;
    j["tiles"] = room_rows(r);
    json doors = json::array();
    for (Side s : kSides) {
        if (const auto& d = r.door(s))
            doors.push_back({{"side", std::string(1, side_char(s))},
                             {"kind", std::string(door_kind_name(d->kind))},
                             {"open", d->open}});
    }
    j["doors"] = doors;
    json items = json::array();
    for (const auto& it : r.items)
        items.push_back({{"kind", std::string(item_kind_name(it.kind))}, {"cell", cell_json(it.cell)}});
    j["items"] = items;
    json enemies = json::array();
    for (const auto& e : r.enemies) enemies.push_back(cell_json(e.cell));
    j["enemies"] = enemies;
    if (r.puzzle) {
        j["puzzle"] = {{"block", cell_json(r.puzzle->blockCell)},
                       {"direction", std::string(1, side_char(r.puzzle->pushDirection))},
                       {"pre", cell_json(r.puzzle->prePush)},
                       {"post", cell_json(r.puzzle->postPush)}};
    } else {
        j["puzzle"] = nullptr;
    }
    j["symbol"] = r.symbol ? json(symbol_name(*r.symbol)) : json(nullptr);
    return j;
}

Room room_from_json(const json& j) {
    try {
        Room r = room_from_rows(j.at("tiles").get<std::vector<std::string>>());
        for (const auto& d : j.value("doors", json::array())) {
            Side s = side_from(d.at("side"));
            auto kind = door_kind_from_name(d.at("kind").get<std::string>());
            if (!kind) throw FormatError("bad door kind");
            if (r.has_door(s)) throw FormatError("two doors on one side");
            r.door(s) = Door{s, *kind, d.at("open").get<bool>()};
        }
        for (const auto& it : j.value("items", json::array())) {
            auto kind = item_kind_from_name(it.at("kind").get<std::string>());
            if (!kind) throw FormatError("bad item kind");
            r.items.push_back({*kind, cell_from(it.at("cell"))});
        }
        for (const auto& e : j.value("enemies", json::array())) r.enemies.push_back({cell_from(e)});
        if (j.contains("puzzle") && !j["puzzle"].is_null()) {
            const auto& p = j["puzzle"];
            r.puzzle = PuzzleSpec{cell_from(p.at("block")), side_from(p.at("direction")),
                                  cell_from(p.at("pre")), cell_from(p.at("post"))};
        }
        if (j.contains("symbol") && !j["symbol"].is_null()) {
            auto sym = symbol_from_name(j["symbol"].get<std::string>());
            if (!sym) throw FormatError("bad room symbol");
            r.symbol = *sym;
        }
        return r;
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception& e) {
        throw FormatError(std::string("malformed room: ") + e.what());
    }
}

json dungeon_to_json(const Dungeon& d) {
    json j;
    j["meta"] = {{"seed", d.meta.seed},
                 {"sourceKind", std::string(source_kind_name(d.meta.sourceKind))},
                 {"repairCount", d.meta.repairCount},
                 {"name", d.meta.name}};
    json rooms = json::object();
    for (const auto& [pos, room] : d.rooms) rooms[pos_key(pos)] = room_to_json(room);
    j["rooms"] = rooms;
    json nodes = json::array();
    for (int i = 0; i < static_cast<int>(d.graph.nodes.size()); ++i) {
        json n = {{"id", i}, {"symbol", symbol_name(d.graph.nodes[i])}};
        if (i < static_cast<int>(d.positions.size()))
            n["pos"] = json::array({d.positions[i].x, d.positions[i].y});
        if (i < static_cast<int>(d.graph.origin.size())) n["origin"] = d.graph.origin[i];
        nodes.push_back(n);
    }
    json edges = json::array();
    for (const Edge& e : d.graph.edges) edges.push_back(json::array({e.from, e.to}));
    j["graph"] = {{"nodes", nodes}, {"edges", edges}};
    json lost = json::array();
    for (const Edge& e : d.lostEdges) lost.push_back(json::array({e.from, e.to}));
    j["lostEdges"] = lost;
    j["warnings"] = d.warnings;
    return j;
}

Dungeon dungeon_from_json(const json& j) {
    try {
        Dungeon d;
        const auto& meta = j.at("meta");
        d.meta.seed = meta.value("seed", std::uint64_t{0});
        auto kind = source_kind_from_name(meta.value("sourceKind", std::string("gan")));
        if (!kind) throw FormatError("bad sourceKind");
        d.meta.sourceKind = *kind;
        d.meta.repairCount = meta.value("repairCount", 0);
        d.meta.name = meta.value("name", std::string());
        for (const auto& [key, room] : j.at("rooms").items()) d.rooms[pos_from_key(key)] = room_from_json(room);
        if (j.contains("graph")) {
            const auto& g = j["graph"];
            for (const auto& n : g.value("nodes", json::array())) {
                auto sym = symbol_from_name(n.at("symbol").get<std::string>());
                if (!sym) throw FormatError("bad node symbol");
                if (n.at("id").get<int>() != static_cast<int>(d.graph.nodes.size()))
                    throw FormatError("graph node ids must be dense and ordered");
                d.graph.add_node(*sym, n.value("origin", -1));
                if (n.contains("pos")) d.positions.push_back({n["pos"][0].get<int>(), n["pos"][1].get<int>()});
            }
            const int count = static_cast<int>(d.graph.nodes.size());
            auto edge_from = [count](const json& e) {
                Edge out{e.at(0).get<int>(), e.at(1).get<int>()};
                if (out.from < 0 || out.to < 0 || out.from >= count || out.to >= count)
                    throw FormatError("edge references unknown node");
                return out;
            };
            for (const auto& e : g.value("edges", json::array())) d.graph.edges.push_back(edge_from(e));
            for (const auto& e : j.value("lostEdges", json::array())) d.lostEdges.push_back(edge_from(e));
            d.graph.refresh_endpoints();
            if (!d.positions.empty() && d.positions.size() != d.graph.nodes.size())
                throw FormatError("every graph node needs a position");
        }
        d.warnings = j.value("warnings", std::vector<std::string>{});
        return d;
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception& e) {
        throw FormatError(std::string("malformed dungeon: ") + e.what());
    }
}

std::string dungeon_to_text(const Dungeon& d) { return dungeon_to_json(d).dump(2) + "\n"; }

Dungeon dungeon_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    return dungeon_from_json(j);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

void save_dungeon(const std::filesystem::path& path, const Dungeon& d) {
    write_text_file(path, dungeon_to_text(d));
}

Dungeon load_dungeon(const std::filesystem::path& path) { return dungeon_from_text(read_text_file(path)); }

void save_room_pool(const std::filesystem::path& path, const std::vector<Room>& rooms,
                    const std::vector<std::string>& sources) {
    json arr = json::array();
    for (std::size_t i = 0; i < rooms.size(); ++i) {
        json r = room_to_json(rooms[i]);
        if (i < sources.size()) r["source"] = sources[i];
        arr.push_back(r);
    }
    write_text_file(path, json{{"rooms", arr}}.dump(2) + "\n");
}

std::vector<Room> load_room_pool(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": invalid JSON: " + e.what());
    }
    std::vector<Room> rooms;
    if (!j.contains("rooms") || !j["rooms"].is_array()) throw FormatError(path.string() + ": missing rooms array");
    for (const auto& r : j["rooms"]) rooms.push_back(room_from_json(r));
    return rooms;
}

}  // namespace zd
