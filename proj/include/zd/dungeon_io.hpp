#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "zd/core.hpp"

namespace zd {

// Dungeon file schema:
//   meta:      {seed, sourceKind, repairCount, name}
//   rooms:     {"x,y": {tiles: 11 strings of 16 chars over ".W~", doors: [{side, kind, open}],
//                       items: [{kind, cell: [x, y]}], enemies: [[x, y]],
//                       puzzle: null | {block, direction, pre, post}, symbol: null | "k"}}
//   graph:     {nodes: [{id, symbol, pos: [x, y], origin}], edges: [[from, to]]}
//   lostEdges: [[from, to]]
//   warnings:  [string]

nlohmann::json room_to_json(const Room& r);
Room room_from_json(const nlohmann::json& j);

nlohmann::json dungeon_to_json(const Dungeon& d);
Dungeon dungeon_from_json(const nlohmann::json& j);

/// Canonical text form: two-space indented JSON with a trailing newline.
std::string dungeon_to_text(const Dungeon& d);
Dungeon dungeon_from_text(const std::string& text);

void save_dungeon(const std::filesystem::path& path, const Dungeon& d);
Dungeon load_dungeon(const std::filesystem::path& path);

/// Room pool file: {"rooms": [room, ...]} where each room may carry "source".
void save_room_pool(const std::filesystem::path& path, const std::vector<Room>& rooms,
                    const std::vector<std::string>& sources = {});
std::vector<Room> load_room_pool(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace zd
