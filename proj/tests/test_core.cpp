#include <gtest/gtest.h>

#include <set>

#include "zd/core.hpp"
#include "zd/dungeon_io.hpp"

using namespace zd;

namespace {

// Hand-drawn 16x11 room; 'D' marks every door cell.
const std::vector<std::string> kTemplate = {
    "WWWWWWWDDWWWWWWW",  //
    "WWWWWWWDDWWWWWWW",  //
    "WW............WW",  //
    "WW............WW",  //
    "WW............WW",  //
    "DD............DD",  //
    "WW............WW",  //
    "WW............WW",  //
    "WW............WW",  //
    "WWWWWWWDDWWWWWWW",  //
    "WWWWWWWDDWWWWWWW",
};

std::set<Cell> template_cells(char c) {
    std::set<Cell> out;
    for (int y = 0; y < kRoomHeight; ++y)
        for (int x = 0; x < kRoomWidth; ++x)
            if (kTemplate[y][x] == c) out.insert({x, y});
    return out;
}

}  // namespace

TEST(Core, DoorAnchors) {
    EXPECT_EQ(door_anchor(Side::N), (std::pair<Cell, Cell>{{7, 0}, {8, 0}}));
    EXPECT_EQ(door_anchor(Side::S), (std::pair<Cell, Cell>{{7, 10}, {8, 10}}));
    // Mirror symmetry: S is N reflected across the horizontal centre line.
    EXPECT_EQ(door_anchor(Side::S).first.y, kRoomHeight - 1 - door_anchor(Side::N).first.y);
    auto [w0, w1] = door_anchor(Side::W);
    auto [e0, e1] = door_anchor(Side::E);
    EXPECT_EQ(e0.x, kRoomWidth - 1 - w0.x);
    EXPECT_EQ(e1.x, kRoomWidth - 1 - w1.x);
}

TEST(Core, DoorSlotsMatchHandDrawnTemplate) {
    std::set<Cell> slots;
    for (Side s : kSides) {
        for (Cell c : door_slot(s)) {
            slots.insert(c);
            EXPECT_EQ(door_slot_side(c), s);
        }
        auto [a, b] = door_anchor(s);
        EXPECT_EQ(kTemplate[a.y][a.x], 'D');
        EXPECT_EQ(kTemplate[b.y][b.x], 'D');
    }
    EXPECT_EQ(slots, template_cells('D'));
}

TEST(Core, InteriorCells) {
    const auto& cells = interior_cells();
    ASSERT_EQ(cells.size(), 84u);
    EXPECT_EQ(cells.front(), (Cell{2, 2}));
    EXPECT_EQ(cells.back(), (Cell{13, 8}));
    EXPECT_EQ(std::set<Cell>(cells.begin(), cells.end()), template_cells('.'));
    for (Side s : kSides)
        for (Cell c : door_slot(s)) EXPECT_EQ(std::count(cells.begin(), cells.end(), c), 0);
    for (std::size_t i = 1; i < cells.size(); ++i)
        EXPECT_TRUE(std::tie(cells[i - 1].y, cells[i - 1].x) < std::tie(cells[i].y, cells[i].x));
}

TEST(Core, DoorInnerCellsTouchTheirSlot) {
    for (Side s : kSides) {
        Cell inner = door_inner_cell(s);
        EXPECT_TRUE(in_interior(inner));
        auto slot = door_slot(s);
        EXPECT_NE(std::find(slot.begin(), slot.end(), step(inner, s)), slot.end());
    }
}

TEST(Core, RoomRowsRoundTrip) {
    const std::vector<std::string> rows = {"WWWWWWWWWWWWWWWW", "WWWWWWWWWWWWWWWW", "WW....~~......WW",
                                           "WW..WW........WW", "WW............WW", "WW...~~~......WW",
                                           "WW............WW", "WW..........W.WW", "WW............WW",
                                           "WWWWWWWWWWWWWWWW", "WWWWWWWWWWWWWWWW"};
    Room r = room_from_rows(rows);
    EXPECT_EQ(r.at(6, 2), Tile::Water);
    EXPECT_EQ(r.at(4, 3), Tile::Wall);
    EXPECT_EQ(room_from_rows(room_rows(r)), r);
    EXPECT_THROW(room_from_rows({"WWW"}), Error);
}

TEST(Core, SymbolNames) {
    for (SymbolKind k : {SymbolKind::Start, SymbolKind::Enemy, SymbolKind::Key, SymbolKind::Lock,
                         SymbolKind::SoftLock, SymbolKind::Puzzle, SymbolKind::Triforce})
        for (bool terminal : {true, false}) {
            RoomSymbol s{k, terminal};
            EXPECT_EQ(symbol_from_name(symbol_name(s)), s);
        }
    EXPECT_EQ(symbol_name({SymbolKind::SoftLock, false}), "SL");
    EXPECT_EQ(symbol_name({SymbolKind::SoftLock, true}), "sl");
}

TEST(Core, PuzzleFlanksBlock) {
    PuzzleSpec p = make_puzzle({5, 5}, Side::E);
    EXPECT_EQ(p.prePush, (Cell{4, 5}));
    EXPECT_EQ(p.postPush, (Cell{6, 5}));
}

TEST(Core, InvariantsFlagBorderFloorAndAsymmetricDoors) {
    Dungeon d;
    Room a, b;
    for (Cell c : interior_cells()) {
        a.set(c, Tile::Floor);
        b.set(c, Tile::Floor);
    }
    d.rooms[{0, 0}] = a;
    d.rooms[{1, 0}] = b;
    EXPECT_TRUE(check_invariants(d).empty());

    d.rooms[{0, 0}].door(Side::E) = Door{Side::E, DoorKind::Normal, true};
    for (Cell c : door_slot(Side::E)) d.rooms[{0, 0}].set(c, Tile::Floor);
    EXPECT_FALSE(check_invariants(d).empty());  // no matching W door
    d.rooms[{1, 0}].door(Side::W) = Door{Side::W, DoorKind::Normal, true};
    for (Cell c : door_slot(Side::W)) d.rooms[{1, 0}].set(c, Tile::Floor);
    EXPECT_TRUE(check_invariants(d).empty());

    d.rooms[{1, 0}].set({0, 0}, Tile::Floor);
    EXPECT_FALSE(check_invariants(d).empty());
}

TEST(Core, DungeonFileRoundTrip) {
    Dungeon d;
    Room r;
    for (Cell c : interior_cells()) r.set(c, Tile::Floor);
    r.set({4, 4}, Tile::Water);
    r.door(Side::S) = Door{Side::S, DoorKind::Locked, false};
    for (Cell c : door_slot(Side::S)) r.set(c, Tile::Floor);
    r.items.push_back({ItemKind::Key, {3, 3}});
    r.enemies.push_back({{9, 6}});
    r.puzzle = make_puzzle({6, 6}, Side::N);
    r.symbol = RoomSymbol{SymbolKind::Puzzle, true};
    Room below;
    below.door(Side::N) = Door{Side::N, DoorKind::Locked, false};
    for (Cell c : door_slot(Side::N)) below.set(c, Tile::Floor);
    d.rooms[{0, 0}] = r;
    d.rooms[{0, 1}] = below;
    d.graph.add_node({SymbolKind::Start, true}, 0);
    d.graph.add_node({SymbolKind::Triforce, true}, 1);
    d.graph.edges.push_back({0, 1});
    d.graph.refresh_endpoints();
    d.positions = {{0, 0}, {0, 1}};
    d.meta = {123456789012345ULL, SourceKind::Pool, 3, "x"};
    d.warnings = {"w"};

    const std::string text = dungeon_to_text(d);
    const Dungeon back = dungeon_from_text(text);
    EXPECT_EQ(back, d);
    EXPECT_EQ(dungeon_to_text(back), text);
    EXPECT_THROW(dungeon_from_text("{\"rooms\": 3}"), Error);
    EXPECT_THROW(dungeon_from_text("not json"), Error);
}
