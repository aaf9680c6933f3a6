#include <gtest/gtest.h>

#include "support.hpp"
#include "zd/engine.hpp"
#include "zd/layout.hpp"

using namespace zd;
using namespace zd::testing;

namespace {

const Action kMoveN{ActionKind::Move, Side::N};
const Action kMoveS{ActionKind::Move, Side::S};
const Action kMoveE{ActionKind::Move, Side::E};
const Action kMoveW{ActionKind::Move, Side::W};

GameState session(const Dungeon& d, int tier = 0, std::uint64_t seed = 1, EngineOptions opts = {}) {
    return new_session(std::make_shared<Dungeon>(d), tier, seed, opts);
}

// Start room with the Triforce two rooms away so nothing ends the game early.
Dungeon arena() { return row(3); }

int count(const std::vector<Event>& ev, EventType t) {
    return static_cast<int>(std::count_if(ev.begin(), ev.end(), [t](const Event& e) { return e.type == t; }));
}

const Event* find(const std::vector<Event>& ev, EventType t) {
    for (const Event& e : ev)
        if (e.type == t) return &e;
    return nullptr;
}

}  // namespace

TEST(Engine, TierTable) {
    EXPECT_EQ(tier_params(0).hearts, 4);
    EXPECT_DOUBLE_EQ(tier_params(0).heartDropRate, 0.30);
    EXPECT_EQ(tier_params(1).hearts, 6);
    EXPECT_DOUBLE_EQ(tier_params(1).heartDropRate, 0.60);
    EXPECT_EQ(tier_params(2).hearts, 8);
    EXPECT_DOUBLE_EQ(tier_params(2).heartDropRate, 0.90);
    EXPECT_EQ(tier_params(3).hearts, 20);
    EXPECT_DOUBLE_EQ(tier_params(3).heartDropRate, 0.90);
}

TEST(Engine, NewSessionStartsClean) {
    const GameState g = session(arena(), 2);
    EXPECT_EQ(g.player, (Loc{{0, 0}, kRoomCenter}));
    EXPECT_EQ(g.hearts, 8);
    EXPECT_EQ(g.maxHearts, 8);
    EXPECT_EQ(g.bombs, 0);
    EXPECT_EQ(g.keys, 0);
    EXPECT_EQ(g.turn, 0);
    EXPECT_EQ(g.status, Status::Playing);
}

TEST(Engine, EnemyHitRateIsOneHalf) {
    Dungeon d = arena();
    d.rooms[{0, 0}].enemies.push_back({{7, 4}});
    GameState g = session(d, 3, 42);
    int hits = 0, swings = 0;
    for (int i = 0; i < 10000; ++i) {
        g.hearts = g.maxHearts;
        const auto ev = step(g, i % 2 ? kMoveW : kMoveE);
        int landed = 0;
        for (const Event& e : ev)
            if (e.type == EventType::Attacked && e.detail != "player") {
                ++swings;
                landed += e.detail == "hit";
            }
        ASSERT_EQ(count(ev, EventType::Damaged), landed);
        hits += landed;
    }
    ASSERT_EQ(swings, 10000);
    EXPECT_NEAR(static_cast<double>(hits) / swings, 0.5, 0.02);
}

TEST(Engine, HeartDropRatePerTier) {
    Dungeon d = arena();
    for (int tier = 0; tier <= kMaxTier; ++tier) {
        GameState g = session(d, tier, 100 + tier);
        const GameState base = g;
        int hearts = 0, bombs = 0;
        for (int i = 0; i < 10000; ++i) {
            g.player = base.player;
            g.rooms = base.rooms;
            g.rooms[{0, 0}].enemies = {{8, 5}};
            const auto ev = step(g, kMoveE);
            ASSERT_EQ(count(ev, EventType::EnemyKilled), 1);
            if (const Event* drop = find(ev, EventType::Drop)) {
                EXPECT_EQ(drop->cell, (Cell{8, 5}));
                hearts += drop->detail == "Heart";
                bombs += drop->detail == "Bomb";
            }
        }
        const double p = tier_params(tier).heartDropRate;
        EXPECT_NEAR(hearts / 10000.0, p, 0.02) << "tier " << tier;
        EXPECT_NEAR(bombs / 10000.0, (1 - p) * 0.30, 0.02) << "tier " << tier;
    }
}

TEST(Engine, ZeroDropRatesNeverDrop) {
    EngineOptions opts;
    opts.heartDropRate = 0.0;
    opts.bombDropRate = 0.0;
    GameState g = session(arena(), 2, 5, opts);
    EXPECT_DOUBLE_EQ(g.heart_drop_rate(), 0.0);
    const GameState base = g;
    for (int i = 0; i < 1000; ++i) {
        g.player = base.player;
        g.rooms = base.rooms;
        g.rooms[{0, 0}].enemies = {{8, 5}};
        const auto ev = step(g, kMoveE);
        ASSERT_EQ(count(ev, EventType::EnemyKilled), 1);
        ASSERT_EQ(count(ev, EventType::Drop), 0);
    }
}

TEST(Engine, AttackKillsAndClearsRoom) {
    Dungeon d = arena();
    d.rooms[{0, 0}].enemies.push_back({{8, 5}});
    d.rooms[{0, 1}] = open_room();
    set_door(d, {0, 0}, Side::S, DoorKind::SoftLocked);
    GameState g = session(d, 0, 3);
    ASSERT_FALSE(g.door({0, 0}, Side::S)->open);
    const auto ev = step(g, kMoveE);
    ASSERT_GE(ev.size(), 4u);
    EXPECT_EQ(ev[0].type, EventType::Attacked);
    EXPECT_EQ(ev[0].detail, "player");
    EXPECT_EQ(ev[1].type, EventType::EnemyKilled);
    EXPECT_EQ(g.player.cell, kRoomCenter);  // attacking does not move
    EXPECT_TRUE(g.rooms.at({0, 0}).enemies.empty());
    EXPECT_EQ(count(ev, EventType::RoomCleared), 1);
    EXPECT_TRUE(g.door({0, 0}, Side::S)->open);
    EXPECT_EQ(g.turn, 1);
}

TEST(Engine, BlockedMoveChangesNothing) {
    Dungeon d = arena();
    d.rooms[{0, 0}].set({7, 4}, Tile::Wall);
    d.rooms[{0, 0}].enemies.push_back({{3, 3}});
    GameState g = session(d, 0, 9);
    const auto before = state_to_json(g);
    const Rng rngBefore = g.rng;
    const auto ev = step(g, kMoveN);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].type, EventType::Blocked);
    EXPECT_EQ(ev[0].detail, "MoveN");
    EXPECT_EQ(state_to_json(g), before);
    EXPECT_TRUE(g.rng == rngBefore);
    EXPECT_EQ(step(g, {ActionKind::Bomb, Side::N})[0].type, EventType::Blocked);
    EXPECT_EQ(g.turn, 0);
}

TEST(Engine, LineOfSight) {
    Room r = open_room();
    EXPECT_TRUE(line_of_sight(r, {3, 5}, {7, 5}));
    EXPECT_FALSE(line_of_sight(r, {2, 5}, {7, 5}));
    EXPECT_TRUE(line_of_sight(r, {3, 3}, {5, 5}));
    EXPECT_FALSE(line_of_sight(r, {3, 3}, {6, 5}));
    r.set({5, 5}, Tile::Wall);
    EXPECT_FALSE(line_of_sight(r, {3, 5}, {7, 5}));
    r.set({5, 5}, Tile::Water);
    EXPECT_TRUE(line_of_sight(r, {3, 5}, {7, 5}));
}

TEST(Engine, EnemyChasesWithLineOfSight) {
    Dungeon d = arena();
    d.rooms[{0, 0}].enemies.push_back({{4, 5}});
    GameState g = session(d, 0, 2);
    g.player.cell = {8, 5};
    step(g, kMoveW);  // player at (7,5), enemy 3 away with a clear line
    EXPECT_EQ(g.rooms.at({0, 0}).enemies, (std::vector<Cell>{{5, 5}}));

    // Out of sight: the enemy wanders to some free orthogonal neighbour.
    Dungeon far = arena();
    far.rooms[{0, 0}].enemies.push_back({{2, 2}});
    GameState h = session(far, 0, 2);
    h.player.cell = {12, 8};
    step(h, kMoveW);
    const Cell e = h.rooms.at({0, 0}).enemies.at(0);
    EXPECT_TRUE((e == Cell{3, 2}) || (e == Cell{2, 3}));
}

TEST(Engine, RaftCrossing) {
    Dungeon d = arena();
    Room& r = d.rooms[{0, 0}];
    r.set({8, 5}, Tile::Water);
    GameState g = session(d);
    EXPECT_FALSE(raft_cross(g, Side::E));
    EXPECT_EQ(step(g, kMoveE)[0].type, EventType::Blocked);
    g.hasRaft = true;
    EXPECT_EQ(raft_cross(g, Side::E), (Cell{9, 5}));
    g.rooms[{0, 0}].enemies = {{9, 5}};
    EXPECT_FALSE(raft_cross(g, Side::E));
    g.rooms[{0, 0}].enemies.clear();
    step(g, kMoveE);
    EXPECT_EQ(g.player.cell, (Cell{9, 5}));

    Dungeon wide = arena();
    wide.rooms[{0, 0}].set({8, 5}, Tile::Water);
    wide.rooms[{0, 0}].set({9, 5}, Tile::Water);
    GameState w = session(wide);
    w.hasRaft = true;
    EXPECT_FALSE(raft_cross(w, Side::E));
}

TEST(Engine, RaftIsPickedUp) {
    Dungeon d = arena();
    d.rooms[{0, 0}].items.push_back({ItemKind::Raft, {8, 5}});
    GameState g = session(d);
    const auto ev = step(g, kMoveE);
    ASSERT_NE(find(ev, EventType::PickedUp), nullptr);
    EXPECT_TRUE(g.hasRaft);
}

TEST(Engine, DeathsEscalateTier) {
    Dungeon d = arena();
    d.rooms[{0, 0}].enemies.push_back({{7, 4}});
    GameState g = session(d, 0, 11);
    const int expected[] = {6, 8, 20, 20};
    for (int death = 0; death < 4; ++death) {
        const int deathsBefore = g.deaths;
        std::vector<Event> ev;
        for (int i = 0; i < 200 && g.deaths == deathsBefore; ++i) {
            g.hearts = 1;
            ev = step(g, i % 2 ? kMoveW : kMoveE);
        }
        ASSERT_EQ(g.deaths, deathsBefore + 1);
        ASSERT_NE(find(ev, EventType::Died), nullptr);
        ASSERT_NE(find(ev, EventType::Restarted), nullptr);
        EXPECT_EQ(g.tier, std::min(death + 1, kMaxTier));
        EXPECT_EQ(g.maxHearts, expected[death]);
        EXPECT_EQ(g.hearts, expected[death]);
        EXPECT_EQ(g.player, (Loc{{0, 0}, kRoomCenter}));
        EXPECT_EQ(g.status, Status::Playing);
    }
}

TEST(Engine, KeysHiddenUntilRoomCleared) {
    Dungeon d = arena();
    d.rooms[{0, 0}].items.push_back({ItemKind::Key, {8, 5}});
    d.rooms[{0, 0}].enemies.push_back({{12, 8}});
    EngineOptions calm;
    calm.enemyHitChance = 0.0;
    GameState g = session(d, 0, 1, calm);
    EXPECT_TRUE(state_to_json(g)["rooms"]["0,0"]["items"].empty());
    step(g, kMoveE);
    EXPECT_EQ(g.keys, 0);
    g.rooms[{0, 0}].enemies.clear();
    g.player.cell = {9, 5};
    g.rooms[{0, 0}].enemies = {{10, 5}};
    const auto ev = step(g, kMoveE);  // kill the last enemy
    ASSERT_NE(find(ev, EventType::RoomCleared), nullptr);
    step(g, kMoveW);
    EXPECT_EQ(g.keys, 1);
    EXPECT_EQ(g.keysCollected, 1);
}

TEST(Engine, LockedDoorConsumesKeyAndAdmits) {
    Dungeon d = arena();
    set_door(d, {0, 0}, Side::E, DoorKind::Locked);
    GameState g = session(d);
    g.player.cell = {13, 5};
    EXPECT_EQ(step(g, kMoveE)[0].type, EventType::Blocked);
    g.keys = 1;
    const auto ev = step(g, kMoveE);
    ASSERT_NE(find(ev, EventType::DoorOpened), nullptr);
    EXPECT_EQ(g.player.cell, (Cell{14, 5}));
    EXPECT_EQ(g.keys, 0);
    EXPECT_EQ(g.locksOpened, 1);
    EXPECT_TRUE(g.door({1, 0}, Side::W)->open);
}

TEST(Engine, BombOpensBombableDoor) {
    Dungeon d = arena();
    set_door(d, {0, 0}, Side::E, DoorKind::Bombable);
    GameState g = session(d);
    g.player.cell = {13, 5};
    const Action bombE{ActionKind::Bomb, Side::E};
    EXPECT_EQ(step(g, bombE)[0].type, EventType::Blocked);
    EXPECT_EQ(step(g, kMoveE)[0].type, EventType::Blocked);
    g.bombs = 1;
    const auto ev = step(g, bombE);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].type, EventType::Bombed);
    EXPECT_EQ(ev[1].type, EventType::DoorOpened);
    EXPECT_EQ(g.bombs, 0);
    EXPECT_TRUE(g.door({0, 0}, Side::E)->open);
    EXPECT_NE(step(g, kMoveE)[0].type, EventType::Blocked);
}

TEST(Engine, PuzzlePushOpensPuzzleDoors) {
    Dungeon d = arena();
    set_door(d, {0, 0}, Side::E, DoorKind::Puzzle);
    d.rooms[{0, 0}].puzzle = make_puzzle({8, 5}, Side::E);
    GameState g = session(d);
    ASSERT_EQ(g.player.cell, (Cell{7, 5}));
    const auto ev = step(g, kMoveE);
    ASSERT_NE(find(ev, EventType::PuzzleSolved), nullptr);
    EXPECT_EQ(g.block_cell({0, 0}), (Cell{9, 5}));
    EXPECT_TRUE(g.door({0, 0}, Side::E)->open);
    EXPECT_EQ(step(g, kMoveE)[0].type, EventType::Blocked);  // block is now in the way
}

TEST(Engine, WinningEndsSession) {
    GameState g = session(row(1));
    g.player.cell = {6, 5};
    g.rooms.at({0, 0}).items = {{ItemKind::Triforce, kRoomCenter}};
    const auto ev = step(g, kMoveE);
    ASSERT_NE(find(ev, EventType::Won), nullptr);
    EXPECT_EQ(g.status, Status::Won);
    EXPECT_THROW(step(g, kMoveW), StateError);
}

TEST(Engine, RespawnChanceOnEmptyRoomEntry) {
    GameState g = session(arena(), 3, 21);
    const GameState base = g;
    int spawned = 0;
    for (int i = 0; i < 10000; ++i) {
        g.player = {{0, 0}, {15, 5}};
        g.rooms = base.rooms;
        g.hearts = g.maxHearts;
        step(g, kMoveE);
        ASSERT_EQ(g.player.room, (GridPos{1, 0}));
        const auto n = g.rooms.at({1, 0}).enemies.size();
        ASSERT_LE(n, 3u);
        spawned += n > 0;
    }
    EXPECT_NEAR(spawned / 10000.0, 0.30, 0.02);

    g.bombs = 1;
    for (int i = 0; i < 200; ++i) {
        g.player = {{0, 0}, {15, 5}};
        g.rooms = base.rooms;
        step(g, kMoveE);
        ASSERT_TRUE(g.rooms.at({1, 0}).enemies.empty());
    }
}

TEST(Engine, SeededPlayIsDeterministicAndConservesKeys) {
    const auto bb = load_backbone(default_data_dir() / "backbone.txt");
    const RuleSet rules = load_rules(default_data_dir() / "rules.txt");
    Room pool = open_room();
    const RoomSource src = RoomSource::pool(std::make_shared<std::vector<Room>>(std::vector<Room>{pool}));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = std::make_shared<Dungeon>(build_dungeon(bb, rules, src, seed));
        GameState a = new_session(d, 0, seed), b = new_session(d, 0, seed);
        Rng moves(seed);
        for (int t = 0; t < 2000 && a.status == Status::Playing; ++t) {
            const Action act{uniform01(moves) < 0.1 ? ActionKind::Bomb : ActionKind::Move,
                             kSides[uniform_index(moves, 4)]};
            const auto ea = step(a, act);
            ASSERT_EQ(ea, step(b, act));
            ASSERT_EQ(a.keys, a.keysCollected - a.locksOpened);
            ASSERT_GE(a.keys, 0);
            ASSERT_GE(a.hearts, 1);
            ASSERT_LE(a.hearts, a.maxHearts);
        }
        EXPECT_EQ(state_to_json(a), state_to_json(b));
    }
}

TEST(Engine, WireFormat) {
    Dungeon d = arena();
    d.rooms[{0, 0}].items.push_back({ItemKind::Key, {3, 3}});
    d.rooms[{0, 0}].enemies.push_back({{12, 8}});
    const auto j = state_to_json(session(d));
    for (const char* k : {"status", "turn", "tier", "deaths", "hearts", "maxHearts", "heartDropRate", "bombs", "keys",
                          "hasRaft", "player", "rooms", "doors"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j["status"], "Playing");
    EXPECT_EQ(j["player"]["cell"], nlohmann::json::array({7, 5}));
    EXPECT_EQ(j["rooms"]["0,0"]["enemies"].size(), 1u);
    EXPECT_TRUE(j["rooms"]["0,0"]["items"].empty());  // key hidden behind the enemy
    EXPECT_EQ(j["doors"].size(), 2u);
    const Event e{EventType::Drop, 3, {1, 2}, {4, 5}, "Heart"};
    EXPECT_EQ(event_to_json(e), nlohmann::json::parse(
                                    R"({"type":"Drop","turn":3,"room":[1,2],"cell":[4,5],"detail":"Heart"})"));
}
