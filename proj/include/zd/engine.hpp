#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zd/action.hpp"
#include "zd/core.hpp"
#include "zd/rng.hpp"
#include "zd/world.hpp"

namespace zd {

class StateError : public Error {
public:
    using Error::Error;
};

struct TierParams {
    int hearts = 4;
    double heartDropRate = 0.30;
};
inline constexpr int kMaxTier = 3;
/// Tier 0..3 -> (4, 0.30), (6, 0.60), (8, 0.90), (20, 0.90).
TierParams tier_params(int tier);

struct EngineOptions {
    bool enemiesEnabled = true;
    bool infiniteBombs = false;
    double enemyHitChance = 0.5;
    double bombDropRate = 0.30;
    double respawnChance = 0.30;
    /// Replaces the tier's heart drop rate when set.
    std::optional<double> heartDropRate;
};

enum class Status : std::uint8_t { Playing, Won, Dead };
std::string_view status_name(Status s);

struct RoomState {
    std::vector<Cell> enemies;
    std::vector<ItemPlacement> items;
    bool keyRevealed = true;
    bool pushed = false;
};

struct GameState {
    std::shared_ptr<const Dungeon> dungeon;
    EngineOptions options;
    Loc player;
    int hearts = 0;
    int maxHearts = 0;
    int bombs = 0;
    int keys = 0;
    bool hasRaft = false;
    int keysCollected = 0;
    int locksOpened = 0;
    std::map<GridPos, RoomState> rooms;
    std::map<DoorId, Door> doors;
    int tier = 0;
    int deaths = 0;
    int turn = 0;
    Status status = Status::Playing;
    Rng rng;

    double heart_drop_rate() const;
    /// Current position of the room's puzzle block, if it has one.
    std::optional<Cell> block_cell(GridPos room) const;
    const Door* door(GridPos room, Side side) const;
};

enum class EventType : std::uint8_t {
    Moved,
    Blocked,
    Attacked,
    EnemyKilled,
    Drop,
    PickedUp,
    DoorOpened,
    Bombed,
    PuzzleSolved,
    RoomCleared,
    Damaged,
    Died,
    Restarted,
    Won
};
std::string_view event_type_name(EventType t);

struct Event {
    EventType type = EventType::Moved;
    int turn = 0;
    GridPos room;
    Cell cell;
    std::string detail;
    bool operator==(const Event&) const = default;
};

/// Player on the start cell, 0 bombs, 0 keys, hearts from the tier, pristine
/// doors, enemies and items.
GameState new_session(std::shared_ptr<const Dungeon> dungeon, int tier, std::uint64_t seed,
                      const EngineOptions& options = {});

/// One player action, then the enemy phase when the action took a turn.
/// Rejected moves leave the state untouched apart from the Blocked event.
/// Throws StateError unless the session is Playing.
std::vector<Event> step(GameState& state, Action action);

/// Manhattan distance at most 4 and no Wall on line4 between the cells.
bool line_of_sight(const Room& room, Cell enemy, Cell player);

/// Landing cell when crossing the Water cell in `dir` from the player's cell:
/// requires the raft, a single Water tile and Floor beyond it.
std::optional<Cell> raft_cross(const GameState& state, Side dir);

/// Restarts the dungeon one tier up (capped), keeping the death count and
/// the random stream.
void on_death(GameState& state);

/// Heart with the tier rate, else a bomb with the bomb rate, else nothing.
/// The drop is added to the room at `cell`.
std::optional<ItemKind> drop_roll(GameState& state, GridPos room, Cell cell);

nlohmann::json state_to_json(const GameState& state);
nlohmann::json event_to_json(const Event& e);
nlohmann::json events_to_json(const std::vector<Event>& events);

}  // namespace zd
