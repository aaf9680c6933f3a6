#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zd/engine.hpp"
#include "zd/gan.hpp"
#include "zd/grammar.hpp"

namespace httplib {
class Server;
}

namespace zd {

struct ServiceConfig {
    std::shared_ptr<const WeightBundle> weights;     // enables source "gan"
    std::shared_ptr<const std::vector<Room>> pool;   // enables source "pool"
    std::vector<RoomSymbol> backbone;
    RuleSet rules;
    std::chrono::seconds idleExpiry{30 * 60};
    EngineOptions engine;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Dungeon store and game sessions behind the HTTP API. Dungeons are kept
/// for the life of the process; sessions expire after `idleExpiry` without
/// requests. Actions on one session are applied one at a time in arrival
/// order; distinct sessions proceed in parallel.
class Service {
public:
    using Clock = std::chrono::steady_clock;

    explicit Service(ServiceConfig config);

    /// {source: "gan"|"pool", seed?} -> {dungeonId, seed, dungeon}
    ApiResponse create_dungeon(const nlohmann::json& request);
    ApiResponse get_dungeon(const std::string& id);
    /// {dungeonId, tier?, seed?} -> {sessionId, seed, state}
    ApiResponse create_session(const nlohmann::json& request);
    /// {action: "MoveN".."BombW"} -> {state, events}
    ApiResponse act(const std::string& sessionId, const nlohmann::json& request);
    ApiResponse get_session(const std::string& sessionId);

    /// Drops sessions idle since before `now - idleExpiry`. Returns how many.
    std::size_t expire_idle(Clock::time_point now);
    std::size_t session_count();

    /// Registers the /api routes on `server`.
    void mount(httplib::Server& server);

private:
    struct Session {
        std::mutex mutex;
        std::string dungeonId;
        GameState state;
        Clock::time_point createdAt;
        Clock::time_point lastActionAt;
    };

    std::shared_ptr<Session> find_session(const std::string& id);

    ServiceConfig config_;
    std::mutex storeMutex_;
    std::map<std::string, std::shared_ptr<const Dungeon>> dungeons_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t nextDungeon_ = 1;
    std::uint64_t nextSession_ = 1;
};

/// Blocks serving the API on host:port. Throws Error when the port cannot
/// be bound.
void serve(Service& service, const std::string& host, int port);

}  // namespace zd
