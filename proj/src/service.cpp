#include "zd/service.hpp"

#include <random>

#include "httplib.h"
#include "zd/dungeon_io.hpp"
#include "zd/layout.hpp"
#include "zd/pipeline.hpp"

namespace zd {

namespace {

using nlohmann::json;

ApiResponse error(int status, const std::string& message) { return {status, {{"error", message}}}; }

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::optional<std::uint64_t> seed_field(const json& j, const char* key, std::string& problem) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    const json& v = j[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos && s.size() <= 20) {
            try {
                return std::stoull(s);
            } catch (const std::exception&) {
            }
        }
    }
    problem = std::string("'") + key + "' must be a non-negative integer";
    return std::nullopt;
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

ApiResponse Service::create_dungeon(const json& req) {
    if (!req.is_object()) return error(400, "request body must be a JSON object");
    const std::string source = req.value("source", std::string("gan"));
    std::optional<RoomSource> roomSource;
    if (source == "gan") {
        if (!config_.weights) return error(400, "source 'gan' needs generator weights, none configured");
        roomSource = RoomSource::gan(config_.weights);
    } else if (source == "pool") {
        if (!config_.pool) return error(400, "source 'pool' needs a room pool, none configured");
        roomSource = RoomSource::pool(config_.pool);
    } else {
        return error(400, "source must be 'gan' or 'pool'");
    }
    std::string problem;
    auto seed = seed_field(req, "seed", problem);
    if (!problem.empty()) return error(400, problem);
    const std::uint64_t s = seed.value_or(entropy_seed());

    Dungeon d;
    try {
        d = generate_beatable(config_.backbone, config_.rules, *roomSource, s).dungeon;
    } catch (const Error& e) {
        return error(500, e.what());
    }
    auto stored = std::make_shared<const Dungeon>(std::move(d));
    std::string id;
    {
        std::lock_guard lock(storeMutex_);
        id = "d" + std::to_string(nextDungeon_++);
        dungeons_[id] = stored;
    }
    return {200, {{"dungeonId", id}, {"seed", s}, {"dungeon", dungeon_to_json(*stored)}}};
}

ApiResponse Service::get_dungeon(const std::string& id) {
    std::lock_guard lock(storeMutex_);
    auto it = dungeons_.find(id);
    if (it == dungeons_.end()) return error(404, "unknown dungeon '" + id + "'");
    return {200, {{"dungeonId", id}, {"dungeon", dungeon_to_json(*it->second)}}};
}

ApiResponse Service::create_session(const json& req) {
    if (!req.is_object() || !req.contains("dungeonId") || !req["dungeonId"].is_string())
        return error(400, "'dungeonId' (string) is required");
    const std::string dungeonId = req["dungeonId"].get<std::string>();
    int tier = 0;
    if (req.contains("tier")) {
        if (!req["tier"].is_number_integer() || req["tier"].get<int>() < 0 || req["tier"].get<int>() > kMaxTier)
            return error(400, "'tier' must be an integer in 0..3");
        tier = req["tier"].get<int>();
    }
    std::string problem;
    auto seed = seed_field(req, "seed", problem);
    if (!problem.empty()) return error(400, problem);
    const std::uint64_t s = seed.value_or(entropy_seed());

    std::shared_ptr<const Dungeon> dungeon;
    {
        std::lock_guard lock(storeMutex_);
        auto it = dungeons_.find(dungeonId);
        if (it == dungeons_.end()) return error(404, "unknown dungeon '" + dungeonId + "'");
        dungeon = it->second;
    }
    auto session = std::make_shared<Session>();
    session->dungeonId = dungeonId;
    session->state = new_session(dungeon, tier, s, config_.engine);
    session->createdAt = session->lastActionAt = Clock::now();
    json state = state_to_json(session->state);
    std::string id;
    {
        std::lock_guard lock(storeMutex_);
        id = "s" + std::to_string(nextSession_++);
        sessions_[id] = session;
    }
    expire_idle(Clock::now());
    return {200, {{"sessionId", id}, {"seed", s}, {"state", state}}};
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& id) {
    std::lock_guard lock(storeMutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse Service::act(const std::string& sessionId, const json& req) {
    auto session = find_session(sessionId);
    if (!session) return error(404, "unknown session '" + sessionId + "'");
    if (!req.is_object() || !req.contains("action") || !req["action"].is_string())
        return error(400, "'action' (string) is required");
    auto action = action_from_name(req["action"].get<std::string>());
    if (!action) return error(400, "unknown action '" + req["action"].get<std::string>() + "'");

    std::lock_guard lock(session->mutex);
    session->lastActionAt = Clock::now();
    try {
        auto events = step(session->state, *action);
        return {200, {{"state", state_to_json(session->state)}, {"events", events_to_json(events)}}};
    } catch (const StateError& e) {
        return error(409, e.what());
    }
}

ApiResponse Service::get_session(const std::string& sessionId) {
    auto session = find_session(sessionId);
    if (!session) return error(404, "unknown session '" + sessionId + "'");
    std::lock_guard lock(session->mutex);
    session->lastActionAt = Clock::now();
    return {200, {{"sessionId", sessionId}, {"dungeonId", session->dungeonId}, {"state", state_to_json(session->state)}}};
}

std::size_t Service::expire_idle(Clock::time_point now) {
    std::lock_guard lock(storeMutex_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        Clock::time_point last;
        {
            std::lock_guard sessionLock(it->second->mutex);
            last = it->second->lastActionAt;
        }
        if (now - last > config_.idleExpiry) {
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

std::size_t Service::session_count() {
    std::lock_guard lock(storeMutex_);
    return sessions_.size();
}

void Service::mount(httplib::Server& server) {
    auto reply = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto parse = [](const httplib::Request& req) -> std::optional<json> {
        if (req.body.empty()) return json::object();
        json j = json::parse(req.body, nullptr, false);
        if (j.is_discarded()) return std::nullopt;
        return j;
    };
    auto bad_json = [reply](httplib::Response& res) { reply(res, error(400, "request body is not valid JSON")); };

    server.Post("/api/dungeons", [=, this](const httplib::Request& req, httplib::Response& res) {
        auto j = parse(req);
        if (!j) return bad_json(res);
        reply(res, create_dungeon(*j));
    });
    server.Get(R"(/api/dungeons/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_dungeon(req.matches[1]));
    });
    server.Post("/api/sessions", [=, this](const httplib::Request& req, httplib::Response& res) {
        auto j = parse(req);
        if (!j) return bad_json(res);
        reply(res, create_session(*j));
    });
    server.Post(R"(/api/sessions/([^/]+)/action)", [=, this](const httplib::Request& req, httplib::Response& res) {
        auto j = parse(req);
        if (!j) {
            if (!find_session(req.matches[1])) return reply(res, error(404, "unknown session"));
            return bad_json(res);
        }
        reply(res, act(req.matches[1], *j));
    });
    server.Get(R"(/api/sessions/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_session(req.matches[1]));
    });
}

void serve(Service& service, const std::string& host, int port) {
    httplib::Server server;
    // httplib's default also sets SO_REUSEPORT, which lets a second server
    // share an occupied port silently.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    service.mount(server);
    if (!server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    server.listen_after_bind();
}

}  // namespace zd
