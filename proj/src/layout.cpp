#include "zd/layout.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace zd {

std::vector<Edge> bfs_edges(const MissionGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<std::vector<int>> out(n);
    for (const Edge& e : g.edges) out[e.from].push_back(e.to);
    for (auto& v : out) std::sort(v.begin(), v.end());

    std::vector<Edge> edges;
    if (g.startNode < 0) return edges;
    std::vector<bool> seen(n, false);
    std::deque<int> q{g.startNode};
    seen[g.startNode] = true;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : out[u]) {
            edges.push_back({u, v});
            if (!seen[v]) {
                seen[v] = true;
                q.push_back(v);
            }
        }
    }
    return edges;
}

std::vector<int> bfs_order(const MissionGraph& g) {
    std::vector<int> order;
    if (g.startNode < 0) return order;
    std::vector<bool> seen(g.nodes.size(), false);
    order.push_back(g.startNode);
    seen[g.startNode] = true;
    for (const Edge& e : bfs_edges(g))
        if (!seen[e.to]) {
            seen[e.to] = true;
            order.push_back(e.to);
        }
    return order;
}

Placement place_rooms(const MissionGraph& g, Rng& rng, std::size_t maxSteps) {
    const int n = static_cast<int>(g.nodes.size());
    if (g.startNode < 0) throw PlacementExhausted("graph has no start node");
    const auto edges = bfs_edges(g);

    std::vector<std::optional<GridPos>> pos(n);
    std::map<GridPos, int> occupied;
    auto place = [&](int node, GridPos p) {
        pos[node] = p;
        occupied[p] = node;
    };
    auto unplace = [&](int node) {
        occupied.erase(*pos[node]);
        pos[node].reset();
    };

    struct Decision {
        std::size_t edge;
        int node;
        std::array<GridPos, 4> options;
        int next = 0;
    };
    std::vector<Decision> stack;
    std::size_t steps = 0;

    auto advance = [&](Decision& d) -> bool {
        while (d.next < 4) {
            GridPos p = d.options[d.next++];
            ++steps;
            if (!occupied.count(p)) {
                place(d.node, p);
                return true;
            }
        }
        return false;
    };

    place(g.startNode, {0, 0});
    std::size_t i = 0;
    while (i < edges.size()) {
        const Edge e = edges[i];
        if (pos[e.to]) {
            ++i;
            continue;
        }
        Decision d{i, e.to, {}, 0};
        std::array<Side, 4> dirs = kSides;
        shuffle(dirs, rng);
        for (int k = 0; k < 4; ++k) d.options[k] = step(*pos[e.from], dirs[k]);
        if (advance(d)) {
            stack.push_back(d);
            ++i;
            continue;
        }
        // Chronological backtracking: undo the latest placement and try its
        // next untried alternative.
        for (;;) {
            if (stack.empty() || steps > maxSteps)
                throw PlacementExhausted("no grid embedding found for " + std::to_string(n) + " rooms");
            Decision& top = stack.back();
            unplace(top.node);
            if (advance(top)) {
                i = top.edge + 1;
                break;
            }
            stack.pop_back();
        }
    }

    Placement out;
    for (int v = 0; v < n; ++v) {
        if (!pos[v]) throw PlacementExhausted("node " + std::to_string(v) + " is unreachable from start");
        out.positions.push_back(*pos[v]);
    }
    auto plan = realize_doors(out, g);
    out.realizedEdges = plan.realized;
    out.lostEdges = plan.lost;
    return out;
}

DoorPlan realize_doors(const Placement& placement, const MissionGraph& g) {
    DoorPlan plan;
    std::set<DoorId> made;
    for (const Edge& e : g.edges) {
        GridPos a = placement.positions[e.from];
        GridPos b = placement.positions[e.to];
        auto side = facing_side(a, b);
        if (!side) {
            plan.lost.push_back(e);
            continue;
        }
        plan.realized.push_back(e);
        DoorId id = canonical_door(a, *side);
        if (made.insert(id).second) plan.doors.emplace_back(id.room, id.side);
    }
    return plan;
}

namespace {

void set_door(Dungeon& d, GridPos p, Side s, DoorKind kind, bool open) {
    for (auto [room, side] : {std::pair{p, s}, std::pair{step(p, s), opposite(s)}}) {
        Room* r = d.room_at(room);
        if (!r) continue;
        r->door(side) = Door{side, kind, open};
        for (Cell c : door_slot(side)) r->set(c, Tile::Floor);
    }
}

}  // namespace

void apply_doors(Dungeon& d, const DoorPlan& plan) {
    for (auto [p, s] : plan.doors) set_door(d, p, s, DoorKind::Normal, true);
}

RoomSource RoomSource::gan(std::shared_ptr<const WeightBundle> weights) {
    RoomSource s;
    s.kind_ = SourceKind::Gan;
    s.weights_ = std::move(weights);
    return s;
}

RoomSource RoomSource::pool(std::shared_ptr<const std::vector<Room>> rooms) {
    if (!rooms || rooms->empty()) throw Error("room pool is empty");
    RoomSource s;
    s.kind_ = SourceKind::Pool;
    s.pool_ = std::move(rooms);
    return s;
}

Room RoomSource::draw(Rng& rng) const {
    if (kind_ == SourceKind::Gan) return sample_room(rng, *weights_);
    Room r = pick(*pool_, rng);
    // Pool rooms arrive door-stripped; drop any placements they may carry.
    r.items.clear();
    r.enemies.clear();
    r.puzzle.reset();
    r.symbol.reset();
    for (Side s : kSides) r.door(s).reset();
    return r;
}

std::vector<Cell> empty_floor_cells(const Room& r) {
    std::vector<Cell> out;
    for (Cell c : interior_cells()) {
        if (r.at(c) != Tile::Floor) continue;
        bool taken = std::any_of(r.items.begin(), r.items.end(), [c](const auto& i) { return i.cell == c; }) ||
                     std::any_of(r.enemies.begin(), r.enemies.end(), [c](const auto& e) { return e.cell == c; }) ||
                     (r.puzzle && r.puzzle->blockCell == c);
        if (!taken) out.push_back(c);
    }
    return out;
}

namespace {

std::vector<Cell> unoccupied_interior(const Room& r) {
    std::vector<Cell> out;
    for (Cell c : interior_cells()) {
        bool taken = std::any_of(r.items.begin(), r.items.end(), [c](const auto& i) { return i.cell == c; }) ||
                     std::any_of(r.enemies.begin(), r.enemies.end(), [c](const auto& e) { return e.cell == c; }) ||
                     (r.puzzle && r.puzzle->blockCell == c);
        if (!taken) out.push_back(c);
    }
    return out;
}

// Items must exist even in rooms without free floor; repair carves to them.
Cell item_cell(const Room& r, Rng& rng) {
    auto cells = empty_floor_cells(r);
    if (cells.empty()) cells = unoccupied_interior(r);
    return pick(cells, rng);
}

void add_enemies(Room& r, Rng& rng) {
    const int count = uniform_int(rng, 1, 3);
    for (int i = 0; i < count; ++i) {
        auto cells = empty_floor_cells(r);
        if (cells.empty()) break;
        r.enemies.push_back({pick(cells, rng)});
    }
}

}  // namespace

Dungeon decorate(Dungeon d, Rng& rng, const DecorateOptions& opts) {
    const auto order = bfs_order(d.graph);
    std::vector<int> bfsIndex(d.graph.nodes.size(), -1);
    for (int i = 0; i < static_cast<int>(order.size()); ++i) bfsIndex[order[i]] = i;

    auto warn = [&](int node, const std::string& msg) {
        d.warnings.push_back("node " + std::to_string(node) + " (" + symbol_name(d.graph.nodes[node]) + "): " + msg);
    };

    // Door on the realized edge to the lowest-BFS-index successor.
    auto onward_door = [&](int node) -> std::optional<Side> {
        auto succ = d.graph.successors(node);
        if (succ.empty()) return std::nullopt;
        int best = *std::min_element(succ.begin(), succ.end(),
                                     [&](int a, int b) { return bfsIndex[a] < bfsIndex[b]; });
        auto side = facing_side(d.positions[node], d.positions[best]);
        if (!side || !d.room_at(d.positions[node])->has_door(*side)) return std::nullopt;
        return side;
    };
    auto obstacle_door = [&](int node, DoorKind kind) {
        auto side = onward_door(node);
        if (!side) {
            warn(node, std::string("no realized onward door for ") + std::string(door_kind_name(kind)) +
                           " obstacle, skipped");
            return;
        }
        const auto& existing = d.room_at(d.positions[node])->door(*side);
        if (existing && existing->kind != DoorKind::Normal)
            warn(node, "onward door already " + std::string(door_kind_name(existing->kind)));
        set_door(d, d.positions[node], *side, kind, false);
    };

    bool raftPlaced = false;
    for (int node : order) {
        Room& room = *d.room_at(d.positions[node]);
        switch (d.graph.nodes[node].kind) {
            case SymbolKind::Start: break;
            case SymbolKind::Enemy: add_enemies(room, rng); break;
            case SymbolKind::Key:
                room.items.push_back({ItemKind::Key, item_cell(room, rng)});
                add_enemies(room, rng);
                break;
            case SymbolKind::Lock: obstacle_door(node, DoorKind::Locked); break;
            case SymbolKind::SoftLock:
                obstacle_door(node, DoorKind::SoftLocked);
                add_enemies(room, rng);
                if (!raftPlaced) {
                    room.items.push_back({ItemKind::Raft, item_cell(room, rng)});
                    raftPlaced = true;
                }
                break;
            case SymbolKind::Puzzle: {
                std::vector<Cell> cells;
                for (Cell c : unoccupied_interior(room)) {
                    bool any = std::any_of(kSides.begin(), kSides.end(), [&](Side s) {
                        auto p = make_puzzle(c, s);
                        return in_interior(p.prePush) && in_interior(p.postPush);
                    });
                    if (any) cells.push_back(c);
                }
                Cell block = pick(cells, rng);
                std::vector<Side> dirs;
                for (Side s : kSides) {
                    auto p = make_puzzle(block, s);
                    if (in_interior(p.prePush) && in_interior(p.postPush)) dirs.push_back(s);
                }
                room.puzzle = make_puzzle(block, pick(dirs, rng));
                room.set(block, Tile::Floor);
                obstacle_door(node, DoorKind::Puzzle);
                break;
            }
            case SymbolKind::Triforce: room.items.push_back({ItemKind::Triforce, kRoomCenter}); break;
        }
    }

    std::vector<DoorId> normal;
    for (const auto& [pos, room] : d.rooms)
        for (Side s : {Side::E, Side::S})
            if (room.door(s) && room.door(s)->kind == DoorKind::Normal) normal.push_back({pos, s});
    bool anyBombable = false;
    for (const auto& [pos, room] : d.rooms)
        for (Side s : kSides) anyBombable = anyBombable || (room.door(s) && room.door(s)->kind == DoorKind::Bombable);
    for (const DoorId& id : normal) {
        if (bernoulli(rng, opts.bombableProbability)) {
            set_door(d, id.room, id.side, DoorKind::Bombable, false);
            anyBombable = true;
        }
    }
    if (!anyBombable) {
        if (normal.empty()) {
            d.warnings.push_back("no normal door available to make bombable");
        } else {
            const DoorId& id = pick(normal, rng);
            set_door(d, id.room, id.side, DoorKind::Bombable, false);
        }
    }
    return d;
}

Dungeon build_dungeon(const std::vector<RoomSymbol>& backbone, const RuleSet& rules, const RoomSource& source,
                      std::uint64_t seed, const BuildOptions& opts) {
    Rng grammarRng = derive_rng(seed, "grammar");
    MissionGraph g = expand(backbone, rules, grammarRng);
    auto report = validate(g);
    if (!report.ok) {
        std::string msg = "seed " + std::to_string(seed) + ": mission graph invalid:";
        for (const auto& v : report.violations) msg += " " + v + ";";
        throw GenerationError(msg);
    }

    std::optional<Placement> placement;
    for (int attempt = 0; attempt < opts.placementAttempts && !placement; ++attempt) {
        Rng placeRng = derive_rng(seed, "placement-" + std::to_string(attempt));
        try {
            placement = place_rooms(g, placeRng);
        } catch (const PlacementExhausted&) {
        }
    }
    if (!placement)
        throw GenerationError("seed " + std::to_string(seed) + ": placement failed " +
                              std::to_string(opts.placementAttempts) + " times");

    Dungeon d;
    d.graph = g;
    d.positions = placement->positions;
    d.meta.seed = seed;
    d.meta.sourceKind = source.kind();
    Rng roomRng = derive_rng(seed, "rooms");
    for (int node : bfs_order(g)) {
        Room r = source.draw(roomRng);
        r.symbol = g.nodes[node];
        d.rooms[d.positions[node]] = std::move(r);
    }
    DoorPlan plan = realize_doors(*placement, g);
    apply_doors(d, plan);
    d.lostEdges = plan.lost;

    Rng decoRng = derive_rng(seed, "decorate");
    return decorate(std::move(d), decoRng, opts.decorate);
}

}  // namespace zd
