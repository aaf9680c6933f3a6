#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zd/dungeon_io.hpp"
#include "zd/gan.hpp"
#include "zd/grammar.hpp"
#include "zd/layout.hpp"
#include "zd/metrics.hpp"
#include "zd/pipeline.hpp"
#include "zd/repair.hpp"
#include "zd/service.hpp"
#include "zd/vglc.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitGeneration = 3;

// Input problems the user can fix: bad paths, bad files, bad flags.
struct InputError : zd::Error {
    using zd::Error::Error;
};

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

struct GrammarFiles {
    std::string rules;
    std::string backbone;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--rules", rules, "Rule file (default: <data dir>/rules.txt)");
        cmd->add_option("--backbone", backbone, "Backbone file (default: <data dir>/backbone.txt)");
    }
    zd::RuleSet load_rules() const {
        return zd::load_rules(rules.empty() ? zd::default_data_dir() / "rules.txt" : fs::path(rules));
    }
    std::vector<zd::RoomSymbol> load_backbone() const {
        return zd::load_backbone(backbone.empty() ? zd::default_data_dir() / "backbone.txt" : fs::path(backbone));
    }
};

std::vector<fs::path> expand_paths(const std::vector<std::string>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            out.insert(out.end(), files.begin(), files.end());
        } else if (fs::is_regular_file(p)) {
            out.push_back(p);
        } else {
            throw InputError("no such file or directory: " + in);
        }
    }
    if (out.empty()) throw InputError("no dungeon files given");
    return out;
}

int cmd_ingest(const std::string& corpusDir, const std::string& outDir) {
    zd::Corpus corpus = zd::load_corpus(corpusDir);
    fs::create_directories(outDir);
    zd::save_room_pool(fs::path(outDir) / "pool.json", corpus.uniqueRooms, corpus.uniqueSources);
    zd::write_text_file(fs::path(outDir) / "onehot.txt", zd::onehot_text(corpus.uniqueRooms));
    std::cout << "dungeons: " << corpus.dungeons.size() << "\n"
              << "rooms: " << corpus.allRooms.size() << "\n"
              << "unique rooms: " << corpus.uniqueRooms.size() << "\n";
    for (const auto& v : corpus.dungeons) std::cout << "  " << v.name << " (" << v.id << ")\n";
    return 0;
}

struct GenerateArgs {
    std::string source = "gan";
    std::uint64_t seed = 1;
    std::string weights;
    std::string pool;
    int count = 1;
    std::string out = "dungeons";
    bool noRepair = false;
    GrammarFiles grammar;
};

zd::RoomSource make_source(const std::string& source, std::string weights, std::string pool) {
    if (source == "gan") {
        if (weights.empty()) weights = env_or("ZD_WEIGHTS", "");
        if (weights.empty()) throw InputError("--source gan needs --weights or $ZD_WEIGHTS");
        return zd::RoomSource::gan(std::make_shared<const zd::WeightBundle>(zd::load_weights(weights)));
    }
    if (source == "pool") {
        if (pool.empty()) pool = env_or("ZD_POOL", "");
        if (pool.empty()) throw InputError("--source pool needs --pool or $ZD_POOL");
        return zd::RoomSource::pool(std::make_shared<const std::vector<zd::Room>>(zd::load_room_pool(pool)));
    }
    throw InputError("--source must be gan or pool");
}

int cmd_generate(const GenerateArgs& a) {
    if (a.count < 1) throw InputError("--count must be at least 1");
    const auto source = make_source(a.source, a.weights, a.pool);
    const auto rules = a.grammar.load_rules();
    const auto backbone = a.grammar.load_backbone();
    fs::create_directories(a.out);
    for (int i = 0; i < a.count; ++i) {
        const std::uint64_t seed = a.count == 1 ? a.seed : zd::batch_seed(a.seed, i);
        zd::Dungeon d;
        int rooms = 0;
        if (a.noRepair) {
            d = zd::build_dungeon(backbone, rules, source, seed);
        } else {
            auto g = zd::generate_beatable(backbone, rules, source, seed);
            d = std::move(g.dungeon);
            rooms = g.roomsRepaired;
        }
        char name[32];
        std::snprintf(name, sizeof name, "dungeon_%03d.json", i);
        d.meta.name = std::string(name, std::strlen(name) - 5);
        zd::save_dungeon(fs::path(a.out) / name, d);
        std::cout << name << " seed=" << d.meta.seed << " rooms=" << d.rooms.size()
                  << " repairCount=" << d.meta.repairCount << " roomsRepaired=" << rooms
                  << " lostEdges=" << d.lostEdges.size() << "\n";
    }
    return 0;
}

int cmd_solve(const std::vector<std::string>& inputs) {
    int unsolved = 0;
    for (const auto& path : expand_paths(inputs)) {
        zd::Dungeon d = zd::load_dungeon(path);
        auto r = zd::solve(d);
        if (r.solved) {
            std::cout << path.string() << ": solvable, plan length " << r.plan.size() << "\n";
        } else {
            ++unsolved;
            std::cout << path.string() << ": not solvable; unvisited POIs:";
            for (const auto& p : r.unvisited)
                std::cout << " " << zd::poi_kind_name(p.kind) << "@" << p.room.x << "," << p.room.y << ":" << p.cell.x
                          << "," << p.cell.y;
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_repair(const std::string& in, const std::string& out, std::uint64_t seed) {
    zd::Dungeon d = zd::load_dungeon(in);
    zd::Rng rng = zd::derive_rng(seed, "repair");
    auto r = zd::repair_loop(std::move(d), rng);
    zd::save_dungeon(out, r.dungeon);
    std::cout << out << ": repairCount=" << r.repairCount << " roomsRepaired=" << r.roomsRepaired << "\n";
    return 0;
}

int cmd_metrics(const std::vector<std::string>& inputs, const std::string& vglcDir, bool asJson) {
    std::vector<zd::Dungeon> dungeons;
    std::string label = "Generated";
    if (!vglcDir.empty()) {
        dungeons = zd::load_corpus(vglcDir).originals;
        label = "Original";
    }
    if (!inputs.empty())
        for (const auto& p : expand_paths(inputs)) dungeons.push_back(zd::load_dungeon(p));
    if (dungeons.empty()) throw InputError("no dungeons given (paths or --vglc)");

    std::vector<zd::TableRow> rows = {
        {label + " Dungeons", zd::summarize(dungeons, zd::Scope::Dungeons).summary},
        {"All " + label + " Rooms", zd::summarize(dungeons, zd::Scope::AllRooms).summary},
        {"Unique " + label + " Rooms", zd::summarize(dungeons, zd::Scope::UniqueRooms).summary},
    };
    if (asJson) {
        nlohmann::json perDungeon = nlohmann::json::array();
        for (const auto& d : dungeons) perDungeon.push_back({{"name", d.meta.name}, {"novelty", zd::dungeon_novelty(d)}});
        std::cout << nlohmann::json{{"table", zd::table_json(rows)}, {"dungeons", perDungeon}}.dump(2) << "\n";
    } else {
        std::cout << zd::format_table(rows);
    }
    return 0;
}

int cmd_serve(const std::string& host, int port, std::string weights, std::string pool, const GrammarFiles& g) {
    zd::ServiceConfig cfg;
    if (weights.empty()) weights = env_or("ZD_WEIGHTS", "");
    if (pool.empty()) pool = env_or("ZD_POOL", "");
    if (!weights.empty()) cfg.weights = std::make_shared<const zd::WeightBundle>(zd::load_weights(weights));
    if (!pool.empty()) cfg.pool = std::make_shared<const std::vector<zd::Room>>(zd::load_room_pool(pool));
    if (!cfg.weights && !cfg.pool) throw InputError("serve needs --weights and/or --pool");
    cfg.rules = g.load_rules();
    cfg.backbone = g.load_backbone();
    zd::Service service(std::move(cfg));
    std::cerr << "listening on " << host << ":" << port << "\n";
    zd::serve(service, host, port);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dungeon generation, repair, metrics and play service"};
    app.require_subcommand(1);

    std::string corpusDir, outDir;
    auto* ingest = app.add_subcommand("ingest", "Split a VGLC corpus into a room pool and one-hot export");
    ingest->add_option("corpus", corpusDir, "Directory of VGLC .txt dungeons")->required();
    ingest->add_option("out", outDir, "Output directory")->required();

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Build, repair and write dungeons");
    generate->add_option("--source", gen.source, "gan or pool")->check(CLI::IsMember({"gan", "pool"}));
    generate->add_option("--seed", gen.seed, "Master seed");
    generate->add_option("--weights", gen.weights, "Generator weights (default $ZD_WEIGHTS)");
    generate->add_option("--pool", gen.pool, "Room pool from ingest (default $ZD_POOL)");
    generate->add_option("--count", gen.count, "Number of dungeons");
    generate->add_option("--out", gen.out, "Output directory");
    generate->add_flag("--no-repair", gen.noRepair, "Skip the repair loop");
    gen.grammar.add_to(generate);

    std::vector<std::string> solveInputs;
    auto* solveCmd = app.add_subcommand("solve", "Check dungeons for beatability");
    solveCmd->add_option("paths", solveInputs, "Dungeon files or directories")->required();

    std::string repairIn, repairOut;
    std::uint64_t repairSeed = 1;
    auto* repairCmd = app.add_subcommand("repair", "Repair one dungeon file");
    repairCmd->add_option("in", repairIn)->required();
    repairCmd->add_option("out", repairOut)->required();
    repairCmd->add_option("--seed", repairSeed, "Seed for POI selection");

    std::vector<std::string> metricInputs;
    std::string vglcDir;
    bool metricsJson = false;
    auto* metricsCmd = app.add_subcommand("metrics", "Novelty summary table");
    metricsCmd->add_option("paths", metricInputs, "Dungeon files or directories");
    metricsCmd->add_option("--vglc", vglcDir, "Score the original VGLC dungeons in this directory");
    metricsCmd->add_flag("--json", metricsJson, "Machine-readable output");

    std::string host = "127.0.0.1", serveWeights, servePool;
    int port = 8080;
    GrammarFiles serveGrammar;
    auto* serveCmd = app.add_subcommand("serve", "Run the HTTP play service");
    serveCmd->add_option("--host", host);
    serveCmd->add_option("--port", port);
    serveCmd->add_option("--weights", serveWeights);
    serveCmd->add_option("--pool", servePool);
    serveGrammar.add_to(serveCmd);

    std::uint64_t weightSeed = 1;
    std::string weightOut;
    auto* makeWeights = app.add_subcommand("make-weights", "Write an untrained, randomly initialised generator");
    makeWeights->add_option("out", weightOut)->required();
    makeWeights->add_option("--seed", weightSeed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*ingest) return cmd_ingest(corpusDir, outDir);
        if (*generate) return cmd_generate(gen);
        if (*solveCmd) return cmd_solve(solveInputs);
        if (*repairCmd) return cmd_repair(repairIn, repairOut, repairSeed);
        if (*metricsCmd) return cmd_metrics(metricInputs, vglcDir, metricsJson);
        if (*serveCmd) return cmd_serve(host, port, serveWeights, servePool, serveGrammar);
        if (*makeWeights) {
            zd::save_weights(weightOut, zd::random_bundle(weightSeed));
            std::cout << weightOut << ": untrained generator weights\n";
            return 0;
        }
    } catch (const zd::GenerationError& e) {
        std::cerr << "generation error: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const zd::RepairError& e) {
        std::cerr << "repair error: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
