#include "zd/pipeline.hpp"

namespace zd {

std::uint64_t batch_seed(std::uint64_t master, int index) {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

GeneratedDungeon generate_beatable(const std::vector<RoomSymbol>& backbone, const RuleSet& rules,
                                   const RoomSource& source, std::uint64_t seed, int maxAttempts) {
    std::string last;
    for (int attempt = 0; attempt < maxAttempts; ++attempt) {
        const std::uint64_t s = attempt == 0 ? seed : splitmix64(seed + static_cast<std::uint64_t>(attempt));
        try {
            Dungeon d = build_dungeon(backbone, rules, source, s);
            Rng rng = derive_rng(s, "repair");
            RepairResult r = repair_loop(std::move(d), rng);
            return {std::move(r.dungeon), r.roomsRepaired, attempt + 1};
        } catch (const GenerationError& e) {
            last = e.what();
        } catch (const RepairError& e) {
            std::string msg = e.what();
            last = "seed " + std::to_string(s) + ": " + msg.substr(0, msg.find('\n'));
        }
    }
    throw GenerationError("seed " + std::to_string(seed) + ": no beatable dungeon after " +
                          std::to_string(maxAttempts) + " attempts; last failure: " + last);
}

}  // namespace zd
