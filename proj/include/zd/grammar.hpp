#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zd/core.hpp"
#include "zd/rng.hpp"

namespace zd {

class RuleFileError : public Error {
public:
    using Error::Error;
};
class ExpansionBudgetError : public Error {
public:
    using Error::Error;
};
class StuckError : public Error {
public:
    using Error::Error;
};

struct RuleNode {
    std::string name;
    RoomSymbol symbol;
};

/// Rewrites one non-terminal, or an adjacent pair joined by an edge, into a
/// mini-graph. Edges entering the replaced site are rerouted to `inAttach`,
/// edges leaving it start from `outAttach`.
struct Rule {
    std::vector<RoomSymbol> lhs;  // one or two symbols
    std::vector<RuleNode> nodes;
    std::vector<std::pair<int, int>> edges;
    int inAttach = 0;
    int outAttach = 0;
    int line = 0;  // where the rule starts in its file
};

struct RuleSet {
    std::vector<Rule> rules;
    int maxSteps = 200;

    /// Every non-terminal that can appear must be rewritable to terminals by
    /// single-symbol rules (least fixpoint). Throws RuleFileError otherwise.
    void check_resolvable(const std::vector<RoomSymbol>& backbone) const;
};

// Rule file, one directive per line, '#' starts a comment:
//
//   max_steps 200
//   rule K L          # lhs: one or two non-terminal symbols
//     node a k        # rhs node name and symbol
//     node b l
//     edge a b
//     in a
//     out b
//   end
RuleSet parse_rules(std::string_view text, const std::string& source = "rules");
RuleSet load_rules(const std::filesystem::path& path);

/// Backbone file: symbols separated by whitespace and optional "->" arrows.
std::vector<RoomSymbol> parse_backbone(std::string_view text, const std::string& source = "backbone");
std::vector<RoomSymbol> load_backbone(const std::filesystem::path& path);

/// Directed chain over the backbone symbols, origin tags 0..n-1.
MissionGraph backbone_graph(const std::vector<RoomSymbol>& backbone);

/// A rewrite site: a single node, or the edge joining an adjacent pair.
struct Site {
    int node = -1;
    int edge = -1;
    bool operator==(const Site&) const = default;
};

std::vector<Site> matching_sites(const MissionGraph& g, const RuleSet& rules);
std::vector<int> applicable_rules(const MissionGraph& g, const RuleSet& rules, Site site);
/// Splices the rule's rhs in place of the site. Node ids are compacted, the
/// rhs nodes are appended in declaration order.
void apply_rule(MissionGraph& g, const Rule& rule, Site site);

/// Rewrites until only terminals remain, choosing sites and rules uniformly.
MissionGraph expand(const std::vector<RoomSymbol>& backbone, const RuleSet& rules, Rng& rng);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Terminal-only, one Start, one Triforce, at least one SoftLock, every node
/// reachable from Start, and every Lock reachable along a path through a Key.
ValidationReport validate(const MissionGraph& g);

/// Data directory holding the default rule and backbone files. $ZD_DATA_DIR
/// overrides the build-time location.
std::filesystem::path default_data_dir();

}  // namespace zd
