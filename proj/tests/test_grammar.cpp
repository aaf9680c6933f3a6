#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "zd/grammar.hpp"

using namespace zd;

namespace {

RoomSymbol sym(const char* name) { return *symbol_from_name(name); }

RuleSet default_rules() { return load_rules(default_data_dir() / "rules.txt"); }
std::vector<RoomSymbol> default_backbone() { return load_backbone(default_data_dir() / "backbone.txt"); }

std::string rule_error(std::string_view text) {
    try {
        parse_rules(text, "r");
    } catch (const RuleFileError& e) {
        return e.what();
    }
    return "";
}

std::multiset<std::string> labels(const MissionGraph& g) {
    std::multiset<std::string> out;
    for (RoomSymbol s : g.nodes) out.insert(symbol_name(s));
    return out;
}

// Smallest edge-list rendering over all node relabellings; equal iff the
// labelled graphs are isomorphic.
std::string canonical(const MissionGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string nodes;
        for (int i = 0; i < n; ++i) nodes += symbol_name(g.nodes[perm[i]]) + ";";
        std::vector<std::pair<int, int>> edges;
        std::vector<int> pos(n);
        for (int i = 0; i < n; ++i) pos[perm[i]] = i;
        for (const Edge& e : g.edges) edges.emplace_back(pos[e.from], pos[e.to]);
        std::sort(edges.begin(), edges.end());
        std::string s = nodes;
        for (auto [a, b] : edges) s += std::to_string(a) + ">" + std::to_string(b) + ";";
        if (best.empty() || s < best) best = s;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

void all_derivations(const MissionGraph& g, const RuleSet& rules, std::set<std::string>& results, int& leaves) {
    auto sites = matching_sites(g, rules);
    if (sites.empty()) {
        ++leaves;
        results.insert(canonical(g));
        return;
    }
    for (Site site : sites)
        for (int r : applicable_rules(g, rules, site)) {
            MissionGraph next = g;
            apply_rule(next, rules.rules[r], site);
            all_derivations(next, rules, results, leaves);
        }
}

}  // namespace

TEST(Grammar, ParseErrorsCarryLineNumbers) {
    EXPECT_NE(rule_error("rule K\n  node a k\n  in a\nend\n").find("r:4:"), std::string::npos);
    EXPECT_NE(rule_error("\n\nrule Q\n").find("r:3:"), std::string::npos);
    EXPECT_NE(rule_error("rule K\n  node a k\n  node b zz\n").find("r:3:"), std::string::npos);
    EXPECT_NE(rule_error("rule k\n").find("non-terminal"), std::string::npos);
    EXPECT_NE(rule_error("rule K\n  node a k\n  node b e\n  in a\n  out a\nend\n").find("not connected"),
              std::string::npos);
    EXPECT_NE(rule_error("rule K\n  node a k\n  in a\n  out a\n").find("missing 'end'"), std::string::npos);
    EXPECT_NE(rule_error("max_steps -3\n").find("r:1:"), std::string::npos);
    EXPECT_THROW(load_rules("/nonexistent/rules.txt"), RuleFileError);
}

TEST(Grammar, DefaultFilesParse) {
    const RuleSet rules = default_rules();
    EXPECT_EQ(rules.maxSteps, 200);
    const auto bb = default_backbone();
    EXPECT_EQ(bb.front(), sym("S"));
    EXPECT_EQ(bb.back(), sym("T"));
    EXPECT_NO_THROW(rules.check_resolvable(bb));
}

TEST(Grammar, BackboneParsing) {
    EXPECT_EQ(parse_backbone("S -> E\n-> T"), (std::vector<RoomSymbol>{sym("S"), sym("E"), sym("T")}));
    EXPECT_THROW(parse_backbone("E -> T"), RuleFileError);
    EXPECT_THROW(parse_backbone("S -> E"), RuleFileError);
    EXPECT_THROW(parse_backbone("S -> X -> T"), RuleFileError);
    EXPECT_THROW(parse_backbone("  # nothing\n"), RuleFileError);
}

TEST(Grammar, CheckResolvableRejectsOrphanNonTerminal) {
    const RuleSet rules = parse_rules("rule S\n node a s\n in a\n out a\nend\nrule T\n node a t\n in a\n out a\nend\n");
    EXPECT_NO_THROW(rules.check_resolvable({sym("S"), sym("T")}));
    EXPECT_THROW(rules.check_resolvable({sym("S"), sym("P"), sym("T")}), RuleFileError);
}

TEST(Grammar, PairRuleRewritesKeyLockEdge) {
    const RuleSet rules = parse_rules(
        "rule K L\n node a k\n node b e\n node c l\n edge a b\n edge a c\n in a\n out c\nend\n");
    MissionGraph g = backbone_graph({sym("K"), sym("L")});
    auto sites = matching_sites(g, rules);
    ASSERT_EQ(sites.size(), 1u);
    EXPECT_EQ(sites[0], (Site{-1, 0}));
    apply_rule(g, rules.rules[0], sites[0]);
    EXPECT_EQ(labels(g), (std::multiset<std::string>{"k", "e", "l"}));
    std::set<std::pair<std::string, std::string>> edges;
    for (const Edge& e : g.edges) edges.insert({symbol_name(g.nodes[e.from]), symbol_name(g.nodes[e.to])});
    EXPECT_EQ(edges, (std::set<std::pair<std::string, std::string>>{{"k", "e"}, {"k", "l"}}));
}

TEST(Grammar, ApplyRuleReroutesNeighbours) {
    const RuleSet rules = parse_rules("rule E\n node a e\n node b e\n edge a b\n in a\n out b\nend\n");
    MissionGraph g = backbone_graph({sym("s"), sym("E"), sym("t")});
    apply_rule(g, rules.rules[0], Site{1, -1});
    // Surviving nodes keep their order; rhs nodes are appended.
    ASSERT_EQ(g.nodes.size(), 4u);
    EXPECT_EQ(g.nodes[0], sym("s"));
    EXPECT_EQ(g.nodes[1], sym("t"));
    std::set<std::pair<int, int>> edges;
    for (const Edge& e : g.edges) edges.insert({e.from, e.to});
    EXPECT_EQ(edges, (std::set<std::pair<int, int>>{{0, 2}, {2, 3}, {3, 1}}));
    EXPECT_EQ(g.startNode, 0);
    EXPECT_EQ(g.triforceNode, 1);
}

TEST(Grammar, AllTerminalBackboneIsUnchanged) {
    const auto bb = std::vector<RoomSymbol>{sym("s"), sym("e"), sym("k"), sym("l"), sym("sl"), sym("t")};
    Rng rng(1);
    EXPECT_EQ(expand(bb, default_rules(), rng), backbone_graph(bb));
}

TEST(Grammar, ConfluentRulesGiveOneGraphOverEveryDerivationOrder) {
    const RuleSet rules = parse_rules(
        "rule S\n node a s\n in a\n out a\nend\n"
        "rule E\n node a e\n node b e\n edge a b\n in a\n out b\nend\n"
        "rule T\n node a t\n in a\n out a\nend\n");
    std::set<std::string> results;
    int leaves = 0;
    all_derivations(backbone_graph({sym("S"), sym("E"), sym("T")}), rules, results, leaves);
    EXPECT_EQ(leaves, 6);  // 3! site orders
    ASSERT_EQ(results.size(), 1u);

    MissionGraph expected = backbone_graph({sym("s"), sym("e"), sym("e"), sym("t")});
    EXPECT_EQ(*results.begin(), canonical(expected));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        EXPECT_EQ(canonical(expand({sym("S"), sym("E"), sym("T")}, rules, rng)), canonical(expected));
    }
}

TEST(Grammar, ValidatorFlagsDuplicateTriforce) {
    MissionGraph g = backbone_graph({sym("s"), sym("sl"), sym("t"), sym("t")});
    auto rep = validate(g);
    EXPECT_FALSE(rep.ok);
    EXPECT_NE(std::find(rep.violations.begin(), rep.violations.end(), "duplicate Triforce"), rep.violations.end());
    EXPECT_TRUE(validate(backbone_graph({sym("s"), sym("sl"), sym("t")})).ok);
}

TEST(Grammar, ValidatorFlagsLockWithoutKeyAndUnreachable) {
    EXPECT_FALSE(validate(backbone_graph({sym("s"), sym("l"), sym("k"), sym("sl"), sym("t")})).ok);
    EXPECT_TRUE(validate(backbone_graph({sym("s"), sym("k"), sym("l"), sym("sl"), sym("t")})).ok);
    MissionGraph g = backbone_graph({sym("s"), sym("sl"), sym("t")});
    g.add_node(sym("e"), -1);
    EXPECT_FALSE(validate(g).ok);
    EXPECT_FALSE(validate(backbone_graph({sym("s"), sym("E"), sym("sl"), sym("t")})).ok);
}

TEST(Grammar, SeededExpansionsAreTerminalAndValid) {
    const RuleSet rules = default_rules();
    const auto bb = default_backbone();
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng = derive_rng(seed, "grammar");
        const MissionGraph g = expand(bb, rules, rng);
        ASSERT_TRUE(g.terminal_only()) << seed;
        const auto rep = validate(g);
        ASSERT_TRUE(rep.ok) << seed << ": " << (rep.violations.empty() ? "" : rep.violations[0]);
    }
}

TEST(Grammar, ExpansionIsReproducible) {
    const RuleSet rules = default_rules();
    const auto bb = default_backbone();
    bool anyDiffer = false;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng a(seed), b(seed), c(seed + 1000);
        const MissionGraph g = expand(bb, rules, a);
        EXPECT_EQ(g, expand(bb, rules, b));
        anyDiffer = anyDiffer || !(g == expand(bb, rules, c));
    }
    EXPECT_TRUE(anyDiffer);
}

TEST(Grammar, TerminalCountNeverDecreases) {
    const RuleSet rules = default_rules();
    const auto bb = default_backbone();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        MissionGraph g = backbone_graph(bb);
        auto terminals = [&] { return std::count_if(g.nodes.begin(), g.nodes.end(), [](RoomSymbol s) { return s.terminal; }); };
        auto prev = terminals();
        while (!g.terminal_only()) {
            auto sites = matching_sites(g, rules);
            ASSERT_FALSE(sites.empty());
            Site site = pick(sites, rng);
            apply_rule(g, rules.rules[pick(applicable_rules(g, rules, site), rng)], site);
            const auto now = terminals();
            ASSERT_GE(now, prev);
            prev = now;
        }
    }
}

// Collapsing each node onto its backbone origin must map every edge onto a
// backbone edge or a self-loop, and no backbone position may vanish.
TEST(Grammar, ContractionIsHomomorphicToBackbone) {
    const RuleSet rules = default_rules();
    const auto bb = default_backbone();
    const int n = static_cast<int>(bb.size());
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(seed);
        const MissionGraph g = expand(bb, rules, rng);
        std::set<int> origins(g.origin.begin(), g.origin.end());
        ASSERT_EQ(static_cast<int>(origins.size()), n) << seed;
        ASSERT_EQ(*origins.begin(), 0);
        ASSERT_EQ(*origins.rbegin(), n - 1);
        for (const Edge& e : g.edges) {
            const int d = g.origin[e.to] - g.origin[e.from];
            ASSERT_TRUE(d == 0 || d == 1) << seed << ": " << g.origin[e.from] << "->" << g.origin[e.to];
        }
        EXPECT_EQ(g.origin[g.startNode], 0);
        EXPECT_EQ(g.origin[g.triforceNode], n - 1);
    }
}

TEST(Grammar, BudgetAndStuckErrors) {
    // E -> E e loops forever; the budget stops it.
    const RuleSet looping = parse_rules(
        "max_steps 5\n"
        "rule E\n node a E\n node b e\n edge a b\n in a\n out a\nend\n");
    Rng rng(1);
    EXPECT_THROW(expand({sym("s"), sym("E"), sym("t")}, looping, rng), ExpansionBudgetError);

    const RuleSet noKey = parse_rules("rule E\n node a e\n in a\n out a\nend\n");
    try {
        expand({sym("s"), sym("K"), sym("t")}, noKey, rng);
        FAIL();
    } catch (const StuckError& e) {
        EXPECT_NE(std::string(e.what()).find("K"), std::string::npos);
    }
    EXPECT_THROW(expand({}, noKey, rng), Error);
}
