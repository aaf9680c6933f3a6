#include "zd/grammar.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "zd/dungeon_io.hpp"

#ifndef ZD_DEFAULT_DATA_DIR
#define ZD_DEFAULT_DATA_DIR "data"
#endif

namespace zd {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream in{std::string(line)};
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        lines.emplace_back(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw RuleFileError(source + ":" + std::to_string(line) + ": " + msg);
}

RoomSymbol symbol_or_fail(const std::string& tok, const std::string& source, int line) {
    auto s = symbol_from_name(tok);
    if (!s) fail(source, line, "unknown symbol '" + tok + "'");
    return *s;
}

}  // namespace

RuleSet parse_rules(std::string_view text, const std::string& source) {
    RuleSet set;
    std::optional<Rule> current;
    std::map<std::string, int> names;
    bool haveIn = false, haveOut = false;

    auto lines = split_lines(text);
    for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
        const int ln = i + 1;
        auto tok = tokenize(lines[i]);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];

        if (!current) {
            if (kw == "max_steps") {
                if (tok.size() != 2) fail(source, ln, "max_steps takes one value");
                char* end = nullptr;
                long v = std::strtol(tok[1].c_str(), &end, 10);
                if (*end != '\0' || v <= 0) fail(source, ln, "max_steps must be a positive integer");
                set.maxSteps = static_cast<int>(v);
            } else if (kw == "rule") {
                if (tok.size() < 2 || tok.size() > 3) fail(source, ln, "rule needs one or two lhs symbols");
                current = Rule{};
                current->line = ln;
                for (std::size_t k = 1; k < tok.size(); ++k) {
                    RoomSymbol s = symbol_or_fail(tok[k], source, ln);
                    if (s.terminal) fail(source, ln, "lhs symbol '" + tok[k] + "' must be a non-terminal");
                    current->lhs.push_back(s);
                }
                names.clear();
                haveIn = haveOut = false;
            } else {
                fail(source, ln, "expected 'rule' or 'max_steps', got '" + kw + "'");
            }
            continue;
        }

        if (kw == "node") {
            if (tok.size() != 3) fail(source, ln, "node takes a name and a symbol");
            if (names.count(tok[1])) fail(source, ln, "duplicate node name '" + tok[1] + "'");
            names[tok[1]] = static_cast<int>(current->nodes.size());
            current->nodes.push_back({tok[1], symbol_or_fail(tok[2], source, ln)});
        } else if (kw == "edge") {
            if (tok.size() != 3) fail(source, ln, "edge takes two node names");
            for (int k = 1; k <= 2; ++k)
                if (!names.count(tok[k])) fail(source, ln, "unknown node '" + tok[k] + "'");
            current->edges.emplace_back(names[tok[1]], names[tok[2]]);
        } else if (kw == "in" || kw == "out") {
            if (tok.size() != 2) fail(source, ln, kw + " takes one node name");
            if (!names.count(tok[1])) fail(source, ln, "unknown node '" + tok[1] + "'");
            (kw == "in" ? current->inAttach : current->outAttach) = names[tok[1]];
            (kw == "in" ? haveIn : haveOut) = true;
        } else if (kw == "end") {
            if (current->nodes.empty()) fail(source, ln, "rule has no rhs nodes");
            if (!haveIn || !haveOut) fail(source, ln, "rule needs both 'in' and 'out'");
            // rhs must be connected (undirected).
            const int n = static_cast<int>(current->nodes.size());
            std::vector<bool> seen(n, false);
            std::deque<int> q{0};
            seen[0] = true;
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                for (auto [a, b] : current->edges) {
                    int v = a == u ? b : (b == u ? a : -1);
                    if (v >= 0 && !seen[v]) {
                        seen[v] = true;
                        q.push_back(v);
                    }
                }
            }
            if (std::find(seen.begin(), seen.end(), false) != seen.end())
                fail(source, current->line, "rule rhs is not connected");
            set.rules.push_back(std::move(*current));
            current.reset();
        } else {
            fail(source, ln, "unexpected '" + kw + "' inside rule");
        }
    }
    if (current) fail(source, current->line, "rule is missing 'end'");
    if (set.rules.empty()) fail(source, static_cast<int>(lines.size()), "no rules defined");
    return set;
}

RuleSet load_rules(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw RuleFileError(e.what());
    }
    return parse_rules(text, path.string());
}

std::vector<RoomSymbol> parse_backbone(std::string_view text, const std::string& source) {
    std::vector<RoomSymbol> out;
    auto lines = split_lines(text);
    int lastLine = 1;
    for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
        for (const auto& tok : tokenize(lines[i])) {
            if (tok == "->") continue;
            out.push_back(symbol_or_fail(tok, source, i + 1));
            lastLine = i + 1;
        }
    }
    if (out.empty()) fail(source, 1, "backbone is empty");
    if (out.front().kind != SymbolKind::Start) fail(source, 1, "backbone must begin with a Start symbol");
    if (out.back().kind != SymbolKind::Triforce)
        fail(source, lastLine, "backbone must end with a Triforce symbol");
    return out;
}

std::vector<RoomSymbol> load_backbone(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw RuleFileError(e.what());
    }
    return parse_backbone(text, path.string());
}

void RuleSet::check_resolvable(const std::vector<RoomSymbol>& backbone) const {
    std::set<RoomSymbol> resolvable;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule& r : rules) {
            if (r.lhs.size() != 1 || resolvable.count(r.lhs[0])) continue;
            bool ok = std::all_of(r.nodes.begin(), r.nodes.end(), [&](const RuleNode& n) {
                return n.symbol.terminal || resolvable.count(n.symbol);
            });
            if (ok) {
                resolvable.insert(r.lhs[0]);
                changed = true;
            }
        }
    }
    auto check = [&](RoomSymbol s, const std::string& where) {
        if (!s.terminal && !resolvable.count(s))
            throw RuleFileError("non-terminal " + symbol_name(s) + " (" + where +
                                ") cannot be rewritten to terminals by single-symbol rules");
    };
    for (RoomSymbol s : backbone) check(s, "backbone");
    for (const Rule& r : rules)
        for (const RuleNode& n : r.nodes) check(n.symbol, "rule at line " + std::to_string(r.line));
}

MissionGraph backbone_graph(const std::vector<RoomSymbol>& backbone) {
    MissionGraph g;
    for (int i = 0; i < static_cast<int>(backbone.size()); ++i) {
        g.add_node(backbone[i], i);
        if (i > 0) g.edges.push_back({i - 1, i});
    }
    g.refresh_endpoints();
    return g;
}

std::vector<Site> matching_sites(const MissionGraph& g, const RuleSet& rules) {
    std::vector<Site> sites;
    for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n) {
        if (g.nodes[n].terminal) continue;
        bool any = std::any_of(rules.rules.begin(), rules.rules.end(),
                               [&](const Rule& r) { return r.lhs.size() == 1 && r.lhs[0] == g.nodes[n]; });
        if (any) sites.push_back({n, -1});
    }
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const Edge& ed = g.edges[e];
        if (ed.from == ed.to) continue;
        bool any = std::any_of(rules.rules.begin(), rules.rules.end(), [&](const Rule& r) {
            return r.lhs.size() == 2 && r.lhs[0] == g.nodes[ed.from] && r.lhs[1] == g.nodes[ed.to];
        });
        if (any) sites.push_back({-1, e});
    }
    return sites;
}

std::vector<int> applicable_rules(const MissionGraph& g, const RuleSet& rules, Site site) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(rules.rules.size()); ++i) {
        const Rule& r = rules.rules[i];
        if (site.node >= 0) {
            if (r.lhs.size() == 1 && r.lhs[0] == g.nodes[site.node]) out.push_back(i);
        } else {
            const Edge& e = g.edges[site.edge];
            if (r.lhs.size() == 2 && r.lhs[0] == g.nodes[e.from] && r.lhs[1] == g.nodes[e.to])
                out.push_back(i);
        }
    }
    return out;
}

void apply_rule(MissionGraph& g, const Rule& rule, Site site) {
    std::set<int> removed;
    if (site.node >= 0) {
        removed.insert(site.node);
    } else {
        removed.insert(g.edges[site.edge].from);
        removed.insert(g.edges[site.edge].to);
    }
    // Pair rules: the out-attachment inherits the edge target's origin, the
    // rest the source's, so every edge stays within or between adjacent origins.
    const int inTag = site.node >= 0 ? g.origin[site.node] : g.origin[g.edges[site.edge].from];
    const int outTag = site.node >= 0 ? inTag : g.origin[g.edges[site.edge].to];

    MissionGraph out;
    std::vector<int> remap(g.nodes.size(), -1);
    for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n)
        if (!removed.count(n)) remap[n] = out.add_node(g.nodes[n], g.origin[n]);
    std::vector<int> rhsIds;
    for (int i = 0; i < static_cast<int>(rule.nodes.size()); ++i)
        rhsIds.push_back(out.add_node(rule.nodes[i].symbol, i == rule.outAttach ? outTag : inTag));
    const int inNode = rhsIds[rule.inAttach];
    const int outNode = rhsIds[rule.outAttach];

    std::set<Edge> seen;
    auto add = [&](Edge e) {
        if (seen.insert(e).second) out.edges.push_back(e);
    };
    for (const Edge& e : g.edges) {
        bool fromGone = removed.count(e.from) > 0;
        bool toGone = removed.count(e.to) > 0;
        if (fromGone && toGone) continue;
        if (toGone)
            add({remap[e.from], inNode});
        else if (fromGone)
            add({outNode, remap[e.to]});
        else
            add({remap[e.from], remap[e.to]});
    }
    for (auto [a, b] : rule.edges) add({rhsIds[a], rhsIds[b]});
    out.refresh_endpoints();
    g = std::move(out);
}

MissionGraph expand(const std::vector<RoomSymbol>& backbone, const RuleSet& rules, Rng& rng) {
    if (backbone.empty()) throw Error("backbone is empty");
    MissionGraph g = backbone_graph(backbone);
    for (int stepCount = 0; !g.terminal_only(); ++stepCount) {
        auto sites = matching_sites(g, rules);
        if (sites.empty()) {
            auto it = std::find_if(g.nodes.begin(), g.nodes.end(), [](RoomSymbol s) { return !s.terminal; });
            throw StuckError("no rule applies to non-terminal " + symbol_name(*it));
        }
        if (stepCount >= rules.maxSteps)
            throw ExpansionBudgetError("expansion budget of " + std::to_string(rules.maxSteps) +
                                       " steps exhausted with non-terminals remaining");
        Site site = pick(sites, rng);
        auto candidates = applicable_rules(g, rules, site);
        apply_rule(g, rules.rules[pick(candidates, rng)], site);
    }
    return g;
}

ValidationReport validate(const MissionGraph& g) {
    ValidationReport rep;
    auto violation = [&](std::string msg) {
        rep.ok = false;
        rep.violations.push_back(std::move(msg));
    };
    const int n = static_cast<int>(g.nodes.size());
    if (!g.terminal_only()) violation("graph contains non-terminal symbols");
    auto count = [&](SymbolKind k) {
        return std::count_if(g.nodes.begin(), g.nodes.end(), [k](RoomSymbol s) { return s.kind == k; });
    };
    if (count(SymbolKind::Start) != 1)
        violation(count(SymbolKind::Start) == 0 ? "missing Start" : "duplicate Start");
    if (count(SymbolKind::Triforce) != 1)
        violation(count(SymbolKind::Triforce) == 0 ? "missing Triforce" : "duplicate Triforce");
    if (count(SymbolKind::SoftLock) < 1) violation("no SoftLock room");

    int start = -1;
    for (int i = 0; i < n; ++i)
        if (g.nodes[i].kind == SymbolKind::Start) {
            start = i;
            break;
        }
    if (start < 0) return rep;

    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : g.edges) adj[e.from].push_back(e.to);

    // Reachability over (node, passed a key) states.
    std::vector<std::array<bool, 2>> seen(n, {false, false});
    std::deque<std::pair<int, bool>> q;
    auto push = [&](int v, bool key) {
        key = key || g.nodes[v].kind == SymbolKind::Key;
        if (!seen[v][key]) {
            seen[v][key] = true;
            q.emplace_back(v, key);
        }
    };
    push(start, false);
    while (!q.empty()) {
        auto [u, key] = q.front();
        q.pop_front();
        for (int v : adj[u]) push(v, key);
    }
    for (int i = 0; i < n; ++i) {
        if (!seen[i][0] && !seen[i][1]) violation("node " + std::to_string(i) + " unreachable from Start");
        if (g.nodes[i].kind == SymbolKind::Lock && !seen[i][1])
            violation("Lock node " + std::to_string(i) + " has no Key before it");
    }
    return rep;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("ZD_DATA_DIR"); env && *env) return env;
    return ZD_DEFAULT_DATA_DIR;
}

}  // namespace zd
