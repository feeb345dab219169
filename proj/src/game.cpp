#include "capcalc/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "capcalc/error.hpp"
#include "json_util.hpp"

namespace capcalc {

using nlohmann::json;

namespace {

std::size_t index_of(const std::vector<std::string>& names, std::string_view name, const char* side) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw NameError(std::string("unknown ") + side + " strategy \"" + std::string(name) + "\"");
    return static_cast<std::size_t>(it - names.begin());
}

double payoff_of(const NormalFormGame& g, Player p, std::size_t own, std::size_t other) {
    return p == Player::row ? g.at(own, other).row : g.at(other, own).col;
}

bool is_equilibrium(const NormalFormGame& g, std::size_t r, std::size_t c) {
    for (std::size_t r2 = 0; r2 < g.row_strategies.size(); ++r2)
        if (g.at(r2, c).row > g.at(r, c).row) return false;
    for (std::size_t c2 = 0; c2 < g.col_strategies.size(); ++c2)
        if (g.at(r, c2).col > g.at(r, c).col) return false;
    return true;
}

}  // namespace

std::size_t NormalFormGame::row_index(std::string_view name) const { return index_of(row_strategies, name, "row"); }
std::size_t NormalFormGame::col_index(std::string_view name) const { return index_of(col_strategies, name, "column"); }

void validate_game(const NormalFormGame& g) {
    std::vector<std::string> v;
    if (g.row_strategies.empty()) v.push_back("row_strategies: at least one strategy required");
    if (g.col_strategies.empty()) v.push_back("col_strategies: at least one strategy required");
    for (const auto* side : {&g.row_strategies, &g.col_strategies}) {
        const char* label = side == &g.row_strategies ? "row_strategies" : "col_strategies";
        std::set<std::string> seen;
        for (const auto& s : *side) {
            if (s.empty()) v.push_back(std::string(label) + ": empty strategy name");
            if (!seen.insert(s).second) v.push_back(std::string(label) + ": duplicate strategy \"" + s + "\"");
        }
    }
    if (g.payoffs.size() != g.row_strategies.size())
        v.push_back("payoffs: " + std::to_string(g.payoffs.size()) + " rows for " +
                    std::to_string(g.row_strategies.size()) + " row strategies");
    for (std::size_t r = 0; r < g.payoffs.size(); ++r) {
        if (g.payoffs[r].size() != g.col_strategies.size())
            v.push_back("payoffs: row " + std::to_string(r) + " has " + std::to_string(g.payoffs[r].size()) +
                        " cells for " + std::to_string(g.col_strategies.size()) + " column strategies");
        for (const auto& p : g.payoffs[r])
            if (!std::isfinite(p.row) || !std::isfinite(p.col))
                v.push_back("payoffs: row " + std::to_string(r) + " holds a non-finite payoff");
    }
    if (!v.empty()) throw ValidationError(std::move(v));
}

NormalFormGame load_game(std::string_view text) {
    using namespace detail;
    const json root = parse_strict(text, "game");
    expect_keys(root, "game", {"row_strategies", "col_strategies", "payoffs"});

    NormalFormGame g;
    for (const auto& s : as_array(require(root, "game", "row_strategies"), "row_strategies"))
        g.row_strategies.push_back(as_string(s, "row_strategies[]"));
    for (const auto& s : as_array(require(root, "game", "col_strategies"), "col_strategies"))
        g.col_strategies.push_back(as_string(s, "col_strategies[]"));

    const auto& cells = as_array(require(root, "game", "payoffs"), "payoffs");
    const auto rows = g.row_strategies.size();
    const auto cols = g.col_strategies.size();
    if (cells.size() != rows * cols)
        throw ParseError("payoffs: expected " + std::to_string(rows * cols) + " [row, col] pairs in row-major order, got " +
                         std::to_string(cells.size()));
    g.payoffs.assign(rows, std::vector<Payoff>(cols));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = as_array(cells[i], "payoffs[]");
        if (cell.size() != 2)
            throw ParseError("payoffs[" + std::to_string(i) + "]: only two-player games are supported, got " +
                             std::to_string(cell.size()) + " payoffs");
        g.payoffs[i / cols][i % cols] = {as_number(cell[0], "payoffs[][0]"), as_number(cell[1], "payoffs[][1]")};
    }
    validate_game(g);
    return g;
}

std::string serialize_game(const NormalFormGame& g) {
    nlohmann::ordered_json root;
    root["row_strategies"] = g.row_strategies;
    root["col_strategies"] = g.col_strategies;
    root["payoffs"] = nlohmann::ordered_json::array();
    for (const auto& row : g.payoffs)
        for (const auto& p : row) root["payoffs"].push_back({p.row, p.col});
    return root.dump(2) + "\n";
}

std::vector<Profile> pure_nash(const NormalFormGame& g) {
    std::vector<Profile> out;
    for (std::size_t r = 0; r < g.row_strategies.size(); ++r)
        for (std::size_t c = 0; c < g.col_strategies.size(); ++c)
            if (is_equilibrium(g, r, c)) out.push_back({g.row_strategies[r], g.col_strategies[c]});
    return out;
}

std::vector<DominantStrategy> dominant_strategies(const NormalFormGame& g, Player player) {
    const auto& own = player == Player::row ? g.row_strategies : g.col_strategies;
    const auto& other = player == Player::row ? g.col_strategies : g.row_strategies;
    if (own.size() == 1) return {{own.front(), Dominance::weak}};

    std::vector<DominantStrategy> out;
    for (std::size_t s = 0; s < own.size(); ++s) {
        bool dominates_all = true;
        bool strict_everywhere = true;
        for (std::size_t t = 0; t < own.size() && dominates_all; ++t) {
            if (t == s) continue;
            bool some_better = false;
            for (std::size_t o = 0; o < other.size(); ++o) {
                const double a = payoff_of(g, player, s, o);
                const double b = payoff_of(g, player, t, o);
                if (a < b) {
                    dominates_all = false;
                    break;
                }
                if (a > b) some_better = true;
                else strict_everywhere = false;
            }
            if (!some_better) dominates_all = false;
        }
        if (dominates_all) out.push_back({own[s], strict_everywhere ? Dominance::strict : Dominance::weak});
    }
    return out;
}

DeterrenceThreshold deterrence_threshold(const NormalFormGame& g, std::string_view deterred_row, const Profile& target) {
    const auto d = g.row_index(deterred_row);
    const auto tr = g.row_index(target.row);
    const auto tc = g.col_index(target.col);
    if (tr == d) throw DomainError("target equilibrium uses the deterred strategy \"" + target.row + "\"");

    const auto rows = g.row_strategies.size();
    const auto cols = g.col_strategies.size();

    // Target must already be an equilibrium once the deterred row is gone.
    for (std::size_t r = 0; r < rows; ++r)
        if (r != d && g.at(r, tc).row > g.at(tr, tc).row)
            throw DomainError("(" + target.row + ", " + target.col +
                              ") is not an equilibrium even with the deterred row removed");
    for (std::size_t c = 0; c < cols; ++c)
        if (g.at(tr, c).col > g.at(tr, tc).col)
            throw DomainError("(" + target.row + ", " + target.col +
                              ") is not an equilibrium even with the deterred row removed");

    // Closed bounds: d >= 0, and the target survives the deterred deviation.
    double closed = std::max(0.0, g.at(d, tc).row - g.at(tr, tc).row);

    // Open bounds: for every column that best-responds to the deterred row, the deterred
    // row must stop being a best response there.
    bool have_open = false;
    double open = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
        bool col_best = true;
        for (std::size_t c2 = 0; c2 < cols; ++c2)
            if (g.at(d, c2).col > g.at(d, c).col) col_best = false;
        if (!col_best) continue;
        double best_other = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows; ++r)
            if (r != d) best_other = std::max(best_other, g.at(r, c).row);
        const double bound = g.at(d, c).row - best_other;
        if (!have_open || bound > open) open = bound;
        have_open = true;
    }

    if (have_open && open >= closed) return {open, true};
    return {closed, false};
}

NormalFormGame game_from_scenario(const Scenario& s, std::string_view row_agent, std::string_view col_agent,
                                  std::span<const std::string> row_caps, std::span<const std::string> col_caps,
                                  std::string_view origin) {
    const auto ra = s.agent_index(row_agent);
    const auto ca = s.agent_index(col_agent);
    const auto o = s.state_index(origin);

    auto resolve = [&](std::span<const std::string> caps, std::size_t agent) {
        std::vector<std::optional<std::size_t>> out;
        for (const auto& name : caps) {
            const auto m = s.find_move(name);
            if (!m || s.move(*m).kind != MoveKind::capability || s.move(*m).owner != agent)
                throw NameError("\"" + name + "\" is not a capability of agent \"" + s.agent(agent) + "\"");
            if (name == "pass") throw DomainError("capability name \"pass\" collides with the pass strategy");
            out.push_back(m);
        }
        out.push_back(std::nullopt);
        return out;
    };
    const auto rows = resolve(row_caps, ra);
    const auto cols = resolve(col_caps, ca);

    NormalFormGame g;
    for (const auto& m : rows) g.row_strategies.push_back(m ? s.move(*m).name : "pass");
    for (const auto& m : cols) g.col_strategies.push_back(m ? s.move(*m).name : "pass");
    for (const auto& rm : rows) {
        std::vector<Payoff> line;
        const auto w1 = rm ? s.move(*rm).target[o] : o;
        for (const auto& cm : cols) {
            const auto w2 = cm ? s.move(*cm).target[w1] : w1;
            line.push_back({s.value(ra, w2), s.value(ca, w2)});
        }
        g.payoffs.push_back(std::move(line));
    }
    validate_game(g);
    return g;
}

}  // namespace capcalc
