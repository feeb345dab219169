#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capcalc/model.hpp"

namespace capcalc {

struct Payoff {
    double row = 0.0;
    double col = 0.0;

    bool operator==(const Payoff&) const = default;
};

/// Two-player game in normal form. payoffs[r][c] is the outcome of row strategy r against
/// column strategy c.
struct NormalFormGame {
    std::vector<std::string> row_strategies;
    std::vector<std::string> col_strategies;
    std::vector<std::vector<Payoff>> payoffs;

    const Payoff& at(std::size_t r, std::size_t c) const { return payoffs[r][c]; }
    std::size_t row_index(std::string_view name) const;  // throws NameError
    std::size_t col_index(std::string_view name) const;

    bool operator==(const NormalFormGame&) const = default;
};

struct Profile {
    std::string row;
    std::string col;

    bool operator==(const Profile&) const = default;
};

enum class Player { row, col };
enum class Dominance { strict, weak };

struct DominantStrategy {
    std::string strategy;
    Dominance kind = Dominance::weak;

    bool operator==(const DominantStrategy&) const = default;
};

/// Smallest uniform penalty on the deterred row that restores the target equilibrium.
/// When `open` is set the penalty must strictly exceed `penalty`; otherwise `penalty`
/// itself suffices.
struct DeterrenceThreshold {
    double penalty = 0.0;
    bool open = false;
};

/// Throws ValidationError when dimensions mismatch, a payoff is not finite, or a
/// strategy name is empty or repeated.
void validate_game(const NormalFormGame& g);

/// Reads {"row_strategies", "col_strategies", "payoffs"} where payoffs is a row-major flat
/// array of [row, col] pairs.
NormalFormGame load_game(std::string_view text);
std::string serialize_game(const NormalFormGame& g);

/// All profiles where neither player strictly gains by deviating alone, in matrix order.
std::vector<Profile> pure_nash(const NormalFormGame& g);

/// Strategies of `player` that weakly dominate every alternative. Flagged strict when
/// strictly better against every alternative and every opponent move. A player with a
/// single strategy gets it back as weak.
std::vector<DominantStrategy> dominant_strategies(const NormalFormGame& g, Player player);

/// Threshold for a penalty subtracted from every row-player payoff in `deterred_row` such
/// that `target` is an equilibrium of the penalised game and no equilibrium uses
/// `deterred_row`. Throws DomainError if `target` is not an equilibrium of the game with
/// the deterred row removed.
DeterrenceThreshold deterrence_threshold(const NormalFormGame& g, std::string_view deterred_row,
                                         const Profile& target);

/// Builds a game from a scenario: each player picks one listed capability or "pass";
/// the row choice is applied first, then the column choice, starting at `origin`.
/// Payoffs are the two agents' local values at the resulting state.
NormalFormGame game_from_scenario(const Scenario& s, std::string_view row_agent, std::string_view col_agent,
                                  std::span<const std::string> row_caps, std::span<const std::string> col_caps,
                                  std::string_view origin);

}  // namespace capcalc
