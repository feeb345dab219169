#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace capcalc {

using AgentId = std::string;
using StateId = std::string;

/// Explicit part of a state-transition map. Sources absent from the map are fixed points.
using TransitionMap = std::map<StateId, StateId>;

/// v(agent, state), keyed agent first.
using ValueTable = std::map<AgentId, std::map<StateId, double>>;

struct WorldState {
    StateId id;
    std::set<std::string> labels;

    bool operator==(const WorldState&) const = default;
};

/// A state-transition map that only its owner can execute.
struct Capability {
    std::string name;
    AgentId owner;
    TransitionMap transitions;

    bool operator==(const Capability&) const = default;
};

/// A transition map provided by society to a set of beneficiaries.
struct SocialProcedure {
    std::string name;
    std::set<AgentId> beneficiaries;
    TransitionMap transitions;

    bool operator==(const SocialProcedure&) const = default;
};

/// Declares that every state id is a tuple of `arity` coordinates joined by `separator`.
/// Coordinate i belongs to the i-th declared agent.
struct FactorSpec {
    int arity = 0;
    std::string separator;

    bool operator==(const FactorSpec&) const = default;
};

/// Raw scenario contents as authored. May violate invariants; see validate().
struct ScenarioData {
    std::vector<AgentId> agents;
    std::vector<WorldState> states;
    ValueTable values;
    std::vector<Capability> capabilities;
    std::vector<SocialProcedure> procedures;
    std::optional<FactorSpec> factor_spec;

    bool operator==(const ScenarioData&) const = default;
};

struct Violation {
    std::string element;  ///< e.g. `capability "walk"`
    std::string rule;     ///< what is wrong with it

    std::string describe() const { return element + ": " + rule; }
    bool operator==(const Violation&) const = default;
};

/// Checks every scenario invariant. Empty result iff the data can be built into a Scenario.
std::vector<Violation> validate(const ScenarioData& data);

/// True when `id` is a non-empty token over [A-Za-z0-9_-].
bool is_token(std::string_view id);

/// Splits `id` on the separator. Returns nullopt unless it yields exactly `spec.arity`
/// tokens.
std::optional<std::vector<std::string>> split_factored_id(std::string_view id, const FactorSpec& spec);

enum class MoveKind { capability, procedure };

/// A capability or procedure compiled against the scenario's state indices.
struct Move {
    std::string name;
    MoveKind kind = MoveKind::capability;
    std::size_t owner = 0;                   ///< owning agent (capabilities only)
    std::vector<std::size_t> beneficiaries;  ///< sorted agent indices (procedures only)
    std::vector<std::size_t> target;         ///< total map, identity-completed
    std::vector<std::size_t> domain;         ///< explicit sources, ascending

    bool usable_by(std::size_t agent) const;
};

/// A validated, immutable scenario with dense indices for agents, states and moves.
///
/// Agents and states keep their declared order. Moves are sorted by name so that every
/// index-order iteration is also lexicographic.
class Scenario {
public:
    /// Throws ValidationError listing every violation.
    static Scenario build(ScenarioData data);

    const ScenarioData& data() const noexcept { return data_; }

    std::size_t agent_count() const noexcept { return data_.agents.size(); }
    std::size_t state_count() const noexcept { return data_.states.size(); }
    const AgentId& agent(std::size_t i) const { return data_.agents[i]; }
    const StateId& state(std::size_t i) const { return data_.states[i].id; }

    std::optional<std::size_t> find_agent(std::string_view id) const;
    std::optional<std::size_t> find_state(std::string_view id) const;
    std::optional<std::size_t> find_move(std::string_view name) const;

    // Same as find_*, but throw NameError naming the missing element.
    std::size_t agent_index(std::string_view id) const;
    std::size_t state_index(std::string_view id) const;
    std::size_t move_index(std::string_view name) const;

    double value(std::size_t agent, std::size_t state) const { return values_[agent * state_count() + state]; }

    std::span<const Move> moves() const noexcept { return moves_; }
    const Move& move(std::size_t i) const { return moves_[i]; }

    /// Indices of the agent's own capabilities, in name order.
    std::vector<std::size_t> owned_moves(std::size_t agent) const;

    /// Coordinates of a state under the factor spec (empty when there is none).
    const std::vector<std::string>& coordinates(std::size_t state) const { return coordinates_[state]; }

private:
    Scenario() = default;

    ScenarioData data_;
    std::map<std::string, std::size_t, std::less<>> agent_ix_;
    std::map<std::string, std::size_t, std::less<>> state_ix_;
    std::map<std::string, std::size_t, std::less<>> move_ix_;
    std::vector<double> values_;
    std::vector<Move> moves_;
    std::vector<std::vector<std::string>> coordinates_;
};

/// Always empty for a built Scenario.
std::vector<Violation> validate(const Scenario& scenario);

/// Parses and validates the JSON scenario format. Deterministic.
/// Throws ParseError on malformed text, ValidationError on invariant violations.
Scenario load_scenario(std::string_view text);

/// Inverse of load_scenario: load_scenario(serialize(s)).data() == s.data().
std::string serialize(const ScenarioData& data);
inline std::string serialize(const Scenario& s) { return serialize(s.data()); }

}  // namespace capcalc
