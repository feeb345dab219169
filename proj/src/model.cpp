#include "capcalc/model.hpp"

#include <algorithm>
#include <cmath>

#include "capcalc/error.hpp"

namespace capcalc {

namespace {

std::string quoted(std::string_view kind, std::string_view id) {
    return std::string(kind) + " \"" + std::string(id) + "\"";
}

class Checker {
public:
    explicit Checker(const ScenarioData& d) : d_(d) {}

    std::vector<Violation> run() {
        check_agents();
        check_states();
        check_values();
        check_moves();
        check_factor_spec();
        return std::move(out_);
    }

private:
    void add(std::string element, std::string rule) { out_.push_back({std::move(element), std::move(rule)}); }

    bool has_agent(const std::string& id) const { return agents_.contains(id); }
    bool has_state(const std::string& id) const { return states_.contains(id); }

    void check_agents() {
        for (const auto& a : d_.agents) {
            if (!is_token(a)) add(quoted("agent", a), "id must be a non-empty token over [A-Za-z0-9_-]");
            if (!agents_.insert(a).second) add(quoted("agent", a), "duplicate agent id");
        }
    }

    void check_states() {
        for (const auto& s : d_.states) {
            bool ok = d_.factor_spec ? split_factored_id(s.id, *d_.factor_spec).has_value() : is_token(s.id);
            if (!ok) {
                if (d_.factor_spec)
                    add(quoted("state", s.id), "id does not parse as a " + std::to_string(d_.factor_spec->arity) +
                                                   "-tuple joined by \"" + d_.factor_spec->separator + "\"");
                else
                    add(quoted("state", s.id), "id must be a non-empty token over [A-Za-z0-9_-]");
            }
            if (!states_.insert(s.id).second) add(quoted("state", s.id), "duplicate state id");
        }
    }

    void check_values() {
        for (const auto& [agent, row] : d_.values) {
            if (!has_agent(agent)) add(quoted("values", agent), "values given for undeclared agent \"" + agent + "\"");
            for (const auto& [state, v] : row) {
                if (!has_state(state))
                    add(quoted("values", agent), "value given for undeclared state \"" + state + "\"");
                if (!std::isfinite(v)) add(quoted("values", agent), "value at \"" + state + "\" is not finite");
            }
        }
        for (const auto& agent : agents_) {
            auto row = d_.values.find(agent);
            for (const auto& state : states_) {
                if (row == d_.values.end() || !row->second.contains(state))
                    add(quoted("values", agent), "missing value for state \"" + state + "\"");
            }
        }
    }

    void check_transitions(const std::string& element, const TransitionMap& t) {
        for (const auto& [from, to] : t) {
            if (!has_state(from)) add(element, "transition source \"" + from + "\" is not a declared state");
            if (!has_state(to)) add(element, "transition target \"" + to + "\" is not a declared state");
        }
    }

    void check_moves() {
        std::set<std::string> names;
        for (const auto& c : d_.capabilities) {
            const auto el = quoted("capability", c.name);
            if (c.name.empty()) add(el, "name must be non-empty");
            if (!names.insert(c.name).second) add(el, "name already used by another capability or procedure");
            if (!has_agent(c.owner)) add(el, "owner \"" + c.owner + "\" is not a declared agent");
            check_transitions(el, c.transitions);
        }
        for (const auto& p : d_.procedures) {
            const auto el = quoted("procedure", p.name);
            if (p.name.empty()) add(el, "name must be non-empty");
            if (!names.insert(p.name).second) add(el, "name already used by another capability or procedure");
            if (p.beneficiaries.empty()) add(el, "beneficiaries must be non-empty");
            for (const auto& b : p.beneficiaries)
                if (!has_agent(b)) add(el, "beneficiary \"" + b + "\" is not a declared agent");
            check_transitions(el, p.transitions);
        }
    }

    void check_factor_spec() {
        if (!d_.factor_spec) return;
        const auto& f = *d_.factor_spec;
        if (f.arity < 1) add("factor_spec", "arity must be at least 1");
        if (f.separator.empty()) add("factor_spec", "separator must be non-empty");
        if (f.arity != static_cast<int>(d_.agents.size()))
            add("factor_spec", "arity " + std::to_string(f.arity) + " does not match the " +
                                   std::to_string(d_.agents.size()) + " declared agents");
    }

    const ScenarioData& d_;
    std::set<std::string> agents_;
    std::set<std::string> states_;
    std::vector<Violation> out_;
};

}  // namespace

bool is_token(std::string_view id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

std::optional<std::vector<std::string>> split_factored_id(std::string_view id, const FactorSpec& spec) {
    if (spec.separator.empty() || spec.arity < 1) return std::nullopt;
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = id.find(spec.separator, start);
        parts.emplace_back(id.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + spec.separator.size();
    }
    if (static_cast<int>(parts.size()) != spec.arity) return std::nullopt;
    if (!std::all_of(parts.begin(), parts.end(), [](const std::string& p) { return is_token(p); }))
        return std::nullopt;
    return parts;
}

std::vector<Violation> validate(const ScenarioData& data) { return Checker(data).run(); }

std::vector<Violation> validate(const Scenario& scenario) { return validate(scenario.data()); }

bool Move::usable_by(std::size_t agent) const {
    if (kind == MoveKind::capability) return owner == agent;
    return std::binary_search(beneficiaries.begin(), beneficiaries.end(), agent);
}

Scenario Scenario::build(ScenarioData data) {
    if (auto v = validate(data); !v.empty()) {
        std::vector<std::string> lines;
        lines.reserve(v.size());
        for (const auto& x : v) lines.push_back(x.describe());
        throw ValidationError(std::move(lines));
    }

    Scenario s;
    s.data_ = std::move(data);
    const auto& d = s.data_;
    const std::size_t n_states = d.states.size();

    for (std::size_t i = 0; i < d.agents.size(); ++i) s.agent_ix_.emplace(d.agents[i], i);
    for (std::size_t i = 0; i < n_states; ++i) s.state_ix_.emplace(d.states[i].id, i);

    s.values_.resize(d.agents.size() * n_states);
    for (std::size_t a = 0; a < d.agents.size(); ++a) {
        const auto& row = d.values.at(d.agents[a]);
        for (std::size_t w = 0; w < n_states; ++w) s.values_[a * n_states + w] = row.at(d.states[w].id);
    }

    auto compile = [&](const std::string& name, MoveKind kind, const TransitionMap& t) {
        Move m;
        m.name = name;
        m.kind = kind;
        m.target.resize(n_states);
        for (std::size_t w = 0; w < n_states; ++w) m.target[w] = w;
        for (const auto& [from, to] : t) {
            const auto f = s.state_ix_.at(from);
            m.target[f] = s.state_ix_.at(to);
            m.domain.push_back(f);
        }
        std::sort(m.domain.begin(), m.domain.end());
        return m;
    };
    for (const auto& c : d.capabilities) {
        auto m = compile(c.name, MoveKind::capability, c.transitions);
        m.owner = s.agent_ix_.at(c.owner);
        s.moves_.push_back(std::move(m));
    }
    for (const auto& p : d.procedures) {
        auto m = compile(p.name, MoveKind::procedure, p.transitions);
        for (const auto& b : p.beneficiaries) m.beneficiaries.push_back(s.agent_ix_.at(b));
        std::sort(m.beneficiaries.begin(), m.beneficiaries.end());
        s.moves_.push_back(std::move(m));
    }
    std::sort(s.moves_.begin(), s.moves_.end(), [](const Move& a, const Move& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < s.moves_.size(); ++i) s.move_ix_.emplace(s.moves_[i].name, i);

    s.coordinates_.resize(n_states);
    if (d.factor_spec)
        for (std::size_t w = 0; w < n_states; ++w) s.coordinates_[w] = *split_factored_id(d.states[w].id, *d.factor_spec);
    return s;
}

namespace {

template <typename Map>
std::optional<std::size_t> lookup(const Map& m, std::string_view key) {
    auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

}  // namespace

std::optional<std::size_t> Scenario::find_agent(std::string_view id) const { return lookup(agent_ix_, id); }
std::optional<std::size_t> Scenario::find_state(std::string_view id) const { return lookup(state_ix_, id); }
std::optional<std::size_t> Scenario::find_move(std::string_view name) const { return lookup(move_ix_, name); }

std::size_t Scenario::agent_index(std::string_view id) const {
    if (auto i = find_agent(id)) return *i;
    throw NameError("unknown agent \"" + std::string(id) + "\"");
}

std::size_t Scenario::state_index(std::string_view id) const {
    if (auto i = find_state(id)) return *i;
    throw NameError("unknown state \"" + std::string(id) + "\"");
}

std::size_t Scenario::move_index(std::string_view name) const {
    if (auto i = find_move(name)) return *i;
    throw NameError("unknown capability or procedure \"" + std::string(name) + "\"");
}

std::vector<std::size_t> Scenario::owned_moves(std::size_t agent) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < moves_.size(); ++i)
        if (moves_[i].kind == MoveKind::capability && moves_[i].owner == agent) out.push_back(i);
    return out;
}

}  // namespace capcalc
