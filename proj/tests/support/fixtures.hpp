#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "capcalc/game.hpp"
#include "capcalc/model.hpp"
#include "capcalc/paradox.hpp"

namespace capcalc::testing {

inline std::string fixture_path(const std::string& name) { return std::string(CAPCALC_FIXTURES_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Scenario fixture_scenario(const std::string& stem) { return load_scenario(read_fixture(stem + ".scenario.json")); }
inline NormalFormGame fixture_game(const std::string& stem) { return load_game(read_fixture(stem + ".game.json")); }
inline ProfileDocument fixture_profile(const std::string& stem) { return load_profile(read_fixture(stem + ".profile.json")); }

}  // namespace capcalc::testing
