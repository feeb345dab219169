#include "capcalc/error.hpp"

namespace capcalc {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::string msg = "invalid input";
    for (const auto& line : v) {
        msg += "\n  ";
        msg += line;
    }
    return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace capcalc
