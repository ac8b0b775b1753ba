#pragma once

#include <string>

namespace opp::harness {

// Named walkthroughs with byte-stable output. `args` holds optional
// "key=value" overrides (currently n and eps for parking-gap).
std::string run_demo(const std::string& name, const std::string& args);

}  // namespace opp::harness
