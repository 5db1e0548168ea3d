#pragma once

#include <string>

#include <json.hpp>

#include "epinet/harness.hpp"

namespace epinet {

/// Tool name plus the version of every module, the common head of all manifests.
inline nlohmann::ordered_json manifest_header()
{
    nlohmann::ordered_json j;
    j["tool"] = "epinet";
    j["version"] = std::string(kModuleVersion);
    nlohmann::ordered_json modules;
    for (const char* m : {"netgen", "gillespie", "pairwise", "thresholds", "equilibria", "harness"})
        modules[m] = std::string(kModuleVersion);
    j["modules"] = modules;
    return j;
}

} // namespace epinet
