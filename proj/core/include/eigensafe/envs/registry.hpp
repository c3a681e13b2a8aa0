#pragma once

#include <map>
#include <memory>
#include <string>

#include "eigensafe/environment.hpp"

namespace eigensafe::envs {

// Environments addressed by id: "dint" (overrides: sigma, dt) and "dubins"
// (overrides: sigma = noise std, dt). Unknown ids or overrides are rejected.
std::unique_ptr<Environment> make_environment(
    const std::string& id, const std::map<std::string, double>& overrides = {});

}  // namespace eigensafe::envs
