#include "eigensafe/envs/registry.hpp"

#include "eigensafe/envs/double_integrator.hpp"
#include "eigensafe/envs/dubins.hpp"
#include "eigensafe/error.hpp"

namespace eigensafe::envs {

std::unique_ptr<Environment> make_environment(
    const std::string& id, const std::map<std::string, double>& overrides) {
  auto check_keys = [&overrides](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : overrides) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ValidationError("unknown environment override '" + key + "'");
    }
  };
  if (id == "dint") {
    check_keys({"sigma", "dt"});
    DoubleIntegratorParams params;
    if (auto it = overrides.find("sigma"); it != overrides.end())
      params.sigma = it->second;
    if (auto it = overrides.find("dt"); it != overrides.end())
      params.dt = it->second;
    return std::make_unique<DoubleIntegratorEnv>(params);
  }
  if (id == "dubins") {
    check_keys({"sigma", "dt"});
    DubinsParams params;
    if (auto it = overrides.find("sigma"); it != overrides.end())
      params.noise_std = it->second;
    if (auto it = overrides.find("dt"); it != overrides.end())
      params.dt = it->second;
    return std::make_unique<DubinsCarEnv>(params);
  }
  throw ValidationError("unknown environment id '" + id + "'");
}

}  // namespace eigensafe::envs
