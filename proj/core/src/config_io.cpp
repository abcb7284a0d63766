#include "nest/config_io.hpp"

#include <functional>
#include <map>

#include "json.hpp"
#include "nest/instance_io.hpp"

namespace nest {

SolverConfig apply_config_overrides(SolverConfig cfg, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw IoError("config must be a JSON object");

  GlsConfig& gls = cfg.separator.gls;
  SamplerConfig& smp = cfg.separator.sampler;
  const std::map<std::string, double*> reals{
      {"r_x", &cfg.r_x},
      {"r_c_start", &cfg.r_c_start},
      {"r_c_end", &cfg.r_c_end},
      {"m_upper", &gls.m_upper},
      {"m_lower", &gls.m_lower},
      {"m_decay", &gls.m_decay},
      {"r_epsilon", &cfg.separator.proxy.r_epsilon},
      {"focus_radius_ratio", &smp.focus_radius_ratio},
      {"descent_step_init_ratio", &smp.descent_step_init_ratio},
      {"descent_shrink", &smp.descent_shrink},
      {"descent_step_min_ratio", &smp.descent_step_min_ratio},
      {"uniqueness_ratio", &smp.uniqueness_ratio},
  };
  const std::map<std::string, int*> ints{
      {"m_x", &cfg.m_x},           {"n_x", &cfg.n_x},           {"m_c", &cfg.m_c},
      {"n_c", &cfg.n_c},           {"n_workers", &gls.n_workers}, {"n_threads", &gls.n_threads},
      {"n_diverse", &smp.n_diverse}, {"n_focused", &smp.n_focused}, {"n_refine", &smp.n_refine},
      {"max_refine_evals", &smp.max_refine_evals},
  };

  for (const auto& [key, value] : doc.items()) {
    if (auto r = reals.find(key); r != reals.end()) {
      if (!value.is_number()) throw IoError("config '" + key + "' must be a number");
      *r->second = value.get<double>();
    } else if (auto i = ints.find(key); i != ints.end()) {
      if (!value.is_number_integer()) throw IoError("config '" + key + "' must be an integer");
      *i->second = value.get<int>();
    } else if (key == "tl_split") {
      if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
        throw IoError("config 'tl_split' must be a pair of numbers");
      }
      cfg.tl_split_explore = value[0].get<double>();
      cfg.tl_split_compress = value[1].get<double>();
    } else {
      throw IoError("unknown config parameter '" + key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

}  // namespace nest
