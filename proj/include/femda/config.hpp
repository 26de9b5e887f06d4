// Copyright 2026 The femda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Flat YAML experiment config. Every key is optional and top-level; see
// samples/default.yaml for the full schema with its defaults. Unknown keys are errors.
// Needs yaml-cpp (link femda_config).

#ifndef FEMDA__CONFIG_HPP_
#define FEMDA__CONFIG_HPP_

#include "femda/classifiers.hpp"
#include "femda/datagen.hpp"
#include "femda/error.hpp"
#include "femda/harness.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace femda
{

namespace detail
{

inline std::vector<std::string> split_list(std::string_view text, char sep = ',')
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(sep, start), text.size());
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

inline double parse_real(std::string_view text, const std::string & what)
{
  double v = 0.0;
  if (!parse_double(trim(text), v)) fail(Errc::ConfigError, what + ": '" + std::string(text) + "' is not a number");
  return v;
}

}  // namespace detail

/// "qda,femda,t-qda" -> methods, in the given order; duplicates rejected.
inline std::vector<Method> parse_method_list(std::string_view text)
{
  std::vector<Method> out;
  for (const auto & item : detail::split_list(text)) {
    Method m{};
    try {
      m = parse_method(item);
    } catch (const Error & e) {
      fail(Errc::ConfigError, e.what());
    }
    if (std::find(out.begin(), out.end(), m) != out.end()) {
      fail(Errc::ConfigError, "method '" + item + "' listed twice");
    }
    out.push_back(m);
  }
  if (out.empty()) fail(Errc::ConfigError, "method list is empty");
  return out;
}

inline std::vector<double> parse_fraction_list(std::string_view text)
{
  std::vector<double> out;
  for (const auto & item : detail::split_list(text)) out.push_back(detail::parse_real(item, "contamination"));
  if (out.empty()) fail(Errc::ConfigError, "contamination grid is empty");
  return out;
}

/// "gg:0.8:0.33" or "t:10:0.34" (family, parameter, prior).
inline ClusterChoice parse_cluster_choice(std::string_view text)
{
  const auto parts = detail::split_list(text, ':');
  if (parts.size() != 3) fail(Errc::ConfigError, "cluster '" + std::string(text) + "' is not family:parameter:prior");
  std::string family = parts[0];
  for (auto & c : family) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const double parameter = detail::parse_real(parts[1], "cluster parameter");
  const double prior = detail::parse_real(parts[2], "cluster prior");
  if (family == "gg") return {prior, ClusterFamily::generalized_gaussian(parameter)};
  if (family == "t") return {prior, ClusterFamily::student_t(parameter)};
  fail(Errc::ConfigError, "cluster family '" + parts[0] + "' is neither gg nor t");
}

inline Mode parse_mode(std::string_view text)
{
  if (text == "synthetic") return Mode::Synthetic;
  if (text == "real") return Mode::Real;
  fail(Errc::ConfigError, "mode must be synthetic or real, got '" + std::string(text) + "'");
}

namespace detail
{

template <class T>
T scalar_as(const YAML::Node & node, const std::string & key)
{
  if (!node.IsScalar()) fail(Errc::ConfigError, "key '" + key + "' expects a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    fail(Errc::ConfigError, "key '" + key + "': cannot read '" + node.Scalar() + "'");
  }
}

/// A sequence, or one comma-separated scalar.
inline std::string joined(const YAML::Node & node, const std::string & key)
{
  if (node.IsScalar()) return node.Scalar();
  if (!node.IsSequence()) fail(Errc::ConfigError, "key '" + key + "' expects a list");
  std::string out;
  for (const auto & item : node) {
    if (!item.IsScalar()) fail(Errc::ConfigError, "key '" + key + "' expects a list of scalars");
    if (!out.empty()) out += ',';
    out += item.Scalar();
  }
  return out;
}

using KeyHandler = std::function<void(ExperimentConfig &, const YAML::Node &, const std::string &)>;

inline const std::map<std::string, KeyHandler> & config_keys()
{
  static const std::map<std::string, KeyHandler> keys = [] {
    std::map<std::string, KeyHandler> k;
    k["mode"] = [](auto & c, const auto & n, const auto & key) { c.mode = parse_mode(scalar_as<std::string>(n, key)); };
    k["methods"] = [](auto & c, const auto & n, const auto & key) { c.methods = parse_method_list(joined(n, key)); };
    k["repetitions"] = [](auto & c, const auto & n, const auto & key) { c.repetitions = scalar_as<int>(n, key); };
    k["time_budget_factor"] = [](auto & c, const auto & n, const auto & key) {
      c.time_budget_factor = scalar_as<double>(n, key);
    };
    k["budget_enabled"] = [](auto & c, const auto & n, const auto & key) { c.budget_enabled = scalar_as<bool>(n, key); };
    k["record_timing"] = [](auto & c, const auto & n, const auto & key) { c.record_timing = scalar_as<bool>(n, key); };
    k["timing_repeats"] = [](auto & c, const auto & n, const auto & key) { c.timing_repeats = scalar_as<int>(n, key); };
    k["shrink_factor"] = [](auto & c, const auto & n, const auto & key) { c.shrink_factor = scalar_as<double>(n, key); };
    k["contamination_grid"] = [](auto & c, const auto & n, const auto & key) {
      c.contamination_grid = parse_fraction_list(joined(n, key));
    };
    k["base_seed"] = [](auto & c, const auto & n, const auto & key) { c.base_seed = scalar_as<std::uint64_t>(n, key); };
    k["output_dir"] = [](auto & c, const auto & n, const auto & key) { c.output_dir = scalar_as<std::string>(n, key); };
    k["train_fraction"] = [](auto & c, const auto & n, const auto & key) { c.train_fraction = scalar_as<double>(n, key); };

    k["k"] = [](auto & c, const auto & n, const auto & key) { c.synthetic.k = scalar_as<int>(n, key); };
    k["m"] = [](auto & c, const auto & n, const auto & key) { c.synthetic.m = scalar_as<int>(n, key); };
    k["n"] = [](auto & c, const auto & n, const auto & key) { c.synthetic.n = scalar_as<int>(n, key); };
    k["radius"] = [](auto & c, const auto & n, const auto & key) { c.synthetic.radius = scalar_as<double>(n, key); };
    k["xi"] = [](auto & c, const auto & n, const auto & key) { c.synthetic.xi = scalar_as<double>(n, key); };
    k["lambda_min"] = [](auto & c, const auto & n, const auto & key) { c.synthetic.lambda_min = scalar_as<double>(n, key); };
    k["lambda_max"] = [](auto & c, const auto & n, const auto & key) { c.synthetic.lambda_max = scalar_as<double>(n, key); };
    k["clusters"] = [](auto & c, const auto & n, const auto & key) {
      if (!n.IsSequence()) fail(Errc::ConfigError, "key '" + key + "' expects a list like [gg:0.8:0.33, t:10:0.34]");
      c.synthetic.cluster_families.clear();
      for (const auto & item : n) c.synthetic.cluster_families.push_back(parse_cluster_choice(scalar_as<std::string>(item, key)));
    };

    k["dataset"] = [](auto & c, const auto & n, const auto & key) { c.dataset_path = scalar_as<std::string>(n, key); };
    k["label_column"] = [](auto & c, const auto & n, const auto & key) {
      const auto text = scalar_as<std::string>(n, key);
      c.label_column = text == "last" ? LabelColumn::last() : LabelColumn::at(scalar_as<int>(n, key));
    };
    k["has_header"] = [](auto & c, const auto & n, const auto & key) { c.has_header = scalar_as<bool>(n, key); };
    k["pca_dim"] = [](auto & c, const auto & n, const auto & key) { c.pca_dim = scalar_as<int>(n, key); };

    k["n_iter_max"] = [](auto & c, const auto & n, const auto & key) { c.fit.n_iter_max = scalar_as<int>(n, key); };
    k["eps"] = [](auto & c, const auto & n, const auto & key) { c.fit.eps = scalar_as<double>(n, key); };
    k["lambda_reg"] = [](auto & c, const auto & n, const auto & key) { c.fit.lambda_reg = scalar_as<double>(n, key); };
    k["trim_cap"] = [](auto & c, const auto & n, const auto & key) { c.fit.trim_cap = scalar_as<double>(n, key); };
    k["nu_search_lo"] = [](auto & c, const auto & n, const auto & key) { c.fit.nu_search_lo = scalar_as<double>(n, key); };
    k["nu_search_hi"] = [](auto & c, const auto & n, const auto & key) { c.fit.nu_search_hi = scalar_as<double>(n, key); };
    k["nu_tol"] = [](auto & c, const auto & n, const auto & key) { c.fit.nu_tol = scalar_as<double>(n, key); };

    k["qda_logdet"] = [](auto & c, const auto & n, const auto & key) { c.classifier.qda_logdet = scalar_as<bool>(n, key); };
    k["knn_k"] = [](auto & c, const auto & n, const auto & key) { c.classifier.knn_k = scalar_as<int>(n, key); };
    return k;
  }();
  return keys;
}

}  // namespace detail

/// Applies the keys found in `text` on top of `base`. Does not validate the result.
inline ExperimentConfig parse_config(const std::string & text, ExperimentConfig base = {})
{
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception & e) {
    fail(Errc::ConfigError, std::string("malformed config: ") + e.what());
  }
  if (root.IsNull()) return base;
  if (!root.IsMap()) fail(Errc::ConfigError, "config must be a key: value mapping");
  const auto & keys = detail::config_keys();
  for (const auto & entry : root) {
    const auto key = entry.first.as<std::string>();
    const auto it = keys.find(key);
    if (it == keys.end()) fail(Errc::ConfigError, "unknown config key '" + key + "'");
    it->second(base, entry.second, key);
  }
  return base;
}

inline ExperimentConfig load_config(const std::filesystem::path & path, ExperimentConfig base = {})
{
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ConfigError, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

}  // namespace femda

#endif  // FEMDA__CONFIG_HPP_
