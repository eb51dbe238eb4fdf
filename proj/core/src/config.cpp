#include "rrie/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rrie/csv.hpp"
#include "rrie/error.hpp"

namespace rrie {

using nlohmann::json;

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::Rie: return "rie";
    case Estimator::Oracle: return "oracle";
    case Estimator::Identity: return "identity";
  }
  return "?";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "rie") return Estimator::Rie;
  if (name == "oracle") return Estimator::Oracle;
  if (name == "identity") return Estimator::Identity;
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(const std::string& field, const std::string& context) {
  try {
    return parse_double(field);
  } catch (const IoError&) {
    throw InvalidArgument("bad number '" + field + "' in " + context);
  }
}

}  // namespace

SignalPrior PriorSpec::build() const {
  const auto parts = split(text, ':');
  if (parts[0] == "gaussian" && parts.size() == 1) return SignalPrior::gaussian();
  if (parts[0] == "sparse" && parts.size() == 2)
    return SignalPrior::sparse(parse_number(parts[1], "prior '" + text + "'"));
  if (parts[0] == "uniform" && parts.size() == 3) {
    const double lo = parse_number(parts[1], "prior '" + text + "'");
    const double hi = parse_number(parts[2], "prior '" + text + "'");
    if (!(lo >= 0.0 && hi >= lo)) throw InvalidArgument("uniform prior needs 0 <= lo <= hi");
    return SignalPrior::haar_spectrum([lo, hi](Index n, Rng& rng) {
      Vector v(n);
      for (Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
      return v;
    });
  }
  throw InvalidArgument("unknown prior spec '" + text +
                        "' (expected gaussian, sparse:<p> or uniform:<lo>:<hi>)");
}

NoiseModel NoiseSpec::build(double alpha) const {
  if (text == "gaussian") return NoiseModel::gaussian(alpha);
  if (text == "uniform02") return NoiseModel::uniform02(alpha);
  if (text == "zero") return NoiseModel::zero();
  throw InvalidArgument("unknown noise spec '" + text + "' (expected gaussian, uniform02 or zero)");
}

void ExperimentConfig::validate() const {
  if (n < 1 || m < 1) throw InvalidArgument("config: n and m must be positive");
  if (n > m) throw InvalidArgument("config: n must not exceed m");
  if (trials < 1) throw InvalidArgument("config: trials must be >= 1");
  if (lambda_grid.empty()) throw InvalidArgument("config: lambda_grid is empty");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0)) throw InvalidArgument("config: lambda values must be > 0");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      throw InvalidArgument("config: lambda_grid must be strictly increasing");
  }
  if (estimators.empty()) throw InvalidArgument("config: no estimators selected");
  if (eta_override && !(*eta_override > 0.0)) throw InvalidArgument("config: eta_override must be > 0");
  if (rank_bin < 1 || n % rank_bin != 0) throw InvalidArgument("config: rank_bin must divide n");
  for (Index j : sigma_indices)
    if (j < 0 || j >= n) throw InvalidArgument("config: sigma index out of range");
  // Surface spec errors early.
  (void)prior.build();
  (void)noise.build(alpha());
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");

  static const std::set<std::string> kKeys = {
      "prior",       "noise",         "n",           "m",            "lambda_grid",
      "trials",      "master_seed",   "estimators",  "eta_override", "output_path",
      "fixed_signal", "sigma_indices", "rank_bin",   "threads"};
  for (const auto& [key, _] : j.items())
    if (!kKeys.contains(key)) throw InvalidArgument("config: unknown key '" + key + "'");

  ExperimentConfig c;
  try {
    if (j.contains("prior")) c.prior.text = j.at("prior").get<std::string>();
    if (j.contains("noise")) c.noise.text = j.at("noise").get<std::string>();
    c.n = j.at("n").get<Index>();
    c.m = j.at("m").get<Index>();
    if (j.contains("lambda_grid")) c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<Index>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("estimators")) {
      c.estimators.clear();
      for (const auto& e : j.at("estimators")) c.estimators.push_back(parse_estimator(e.get<std::string>()));
    }
    if (j.contains("eta_override") && !j.at("eta_override").is_null())
      c.eta_override = j.at("eta_override").get<double>();
    if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
    if (j.contains("fixed_signal")) c.fixed_signal = j.at("fixed_signal").get<bool>();
    if (j.contains("sigma_indices")) c.sigma_indices = j.at("sigma_indices").get<std::vector<Index>>();
    if (j.contains("rank_bin")) c.rank_bin = j.at("rank_bin").get<Index>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const ExperimentConfig& c) {
  json j;
  j["prior"] = c.prior.text;
  j["noise"] = c.noise.text;
  j["n"] = c.n;
  j["m"] = c.m;
  j["lambda_grid"] = c.lambda_grid;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  std::vector<std::string> est;
  for (auto e : c.estimators) est.push_back(to_string(e));
  j["estimators"] = est;
  j["eta_override"] = c.eta_override ? json(*c.eta_override) : json(nullptr);
  j["output_path"] = c.output_path;
  j["fixed_signal"] = c.fixed_signal;
  j["sigma_indices"] = c.sigma_indices;
  j["rank_bin"] = c.rank_bin;
  j["threads"] = c.threads;
  return j.dump(2);
}

}  // namespace rrie
