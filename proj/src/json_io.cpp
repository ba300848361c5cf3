#include "mallows/json_io.hpp"

#include <stdexcept>

namespace mallows {

Json permutation_to_json(const Permutation& p) {
  Json j = Json::array();
  for (const int v : p.one_line()) j.push_back(v);
  return j;
}

Permutation permutation_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("permutation must be a JSON array");
  std::vector<int> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw std::invalid_argument("permutation entries must be integers");
    v.push_back(e.get<int>());
  }
  return Permutation(std::move(v));
}

Json constants_to_json(const CltConstants& c) {
  Json j;
  j["q"] = c.q;
  j["a_hat"] = c.a_hat;
  j["eta2_hat"] = c.eta2_hat;
  j["eta_hat"] = c.eta_hat;
  j["sigma_hat"] = c.sigma_hat;
  j["mu0_hat"] = c.mu0_hat;
  j["std_errors"] = {{"a_hat", c.se_a}, {"eta_hat", c.se_eta}, {"sigma_hat", c.se_sigma}, {"mu0_hat", c.se_mu0}};
  j["jackknife_std_errors"] = {
      {"a_hat", c.jk_se_a}, {"eta_hat", c.jk_se_eta}, {"sigma_hat", c.jk_se_sigma}, {"mu0_hat", c.jk_se_mu0}};
  j["n_blocks"] = c.n_blocks;
  j["seed"] = c.seed;
  j["stream_first"] = c.stream_first;
  j["stream_count"] = c.stream_count;
  return j;
}

CltConstants constants_from_json(const Json& j) {
  CltConstants c;
  c.q = j.at("q").get<double>();
  c.a_hat = j.at("a_hat").get<double>();
  c.eta2_hat = j.at("eta2_hat").get<double>();
  c.eta_hat = j.at("eta_hat").get<double>();
  c.sigma_hat = j.at("sigma_hat").get<double>();
  c.mu0_hat = j.at("mu0_hat").get<double>();
  const auto& se = j.at("std_errors");
  c.se_a = se.at("a_hat").get<double>();
  c.se_eta = se.at("eta_hat").get<double>();
  c.se_sigma = se.at("sigma_hat").get<double>();
  c.se_mu0 = se.at("mu0_hat").get<double>();
  if (j.contains("jackknife_std_errors")) {
    const auto& jk = j.at("jackknife_std_errors");
    c.jk_se_a = jk.at("a_hat").get<double>();
    c.jk_se_eta = jk.at("eta_hat").get<double>();
    c.jk_se_sigma = jk.at("sigma_hat").get<double>();
    c.jk_se_mu0 = jk.at("mu0_hat").get<double>();
  }
  c.n_blocks = j.at("n_blocks").get<std::uint64_t>();
  c.seed = j.value("seed", std::uint64_t{0});
  c.stream_first = j.value("stream_first", std::uint64_t{0});
  c.stream_count = j.value("stream_count", std::uint64_t{0});
  return c;
}

Json summary_to_json(const SampleSummary& s) {
  return {{"count", s.count}, {"mean", s.mean},         {"variance", s.variance},
          {"skewness", s.skewness}, {"min", s.min}, {"max", s.max}};
}

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["experiment"] = r.experiment;
  j["summary"] = summary_to_json(r.summary);
  j["ks_statistic"] = r.ks_statistic;
  Json metrics = Json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  Json checks = Json::object();
  for (const auto& [k, v] : r.checks) checks[k] = v;
  j["checks"] = checks;
  return j;
}

Json quantity_json(const std::string& quantity, double estimate, double std_error, std::uint64_t n_samples,
                   double truncation_bound, std::uint64_t seed) {
  return {{"quantity", quantity},   {"estimate", estimate},
          {"std_error", std_error}, {"n_samples", n_samples},
          {"truncation_bound", truncation_bound}, {"seed", seed}};
}

}  // namespace mallows
