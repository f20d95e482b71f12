#include "ostd/snapshot.hpp"

#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace ostd {

namespace {

using nlohmann::json;

json spec_to_json(const KernelSpec& spec) {
  return json{{"family", to_string(spec.family)},
              {"lengthscale", spec.lengthscale},
              {"magnitude", spec.magnitude}};
}

KernelSpec spec_from_json(const json& j) {
  KernelSpec spec;
  spec.family = kernel_family_from_string(j.at("family").get<std::string>());
  spec.lengthscale = j.at("lengthscale").get<double>();
  spec.magnitude = j.at("magnitude").get<double>();
  spec.validate();
  return spec;
}

json rf_to_json(const RFMap& map) {
  json j = spec_to_json(map.spec());
  j["num_features"] = map.num_features();
  j["state_dim"] = map.state_dim();
  j["seed"] = map.seed();
  return j;
}

RFMap rf_from_json(const json& j) {
  return RFMap::sample(spec_from_json(j), j.at("num_features").get<int>(),
                       j.at("state_dim").get<int>(),
                       j.at("seed").get<std::uint64_t>());
}

json posterior_to_json(const PosteriorState& state) {
  const int dim = state.dim();
  std::vector<double> mean(state.mean().data(), state.mean().data() + dim);
  std::vector<double> cov;
  cov.reserve(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) cov.push_back(state.covariance()(i, k));
  return json{{"mean", mean},
              {"covariance", cov},
              {"slot", state.slot()},
              {"noise_var", state.noise_var()},
              {"prior_var", state.prior_var()}};
}

PosteriorState posterior_from_json(const json& j) {
  const auto mean_vals = j.at("mean").get<std::vector<double>>();
  const auto cov_vals = j.at("covariance").get<std::vector<double>>();
  const int dim = static_cast<int>(mean_vals.size());
  if (cov_vals.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("posterior snapshot covariance size mismatch");
  Eigen::VectorXd mean =
      Eigen::Map<const Eigen::VectorXd>(mean_vals.data(), dim);
  Eigen::MatrixXd cov(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      cov(i, k) = cov_vals[static_cast<std::size_t>(i) * dim + k];
  return PosteriorState(std::move(mean), std::move(cov),
                        j.at("slot").get<long>(),
                        j.at("noise_var").get<double>(),
                        j.at("prior_var").get<double>());
}

}  // namespace

std::string to_snapshot(const RFMap& map) { return rf_to_json(map).dump(); }

RFMap rf_map_from_snapshot(const std::string& text) {
  return rf_from_json(json::parse(text));
}

std::string to_snapshot(const PosteriorState& state) {
  return posterior_to_json(state).dump();
}

PosteriorState posterior_from_snapshot(const std::string& text) {
  return posterior_from_json(json::parse(text));
}

std::string to_snapshot(const EnsembleState& ensemble) {
  json experts = json::array();
  for (const ExpertState& expert : ensemble.experts()) {
    experts.push_back(json{{"kernel", spec_to_json(expert.kernel)},
                           {"rf", rf_to_json(expert.rf)},
                           {"posterior", posterior_to_json(expert.posterior)},
                           {"index", expert.index}});
  }
  std::vector<double> weights(
      ensemble.weights().data(),
      ensemble.weights().data() + ensemble.num_experts());
  return json{{"experts", experts},
              {"weights", weights},
              {"slot", ensemble.slot()}}
      .dump();
}

EnsembleState ensemble_from_snapshot(const std::string& text) {
  const json j = json::parse(text);
  std::vector<ExpertState> experts;
  for (const json& je : j.at("experts")) {
    experts.push_back(ExpertState{spec_from_json(je.at("kernel")),
                                  rf_from_json(je.at("rf")),
                                  posterior_from_json(je.at("posterior")),
                                  je.at("index").get<int>()});
  }
  const auto weight_vals = j.at("weights").get<std::vector<double>>();
  Eigen::VectorXd weights = Eigen::Map<const Eigen::VectorXd>(
      weight_vals.data(), static_cast<Eigen::Index>(weight_vals.size()));
  return EnsembleState(std::move(experts), std::move(weights),
                       j.at("slot").get<long>());
}

}  // namespace ostd
