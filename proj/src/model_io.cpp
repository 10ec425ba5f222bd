#include "ruin2d/model_io.hpp"

#include <fstream>

#include "ruin2d/errors.hpp"

namespace ruin2d {

namespace {

ClaimLaw claim_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "exponential") return ExponentialClaims{j.at("mu").get<double>()};
  if (type == "phasetype" || type == "phase-type") {
    const auto beta = j.at("beta").get<std::vector<double>>();
    const auto rows = j.at("B").get<std::vector<std::vector<double>>>();
    PhaseTypeClaims ph;
    const auto n = static_cast<Eigen::Index>(beta.size());
    ph.beta = Eigen::Map<const Eigen::RowVectorXd>(beta.data(), n);
    ph.B.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != n) throw InvalidModel("phase-type B must be square");
      for (Eigen::Index k = 0; k < n; ++k) ph.B(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
    }
    return ph;
  }
  if (type == "empirical") return EmpiricalClaims{j.at("sizes").get<std::vector<double>>()};
  throw InvalidModel("unknown claim type '" + type + "'");
}

}  // namespace

RiskModel model_from_json(const nlohmann::json& j) {
  try {
    RiskModel m;
    m.lambda = j.at("lambda").get<double>();
    m.claim = claim_from_json(j.at("claim"));
    const auto c = j.at("c").get<std::vector<double>>();
    if (c.size() != 2) throw InvalidModel("\"c\" must have two entries");
    m.c1 = c[0];
    m.c2 = c[1];
    if (j.contains("delta")) {
      const auto d = j.at("delta").get<std::vector<double>>();
      if (d.size() != 2) throw InvalidModel("\"delta\" must have two entries");
      m.delta1 = d[0];
      m.delta2 = d[1];
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidModel(std::string("malformed model file: ") + e.what());
  }
}

nlohmann::json model_to_json(const RiskModel& model) {
  nlohmann::json claim;
  if (const auto* e = std::get_if<ExponentialClaims>(&model.claim)) {
    claim = {{"type", "exponential"}, {"mu", e->mu}};
  } else if (const auto* ph = std::get_if<PhaseTypeClaims>(&model.claim)) {
    std::vector<double> beta(ph->beta.data(), ph->beta.data() + ph->beta.size());
    std::vector<std::vector<double>> B;
    for (Eigen::Index i = 0; i < ph->B.rows(); ++i) {
      B.emplace_back();
      for (Eigen::Index k = 0; k < ph->B.cols(); ++k) B.back().push_back(ph->B(i, k));
    }
    claim = {{"type", "phasetype"}, {"beta", beta}, {"B", B}};
  } else {
    claim = {{"type", "empirical"}, {"sizes", std::get<EmpiricalClaims>(model.claim).sizes}};
  }
  return {{"lambda", model.lambda},
          {"claim", claim},
          {"c", {model.c1, model.c2}},
          {"delta", {model.delta1, model.delta2}}};
}

RiskModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidModel("cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidModel("cannot parse model file '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

}  // namespace ruin2d
