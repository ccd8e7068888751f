#include "momentsep/json_io.hpp"

#include <stdexcept>

namespace momentsep {

using nlohmann::json;

json density_matrix_to_json(const DensityMatrix& rho) {
  json j;
  j["dims"] = rho.factor_dims;
  int d = rho.dim();
  json re = json::array(), im = json::array();
  for (int i = 0; i < d; ++i) {
    json re_row = json::array(), im_row = json::array();
    for (int k = 0; k < d; ++k) {
      re_row.push_back(rho.mat(i, k).real());
      im_row.push_back(rho.mat(i, k).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

DensityMatrix density_matrix_from_json(const json& j) {
  DensityMatrix rho;
  rho.factor_dims = j.at("dims").get<std::vector<int>>();
  const json& re = j.at("re");
  size_t d = re.size();
  rho.mat.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  bool has_im = j.contains("im");
  for (size_t i = 0; i < d; ++i) {
    if (re[i].size() != d) throw std::invalid_argument("density matrix JSON: ragged \"re\" matrix");
    for (size_t k = 0; k < d; ++k) {
      double imv = has_im ? j.at("im")[i][k].get<double>() : 0.0;
      rho.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = {re[i][k].get<double>(), imv};
    }
  }
  return rho;
}

json partition_to_json(const PartitionSpec& spec) {
  json j;
  j["parties"] = spec.parties;
  j["symmetry_classes"] = spec.symmetry_classes;
  j["purity_flags"] = std::vector<bool>(spec.purity_flags.begin(), spec.purity_flags.end());
  if (spec.known_support) {
    json sup = json::array();
    for (const auto& a : *spec.known_support) sup.push_back(a.exponents());
    j["known_support"] = std::move(sup);
  }
  return j;
}

PartitionSpec partition_from_json(const json& j) {
  PartitionSpec spec;
  spec.parties = j.at("parties").get<std::vector<int>>();
  if (j.contains("symmetry_classes")) {
    spec.symmetry_classes = j.at("symmetry_classes").get<std::vector<std::vector<int>>>();
  } else {
    for (int i = 0; i < static_cast<int>(spec.parties.size()); ++i) spec.symmetry_classes.push_back({i});
  }
  if (j.contains("purity_flags")) {
    auto flags = j.at("purity_flags").get<std::vector<bool>>();
    spec.purity_flags.assign(flags.begin(), flags.end());
  } else {
    spec.purity_flags.assign(spec.symmetry_classes.size(), true);
  }
  if (j.contains("known_support") && !j.at("known_support").is_null()) {
    std::vector<MultiIndex> sup;
    for (const auto& a : j.at("known_support")) sup.emplace_back(a.get<std::vector<int>>());
    spec.known_support = std::move(sup);
  }
  spec.canonicalize();
  spec.validate();
  return spec;
}

json tensor_to_json(const StateTensor& tensor) {
  json j;
  j["partition"] = partition_to_json(tensor.partition);
  json coords = json::array();
  for (const auto& [mu, value] : tensor.coords) coords.push_back({{"mu", mu}, {"value", value}});
  j["coords"] = std::move(coords);
  return j;
}

StateTensor tensor_from_json(const json& j) {
  StateTensor tensor;
  tensor.partition = partition_from_json(j.at("partition"));
  for (const auto& e : j.at("coords"))
    tensor.set(e.at("mu").get<std::vector<int>>(), e.at("value").get<double>());
  return tensor;
}

json tms_to_json(const Tms& y) {
  json j;
  j["n"] = y.n;
  j["degree"] = y.degree;
  json moments = json::array();
  for (const auto& [alpha, value] : y.values) moments.push_back({{"alpha", alpha.exponents()}, {"value", value}});
  j["moments"] = std::move(moments);
  return j;
}

Tms tms_from_json(const json& j) {
  Tms y;
  y.n = j.at("n").get<int>();
  y.degree = j.at("degree").get<int>();
  for (const auto& e : j.at("moments")) {
    MultiIndex alpha(e.at("alpha").get<std::vector<int>>());
    if (alpha.size() != y.n) throw std::invalid_argument("tms JSON: alpha length mismatch");
    y.values[alpha] = e.at("value").get<double>();
  }
  return y;
}

json polynomial_to_json(const Polynomial& p) {
  json j;
  j["n"] = p.num_vars();
  json terms = json::array();
  for (const auto& [alpha, coef] : p.terms()) terms.push_back({{"alpha", alpha.exponents()}, {"coef", coef}});
  j["terms"] = std::move(terms);
  return j;
}

Polynomial polynomial_from_json(const json& j) {
  Polynomial p(j.at("n").get<int>());
  for (const auto& e : j.at("terms"))
    p.add_term(MultiIndex(e.at("alpha").get<std::vector<int>>()), e.at("coef").get<double>());
  return p;
}

json semialgebraic_to_json(const SemialgebraicSet& set) {
  json j;
  j["n"] = set.n;
  json cons = json::array();
  for (const auto& [g, rel] : set.constraints)
    cons.push_back({{"poly", polynomial_to_json(g)}, {"relation", rel == Relation::EQ ? "EQ" : "GEQ"}});
  j["constraints"] = std::move(cons);
  return j;
}

SemialgebraicSet semialgebraic_from_json(const json& j) {
  SemialgebraicSet set;
  set.n = j.at("n").get<int>();
  for (const auto& e : j.at("constraints")) {
    Polynomial g = polynomial_from_json(e.at("poly"));
    std::string rel = e.at("relation").get<std::string>();
    if (rel != "EQ" && rel != "GEQ") throw std::invalid_argument("set JSON: unknown relation " + rel);
    set.constraints.emplace_back(std::move(g), rel == "EQ" ? Relation::EQ : Relation::GEQ);
  }
  return set;
}

json decomposition_to_json(const Decomposition& dec) {
  json j;
  json atoms = json::array();
  for (const auto& atom : dec.atoms) atoms.push_back({{"w", atom.weight}, {"point", atom.point}});
  j["atoms"] = std::move(atoms);
  if (dec.partition) j["partition"] = partition_to_json(*dec.partition);
  return j;
}

Decomposition decomposition_from_json(const json& j) {
  Decomposition dec;
  for (const auto& e : j.at("atoms"))
    dec.atoms.push_back({e.at("w").get<double>(), e.at("point").get<std::vector<double>>()});
  if (j.contains("partition")) dec.partition = partition_from_json(j.at("partition"));
  return dec;
}

json witness_to_json(const InfeasibilityWitness& witness) {
  json j;
  j["order"] = witness.order;
  json blocks = json::array();
  for (const auto& w : witness.blocks) {
    json mat = json::array();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < w.cols(); ++k) row.push_back(w(i, k));
      mat.push_back(std::move(row));
    }
    blocks.push_back(std::move(mat));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

InfeasibilityWitness witness_from_json(const json& j) {
  InfeasibilityWitness w;
  w.order = j.at("order").get<int>();
  for (const auto& mat : j.at("blocks")) {
    size_t rows = mat.size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (size_t i = 0; i < rows; ++i) {
      if (mat[i].size() != rows) throw std::invalid_argument("witness JSON: block not square");
      for (size_t k = 0; k < rows; ++k)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = mat[i][k].get<double>();
    }
    w.blocks.push_back(std::move(m));
  }
  return w;
}

std::string verdict_to_string(Verdict v) {
  switch (v) {
    case Verdict::ENTANGLED: return "ENTANGLED";
    case Verdict::SEPARABLE: return "SEPARABLE";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

json certificate_to_json(const SeparabilityCertificate& cert) {
  json j;
  j["verdict"] = verdict_to_string(cert.verdict);
  j["order"] = cert.order_k;
  j["witness"] = cert.witness ? witness_to_json(*cert.witness) : json(nullptr);
  if (cert.decomposition) {
    json atoms = json::array();
    for (const auto& atom : cert.decomposition->atoms) atoms.push_back({{"w", atom.weight}, {"point", atom.point}});
    j["atoms"] = std::move(atoms);
  } else {
    j["atoms"] = nullptr;
  }
  json attempts = json::array();
  for (const auto& log : cert.diagnostics) {
    attempts.push_back({{"k", log.k},
                        {"objective", log.objective_index},
                        {"outcome", log.outcome},
                        {"rank_high", log.rank_high},
                        {"rank_low", log.rank_low},
                        {"solver_iterations", log.solver_iterations},
                        {"solver_gap", log.solver_gap}});
  }
  j["diagnostics"] = {{"k0", cert.k0},
                      {"d0", cert.d0},
                      {"message", cert.message},
                      {"attempts", std::move(attempts)}};
  return j;
}

json sdp_problem_to_json(const SdpProblem& prob) {
  json j;
  j["num_vars"] = prob.num_vars;
  j["objective"] = std::vector<double>(prob.objective.data(), prob.objective.data() + prob.objective.size());
  json eqs = json::array();
  for (const auto& [idx, val] : prob.equalities) eqs.push_back({{"index", idx}, {"value", val}});
  j["equalities"] = std::move(eqs);
  json leqs = json::array();
  for (const auto& eq : prob.linear_equations) {
    json coeffs = json::array();
    for (const auto& [idx, c] : eq.coeffs) coeffs.push_back({{"index", idx}, {"coef", c}});
    leqs.push_back({{"coeffs", std::move(coeffs)}, {"rhs", eq.rhs}});
  }
  j["linear_equations"] = std::move(leqs);
  json blocks = json::array();
  for (const auto& blk : prob.blocks) {
    json mats = json::array();
    for (const auto& a : blk.mats) {
      json mat = json::array();
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
        mat.push_back(std::move(row));
      }
      mats.push_back(std::move(mat));
    }
    blocks.push_back({{"size", blk.size()}, {"mats", std::move(mats)}});
  }
  j["blocks"] = std::move(blocks);
  return j;
}

}  // namespace momentsep
