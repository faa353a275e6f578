#include "costrule/config.hpp"

#include "costrule/dgp.hpp"
#include "costrule/learners.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace costrule {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& origin, const std::string& section) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      fail(origin, "unknown key '" + key + "' in " + section);
}

double parse_kappa(const json& v, const std::string& origin) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfiniteBudget;
    fail(origin, "kappa must be a number or \"inf\"");
  }
  if (!v.is_number()) fail(origin, "kappa must be a number or \"inf\"");
  return v.get<double>();
}

ReferenceSpec parse_reference(const json& v, const std::string& origin) {
  if (!v.is_object()) fail(origin, "reference entries must be objects");
  reject_unknown(v, {"kind", "p"}, origin, "reference");
  if (!v.contains("kind")) fail(origin, "reference entry missing 'kind'");
  ReferenceSpec spec;
  const std::string kind = v.at("kind").get<std::string>();
  if (kind == "FR") spec.kind = ReferenceKind::FR;
  else if (kind == "RD") spec.kind = ReferenceKind::RD;
  else if (kind == "TP") spec.kind = ReferenceKind::TP;
  else fail(origin, "unknown reference kind '" + kind + "'");
  if (v.contains("p")) {
    if (spec.kind != ReferenceKind::FR)
      fail(origin, "'p' applies only to FR references");
    spec.fr_p = v.at("p").get<double>();
  }
  return spec;
}

Interval parse_interval(const json& v, const std::string& origin, const std::string& name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(origin, name + " must be a two-number array");
  return {v[0].get<double>(), v[1].get<double>()};
}

LearnerSpec parse_learner(const json& section, const std::string& key,
                          const LearnerSpec& fallback, const std::string& origin) {
  if (!section.contains(key)) return fallback;
  LearnerSpec spec = fallback;
  spec.kind = learner_from_string(section.at(key).get<std::string>());
  return spec;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            RunConfig base) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  reject_unknown(root, {"schema", "problem", "learners"}, origin, "config");
  RunConfig cfg = std::move(base);
  try {
    if (root.contains("schema")) {
      const json& s = root.at("schema");
      reject_unknown(s, {"treatment", "cost", "outcome", "covariates", "decision"},
                     origin, "schema");
      Schema schema;
      schema.treatment = s.at("treatment").get<std::string>();
      schema.cost = s.at("cost").get<std::string>();
      schema.outcome = s.at("outcome").get<std::string>();
      schema.covariates = s.at("covariates").get<std::vector<std::string>>();
      if (s.contains("decision"))
        schema.decision = s.at("decision").get<std::vector<std::string>>();
      else
        schema.decision = schema.covariates;
      cfg.schema = std::move(schema);
    }
    if (root.contains("problem")) {
      const json& p = root.at("problem");
      reject_unknown(p,
                     {"kappa", "alpha", "eps_t", "eps_c", "folds", "y_bounds",
                      "c_bounds", "references"},
                     origin, "problem");
      if (p.contains("kappa")) cfg.problem.kappa = parse_kappa(p.at("kappa"), origin);
      if (p.contains("alpha")) cfg.problem.alpha = p.at("alpha").get<double>();
      if (p.contains("eps_t")) cfg.problem.eps_t = p.at("eps_t").get<double>();
      if (p.contains("eps_c")) cfg.problem.eps_c = p.at("eps_c").get<double>();
      if (p.contains("folds")) cfg.problem.folds = p.at("folds").get<int>();
      if (p.contains("y_bounds"))
        cfg.problem.y_bounds = parse_interval(p.at("y_bounds"), origin, "y_bounds");
      if (p.contains("c_bounds"))
        cfg.problem.c_bounds = parse_interval(p.at("c_bounds"), origin, "c_bounds");
      if (p.contains("references")) {
        if (!p.at("references").is_array() || p.at("references").empty())
          fail(origin, "references must be a nonempty array");
        cfg.problem.references.clear();
        for (const json& r : p.at("references"))
          cfg.problem.references.push_back(parse_reference(r, origin));
      }
    }
    if (root.contains("learners")) {
      const json& l = root.at("learners");
      reject_unknown(l,
                     {"muY", "muC", "muT", "delta", "pairwise_interactions",
                      "oracle_dgp"},
                     origin, "learners");
      cfg.specs.muY = parse_learner(l, "muY", cfg.specs.muY, origin);
      cfg.specs.muC = parse_learner(l, "muC", cfg.specs.muC, origin);
      cfg.specs.muT = parse_learner(l, "muT", cfg.specs.muT, origin);
      cfg.specs.delta = parse_learner(l, "delta", cfg.specs.delta, origin);
      if (l.contains("pairwise_interactions"))
        cfg.specs.pairwise_interactions = l.at("pairwise_interactions").get<bool>();
      const bool any_oracle =
          cfg.specs.muY.kind == LearnerKind::oracle ||
          cfg.specs.muC.kind == LearnerKind::oracle ||
          cfg.specs.muT.kind == LearnerKind::oracle;
      if (l.contains("oracle_dgp")) {
        const DgpId id = dgp_from_string(l.at("oracle_dgp").get<std::string>());
        for (auto* s : {&cfg.specs.muY, &cfg.specs.muC, &cfg.specs.muT, &cfg.specs.delta})
          s->oracle_dgp = id;
      } else if (any_oracle) {
        fail(origin, "oracle learners require 'oracle_dgp'");
      }
    }
  } catch (const json::exception& e) {
    fail(origin, e.what());
  } catch (const std::invalid_argument& e) {
    fail(origin, e.what());
  }
  cfg.problem.validate();
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path, std::move(base));
}

} // namespace costrule
