#include "smmdist/smmdist.h"

#include <cstring>
#include <exception>
#include <string>

#include "estimator.hpp"
#include "exact_lp.hpp"
#include "gadgets.hpp"
#include "json.hpp"
#include "metric.hpp"
#include "model.hpp"
#include "partition.hpp"
#include "speclang.hpp"
#include "tv.hpp"
#include "worddist.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

thread_local std::string g_last_error = "no error";

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
smm_status guarded(Fn&& fn) {
  try {
    fn();
    return SMM_OK;
  } catch (const json::exception& e) {
    g_last_error = std::string("json error: ") + e.what();
    return SMM_ERR_PARSE;
  } catch (const NoConvergence& e) {
    g_last_error = e.what();
    return SMM_ERR_NO_CONVERGE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SMM_ERR_BAD_ARG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SMM_ERR_INTERNAL;
  }
}

json parse_json(const char* text, const char* what) {
  if (!text) throw std::invalid_argument(std::string(what) + " must not be NULL");
  return json::parse(text);
}

ordered_json matrix_to_json(const smmdist::PseudometricMatrix& d) {
  ordered_json rows = json::array();
  for (int i = 0; i < d.n; ++i) {
    ordered_json row = json::array();
    for (int j = 0; j < d.n; ++j) row.push_back(d.get(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

smmdist::Spec parse_spec(const std::string& kind, const std::string& source) {
  if (kind == "mtl") return smmdist::parse_mtl(source);
  if (kind == "dta") return smmdist::dta_from_json(json::parse(source));
  throw std::invalid_argument("spec kind must be 'mtl' or 'dta'");
}

smmdist::EstimateOptions estimate_options(const char* options_json) {
  smmdist::EstimateOptions opts;
  if (!options_json) return opts;
  const json j = json::parse(options_json);
  opts.samples = j.value("samples", opts.samples);
  opts.horizon = j.value("horizon", opts.horizon);
  opts.seed = j.value("seed", opts.seed);
  opts.confidence = j.value("confidence", opts.confidence);
  opts.threads = j.value("threads", opts.threads);
  return opts;
}

smmdist::ResidenceDist kappa_or_default(const char* kappa_json) {
  if (!kappa_json) return smmdist::ResidenceDist::dirac(smmdist::Rational(0));
  const auto dist = smmdist::residence_from_json(json::parse(kappa_json));
  if (auto err = dist.parameter_error()) throw std::invalid_argument(*err);
  return dist;
}

ordered_json estimate_to_json(const smmdist::Estimate& e, std::uint64_t seed) {
  ordered_json j;
  j["point"] = e.point;
  j["lower"] = e.lower;
  j["upper"] = e.upper;
  j["samples"] = e.samples;
  j["unknown_fraction"] = e.unknown_fraction;
  j["confidence"] = e.confidence;
  j["seed"] = seed;
  return j;
}

}  // namespace

extern "C" {

struct smm_model {
  smmdist::SmmModel model;
};

const char* smm_last_error(void) { return g_last_error.c_str(); }

void smm_string_free(char* s) { delete[] s; }

smm_status smm_model_parse(const char* text, smm_model** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("output pointer must not be NULL");
    auto parsed = smmdist::model_from_json(parse_json(text, "model json"));
    *out = new smm_model{std::move(parsed)};
  });
}

void smm_model_free(smm_model* model) { delete model; }

smm_status smm_model_validate(const smm_model* model, char** violations_json) {
  return guarded([&] {
    if (!model || !violations_json) throw std::invalid_argument("NULL argument");
    ordered_json out = json::array();
    for (const auto& v : smmdist::validate(model->model)) {
      out.push_back(ordered_json{{"state", v.state}, {"message", v.message}});
    }
    *violations_json = dup_string(out.dump());
  });
}

smm_status smm_tv(const char* dist_a_json, const char* dist_b_json, char** result_json) {
  return guarded([&] {
    if (!result_json) throw std::invalid_argument("NULL argument");
    const auto a = smmdist::residence_from_json(parse_json(dist_a_json, "dist-a"));
    const auto b = smmdist::residence_from_json(parse_json(dist_b_json, "dist-b"));
    if (auto err = a.parameter_error()) throw std::invalid_argument("dist-a: " + *err);
    if (auto err = b.parameter_error()) throw std::invalid_argument("dist-b: " + *err);
    const auto r = smmdist::total_variation(a, b);
    ordered_json out;
    out["value"] = r.value;
    out["exact"] = r.exact;
    out["method"] = r.method == smmdist::TvResult::Method::closed_form ? "closed_form"
                                                                       : "numeric_integration";
    if (r.exact) out["rational"] = smmdist::format_rational(r.value_rational);
    *result_json = dup_string(out.dump());
  });
}

smm_status smm_bisim(const smm_model* model, char** result_json) {
  return guarded([&] {
    if (!model || !result_json) throw std::invalid_argument("NULL argument");
    smmdist::require_valid(model->model);
    const auto partition = smmdist::bisimilarity_partition(model->model);
    ordered_json blocks = json::array();
    for (const auto& block : partition.blocks) {
      ordered_json names = json::array();
      for (int s : block) names.push_back(model->model.states[s]);
      blocks.push_back(std::move(names));
    }
    ordered_json out;
    out["blocks"] = std::move(blocks);
    *result_json = dup_string(out.dump());
  });
}

smm_status smm_theta(const smm_model* model, const char* options_json, char** result_json) {
  return guarded([&] {
    if (!model || !result_json) throw std::invalid_argument("NULL argument");
    smmdist::DistanceOptions opts;
    bool exact_lp = false;
    int lp_cap = 8;
    bool witnesses = false;
    if (options_json) {
      const json j = json::parse(options_json);
      opts.tolerance = j.value("tolerance", opts.tolerance);
      opts.max_iter = j.value("max_iter", opts.max_iter);
      opts.threads = j.value("threads", opts.threads);
      exact_lp = j.value("exact_lp", exact_lp);
      lp_cap = j.value("lp_state_cap", lp_cap);
      witnesses = j.value("witnesses", witnesses);
    }
    opts.collect_witnesses = witnesses;
    const auto report = smmdist::bisimilarity_distance(model->model, opts);
    ordered_json out;
    out["states"] = model->model.states;
    out["matrix"] = matrix_to_json(report.distance);
    out["iterations"] = report.iterations;
    out["residual"] = report.residual;
    out["converged"] = report.converged;
    if (witnesses) {
      ordered_json ws = json::array();
      for (const auto& w : report.witnesses) {
        ordered_json jw;
        jw["pair"] = {model->model.states[w.s], model->model.states[w.t]};
        jw["alpha"] = w.alpha;
        jw["plan"] = w.plan.mass;
        ws.push_back(std::move(jw));
      }
      out["witnesses"] = std::move(ws);
    }
    if (exact_lp) {
      const auto lp = smmdist::bisimilarity_distance_lp(model->model, lp_cap);
      ordered_json rows = json::array();
      for (const auto& row : lp) {
        ordered_json jrow = json::array();
        for (const auto& x : row) jrow.push_back(smmdist::format_rational(x));
        rows.push_back(std::move(jrow));
      }
      out["exact_lp_matrix"] = std::move(rows);
    }
    *result_json = dup_string(out.dump());
    if (!report.converged) {
      throw NoConvergence("fixed-point iteration exhausted max_iter before reaching tolerance");
    }
  });
}

smm_status smm_estimate(const smm_model* model, const char* start_state, const char* spec_kind,
                        const char* spec_source, const char* options_json, char** result_json) {
  return guarded([&] {
    if (!model || !start_state || !spec_kind || !spec_source || !result_json) {
      throw std::invalid_argument("NULL argument");
    }
    const auto opts = estimate_options(options_json);
    const auto spec = parse_spec(spec_kind, spec_source);
    const int start = model->model.state_index(start_state);
    const auto est = smmdist::estimate_sat(model->model, start, spec, opts);
    *result_json = dup_string(estimate_to_json(est, opts.seed).dump());
  });
}

smm_status smm_delta_lower_bound(const smm_model* model, const char* state_a,
                                 const char* state_b, const char* specs_json,
                                 const char* options_json, char** result_json) {
  return guarded([&] {
    if (!model || !state_a || !state_b || !specs_json || !result_json) {
      throw std::invalid_argument("NULL argument");
    }
    const auto opts = estimate_options(options_json);
    std::vector<smmdist::Spec> specs;
    for (const auto& item : parse_json(specs_json, "specs")) {
      specs.push_back(parse_spec(item.at("kind").get<std::string>(),
                                 item.at("source").is_string()
                                     ? item.at("source").get<std::string>()
                                     : item.at("source").dump()));
    }
    if (specs.empty()) throw std::invalid_argument("specification family is empty");
    const int a = model->model.state_index(state_a);
    const int b = model->model.state_index(state_b);
    smmdist::require_valid(model->model);
    const double bound = smmdist::delta_lower_bound(model->model, a, b, specs, opts);
    ordered_json out;
    out["lower_bound"] = bound;
    out["specs"] = specs.size();
    out["samples_per_estimate"] = opts.samples;
    out["confidence"] = opts.confidence;
    out["seed"] = opts.seed;
    *result_json = dup_string(out.dump());
  });
}

smm_status smm_delta_oracle(const smm_model* model, const char* state_a, const char* state_b,
                            int depth_cap, char** result_json) {
  return guarded([&] {
    if (!model || !state_a || !state_b || !result_json) throw std::invalid_argument("NULL argument");
    const int a = model->model.state_index(state_a);
    const int b = model->model.state_index(state_b);
    const auto bounds = smmdist::trace_distance_bounds(model->model, a, b, depth_cap);
    ordered_json out;
    out["lower"] = smmdist::format_rational(bounds.lower);
    out["upper"] = smmdist::format_rational(bounds.upper);
    out["exact"] = bounds.lower == bounds.upper;
    out["depth"] = depth_cap;
    *result_json = dup_string(out.dump());
  });
}

smm_status smm_clique(const char* graph_json, const char* kappa_json, int threads,
                      char** result_json) {
  return guarded([&] {
    if (!result_json) throw std::invalid_argument("NULL argument");
    const auto graph = smmdist::UndirectedGraph::from_json(parse_json(graph_json, "graph"));
    const auto kappa = kappa_or_default(kappa_json);
    const auto recovery = smmdist::solve_max_clique(graph, kappa, threads);
    ordered_json counts = json::array();
    for (const auto& c : recovery.counts) counts.push_back(c.str());
    ordered_json out;
    out["clique_size"] = recovery.clique_size;
    out["counts"] = std::move(counts);
    *result_json = dup_string(out.dump());
  });
}

smm_status smm_gadget_emit(const char* graph_json, const char* what, int index,
                           const char* kappa_json, char** result_json) {
  return guarded([&] {
    if (!what || !result_json) throw std::invalid_argument("NULL argument");
    const auto graph = smmdist::UndirectedGraph::from_json(parse_json(graph_json, "graph"));
    const auto kappa = kappa_or_default(kappa_json);
    const std::string which = what;
    ordered_json out;
    if (which == "mg") {
      out = smmdist::model_to_json(smmdist::graph_word_model(graph, kappa));
    } else if (which == "mv") {
      out = smmdist::model_to_json(smmdist::free_word_model(graph.n, kappa));
    } else if (which == "mi") {
      const auto pair = smmdist::calibrated_pair(graph, index, kappa);
      out = smmdist::model_to_json(pair.model);
      out["start_states"] = {pair.model.states[pair.start_graph],
                             pair.model.states[pair.start_free]};
    } else {
      throw std::invalid_argument("gadget kind must be 'mg', 'mv' or 'mi'");
    }
    *result_json = dup_string(out.dump());
  });
}

smm_status smm_inapprox_bound(int n, double alpha, char** result_json) {
  return guarded([&] {
    if (!result_json) throw std::invalid_argument("NULL argument");
    ordered_json out;
    out["threshold"] = smmdist::approximation_error_threshold(n, alpha);
    out["n"] = n;
    out["alpha"] = alpha;
    *result_json = dup_string(out.dump());
  });
}

}  // extern "C"
