// Command-line front end. Everything goes through the C API in
// include/smmdist/smmdist.h; this file only parses arguments, shuttles JSON
// and formats human-readable output.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "smmdist/smmdist.h"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitFailure = 1;   // invalid input / failed validation
constexpr int kExitUsage = 2;     // bad command line
constexpr int kExitNoConverge = 3;

constexpr std::uint64_t kDefaultSeed = 0x5eedULL;

struct ModelHandle {
  smm_model* ptr = nullptr;
  ~ModelHandle() { smm_model_free(ptr); }
};

struct ResultString {
  char* ptr = nullptr;
  ~ResultString() { smm_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

[[noreturn]] void die(const std::string& message, int code = kExitFailure) {
  std::cerr << "smmdist: " << message << "\n";
  std::exit(code);
}

void check(smm_status status, const char* context) {
  if (status == SMM_OK) return;
  const int code = status == SMM_ERR_NO_CONVERGE ? kExitNoConverge : kExitFailure;
  die(std::string(context) + ": " + smm_last_error(), code);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// accepts either a filename or inline JSON (first non-space char is '{')
std::string file_or_inline_json(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return arg;
  return read_file(arg);
}

ModelHandle load_model(const std::string& path) {
  ModelHandle handle;
  check(smm_model_parse(read_file(path).c_str(), &handle.ptr), "model");
  return handle;
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag) {
  if (seed_opt->count() > 0) return seed_flag;
  if (const char* env = std::getenv("SMMDIST_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return kDefaultSeed;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void print_matrix(const json& states, const json& matrix, bool rational_entries) {
  std::size_t width = 10;
  for (const auto& s : states) width = std::max(width, s.get<std::string>().size() + 2);
  std::cout << std::string(width, ' ');
  for (const auto& s : states) std::cout << s.get<std::string>() << "  ";
  std::cout << "\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::string name = states[i].get<std::string>();
    name.resize(width, ' ');
    std::cout << name;
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (rational_entries) {
        std::cout << matrix[i][j].get<std::string>() << "  ";
      } else {
        std::cout << fmt(matrix[i][j].get<double>()) << "  ";
      }
    }
    std::cout << "\n";
  }
}

// spec files: *.mtl holds formula text, *.dta holds automaton JSON
ordered_json spec_entry_from_file(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  ordered_json entry;
  if (ext == ".mtl") {
    std::string text = read_file(path);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    entry["kind"] = "mtl";
    entry["source"] = text;
  } else if (ext == ".dta") {
    entry["kind"] = "dta";
    entry["source"] = json::parse(read_file(path));
  } else {
    die("specification files must end in .mtl or .dta: '" + path + "'");
  }
  return entry;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral distances for stochastic Markov models"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::simple);

  bool json_output = false;
  int threads = 0;
  std::uint64_t seed_flag = kDefaultSeed;
  app.add_flag("--json", json_output, "machine-readable JSON output");
  app.add_option("--threads", threads, "worker threads (default: all cores)");
  auto* seed_opt =
      app.add_option("--seed", seed_flag, "root RNG seed (env SMMDIST_SEED overrides the default)");

  // --- validate ---
  std::string model_path;
  auto* cmd_validate = app.add_subcommand("validate", "check a model file against the invariants");
  cmd_validate->add_option("--model", model_path, "model JSON file")->required();

  // --- tv ---
  std::string dist_a, dist_b;
  auto* cmd_tv = app.add_subcommand("tv", "total variation distance between residence distributions");
  cmd_tv->add_option("--dist-a", dist_a, "distribution JSON file")->required();
  cmd_tv->add_option("--dist-b", dist_b, "distribution JSON file")->required();

  // --- bisim ---
  auto* cmd_bisim = app.add_subcommand("bisim", "bisimilarity blocks by partition refinement");
  cmd_bisim->add_option("--model", model_path, "model JSON file")->required();

  // --- theta ---
  double tol = 1e-9;
  int max_iter = 100000;
  bool exact_lp = false;
  int lp_cap = 8;
  bool with_witnesses = false;
  std::string emit_csv;
  auto* cmd_theta = app.add_subcommand("theta", "bisimilarity pseudometric (fixed-point iteration)");
  cmd_theta->add_option("--model", model_path, "model JSON file")->required();
  cmd_theta->add_option("--tol", tol, "convergence tolerance (default 1e-9)");
  cmd_theta->add_option("--max-iter", max_iter, "iteration cap (default 100000)");
  cmd_theta->add_flag("--exact-lp", exact_lp, "also solve the exact linear program");
  cmd_theta->add_option("--lp-cap", lp_cap, "state cap for the exact LP (default 8)");
  cmd_theta->add_flag("--witnesses", with_witnesses, "include optimal couplings in JSON output");
  cmd_theta->add_option("--emit-csv", emit_csv, "write the matrix to a CSV file");

  // --- estimate ---
  std::string start_state, spec_path;
  long samples = 100000;
  int horizon = 1000;
  double confidence = 0.99;
  auto* cmd_estimate = app.add_subcommand("estimate", "Monte-Carlo satisfaction probability");
  cmd_estimate->add_option("--model", model_path, "model JSON file")->required();
  cmd_estimate->add_option("--start", start_state, "start state")->required();
  cmd_estimate->add_option("--spec", spec_path, "specification file (.mtl or .dta)")->required();
  cmd_estimate->add_option("-n,--samples", samples, "sample count (default 100000)");
  cmd_estimate->add_option("--horizon", horizon, "per-path step bound (default 1000)");
  cmd_estimate->add_option("--confidence", confidence, "confidence level (default 0.99)");

  // --- delta-lb ---
  std::string s1, s2, spec_dir;
  auto* cmd_dlb = app.add_subcommand("delta-lb", "statistical lower bound on the trace distance");
  cmd_dlb->add_option("--model", model_path, "model JSON file")->required();
  cmd_dlb->add_option("--s1", s1, "first state")->required();
  cmd_dlb->add_option("--s2", s2, "second state")->required();
  cmd_dlb->add_option("--specs", spec_dir, "directory of .mtl/.dta files")->required();
  cmd_dlb->add_option("-n,--samples", samples, "samples per estimate (default 100000)");
  cmd_dlb->add_option("--horizon", horizon, "per-path step bound (default 1000)");
  cmd_dlb->add_option("--confidence", confidence, "confidence level (default 0.99)");

  // --- delta-oracle ---
  int depth = 64;
  auto* cmd_oracle = app.add_subcommand("delta-oracle", "exact trace-distance interval (shared residence)");
  cmd_oracle->add_option("--model", model_path, "model JSON file")->required();
  cmd_oracle->add_option("--s1", s1, "first state")->required();
  cmd_oracle->add_option("--s2", s2, "second state")->required();
  cmd_oracle->add_option("--depth", depth, "word enumeration depth (default 64)");

  // --- clique ---
  std::string graph_path, kappa_json;
  auto* cmd_clique = app.add_subcommand("clique", "max-clique size via the distance reduction");
  cmd_clique->add_option("--graph", graph_path, "graph JSON file")->required();
  cmd_clique->add_option("--kappa", kappa_json, "shared residence JSON (default {\"dirac\":\"0\"})");

  // --- gadget ---
  std::string emit_path, what = "mg";
  int calib_index = 1;
  auto* cmd_gadget = app.add_subcommand("gadget", "compile reduction models to a file");
  cmd_gadget->add_option("--graph", graph_path, "graph JSON file")->required();
  cmd_gadget->add_option("--emit", emit_path, "output model file")->required();
  cmd_gadget->add_option("--what", what, "mg | mv | mi (default mg)");
  cmd_gadget->add_option("--i", calib_index, "calibration index for --what mi");
  cmd_gadget->add_option("--kappa", kappa_json, "shared residence JSON (default {\"dirac\":\"0\"})");

  // --- inapprox ---
  int bound_n = 2;
  double bound_alpha = 2.0;
  auto* cmd_inapprox = app.add_subcommand("inapprox", "absolute-error threshold for clique hardness");
  cmd_inapprox->add_option("--n", bound_n, "vertex count (>= 2)")->required();
  cmd_inapprox->add_option("--alpha", bound_alpha, "approximation factor (> 1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  const std::uint64_t seed = resolve_seed(seed_opt, seed_flag);

  if (cmd_validate->parsed()) {
    auto model = load_model(model_path);
    ResultString result;
    check(smm_model_validate(model.ptr, &result.ptr), "validate");
    const json violations = json::parse(result.str());
    if (json_output) {
      std::cout << result.str() << "\n";
    } else if (violations.empty()) {
      std::cout << "ok\n";
    } else {
      for (const auto& v : violations) {
        std::cout << v["state"].get<std::string>() << ": " << v["message"].get<std::string>()
                  << "\n";
      }
    }
    return violations.empty() ? 0 : kExitFailure;
  }

  if (cmd_tv->parsed()) {
    ResultString result;
    check(smm_tv(file_or_inline_json(dist_a).c_str(), file_or_inline_json(dist_b).c_str(),
                 &result.ptr),
          "tv");
    const json r = json::parse(result.str());
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      std::cout << "value=" << (r.contains("rational") ? r["rational"].get<std::string>()
                                                       : fmt(r["value"].get<double>()))
                << " method=" << r["method"].get<std::string>()
                << " exact=" << (r["exact"].get<bool>() ? "true" : "false") << "\n";
    }
    return 0;
  }

  if (cmd_bisim->parsed()) {
    auto model = load_model(model_path);
    ResultString result;
    check(smm_bisim(model.ptr, &result.ptr), "bisim");
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      const json r = json::parse(result.str());
      int i = 0;
      for (const auto& block : r["blocks"]) {
        std::cout << "block " << i++ << ":";
        for (const auto& s : block) std::cout << " " << s.get<std::string>();
        std::cout << "\n";
      }
    }
    return 0;
  }

  if (cmd_theta->parsed()) {
    auto model = load_model(model_path);
    ordered_json opts;
    opts["tolerance"] = tol;
    opts["max_iter"] = max_iter;
    opts["threads"] = threads;
    opts["exact_lp"] = exact_lp;
    opts["lp_state_cap"] = lp_cap;
    opts["witnesses"] = with_witnesses;
    ResultString result;
    const smm_status status = smm_theta(model.ptr, opts.dump().c_str(), &result.ptr);
    if (status != SMM_OK && status != SMM_ERR_NO_CONVERGE) check(status, "theta");
    const json r = json::parse(result.str());
    if (!emit_csv.empty()) {
      std::ofstream csv(emit_csv);
      if (!csv) die("cannot write '" + emit_csv + "'");
      csv << "state";
      for (const auto& s : r["states"]) csv << "," << s.get<std::string>();
      csv << "\n";
      for (std::size_t i = 0; i < r["states"].size(); ++i) {
        csv << r["states"][i].get<std::string>();
        for (const auto& cell : r["matrix"][i]) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "%.17g", cell.get<double>());
          csv << "," << buf;
        }
        csv << "\n";
      }
    }
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      print_matrix(r["states"], r["matrix"], false);
      std::cout << "iterations=" << r["iterations"] << " residual=" << fmt(r["residual"])
                << " converged=" << (r["converged"].get<bool>() ? "true" : "false") << "\n";
      if (r.contains("exact_lp_matrix")) {
        std::cout << "exact LP solution:\n";
        print_matrix(r["states"], r["exact_lp_matrix"], true);
      }
    }
    return status == SMM_ERR_NO_CONVERGE ? kExitNoConverge : 0;
  }

  if (cmd_estimate->parsed()) {
    auto model = load_model(model_path);
    const ordered_json entry = spec_entry_from_file(spec_path);
    ordered_json opts;
    opts["samples"] = samples;
    opts["horizon"] = horizon;
    opts["seed"] = seed;
    opts["confidence"] = confidence;
    opts["threads"] = threads;
    const std::string source = entry["kind"] == "mtl" ? entry["source"].get<std::string>()
                                                      : entry["source"].dump();
    ResultString result;
    check(smm_estimate(model.ptr, start_state.c_str(), entry["kind"].get<std::string>().c_str(),
                       source.c_str(), opts.dump().c_str(), &result.ptr),
          "estimate");
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      const json r = json::parse(result.str());
      std::cout << "point=" << fmt(r["point"].get<double>())
                << " bounds=[" << fmt(r["lower"].get<double>()) << ", "
                << fmt(r["upper"].get<double>()) << "]"
                << " unknown=" << fmt(r["unknown_fraction"].get<double>())
                << " samples=" << r["samples"] << " seed=" << r["seed"] << "\n";
    }
    return 0;
  }

  if (cmd_dlb->parsed()) {
    auto model = load_model(model_path);
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(spec_dir)) {
      const auto ext = entry.path().extension().string();
      if (ext == ".mtl" || ext == ".dta") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) die("no .mtl or .dta files in '" + spec_dir + "'");
    ordered_json specs = json::array();
    for (const auto& f : files) specs.push_back(spec_entry_from_file(f));
    ordered_json opts;
    opts["samples"] = samples;
    opts["horizon"] = horizon;
    opts["seed"] = seed;
    opts["confidence"] = confidence;
    opts["threads"] = threads;
    ResultString result;
    check(smm_delta_lower_bound(model.ptr, s1.c_str(), s2.c_str(), specs.dump().c_str(),
                                opts.dump().c_str(), &result.ptr),
          "delta-lb");
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      const json r = json::parse(result.str());
      std::cout << "lower_bound=" << fmt(r["lower_bound"].get<double>())
                << " specs=" << r["specs"] << " seed=" << r["seed"] << "\n";
    }
    return 0;
  }

  if (cmd_oracle->parsed()) {
    auto model = load_model(model_path);
    ResultString result;
    check(smm_delta_oracle(model.ptr, s1.c_str(), s2.c_str(), depth, &result.ptr), "delta-oracle");
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      const json r = json::parse(result.str());
      std::cout << "delta in [" << r["lower"].get<std::string>() << ", "
                << r["upper"].get<std::string>() << "]"
                << (r["exact"].get<bool>() ? " (exact)" : "") << "\n";
    }
    return 0;
  }

  if (cmd_clique->parsed()) {
    ResultString result;
    check(smm_clique(read_file(graph_path).c_str(),
                     kappa_json.empty() ? nullptr : kappa_json.c_str(), threads, &result.ptr),
          "clique");
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      const json r = json::parse(result.str());
      std::cout << "clique_size=" << r["clique_size"] << " counts=[";
      for (std::size_t j = 0; j < r["counts"].size(); ++j) {
        std::cout << (j ? " " : "") << r["counts"][j].get<std::string>();
      }
      std::cout << "]\n";
    }
    return 0;
  }

  if (cmd_gadget->parsed()) {
    ResultString result;
    check(smm_gadget_emit(read_file(graph_path).c_str(), what.c_str(), calib_index,
                          kappa_json.empty() ? nullptr : kappa_json.c_str(), &result.ptr),
          "gadget");
    std::ofstream out(emit_path);
    if (!out) die("cannot write '" + emit_path + "'");
    out << json::parse(result.str()).dump(2) << "\n";
    if (!json_output) std::cout << "wrote " << emit_path << "\n";
    return 0;
  }

  if (cmd_inapprox->parsed()) {
    ResultString result;
    check(smm_inapprox_bound(bound_n, bound_alpha, &result.ptr), "inapprox");
    if (json_output) {
      std::cout << result.str() << "\n";
    } else {
      const json r = json::parse(result.str());
      std::cout << "threshold=" << fmt(r["threshold"].get<double>()) << "\n";
    }
    return 0;
  }

  return kExitUsage;
}
