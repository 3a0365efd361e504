// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

// sdgscore: company SDG alignment pipeline.
//
//   sdgscore <verb> --config run.json [--seed N] [--out DIR] [...]
//
// Errors go to stderr as one line `error: CLASS: detail`. Exit codes: 0 ok,
// 2 configuration, 3 data, 4 numeric failure.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdg/error.hpp"
#include "sdg/pipeline.hpp"
#include "sdg/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> top_k;
  std::optional<double> dedup_threshold;
  std::optional<int> threads;
};

json read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw sdg::Error(sdg::ErrorKind::kConfigPath, "config file not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw sdg::Error(sdg::ErrorKind::kConfig, "config " + path.string() + " is not valid JSON: " + e.what());
  }
}

sdg::pipeline::PipelineConfig load(const CommonFlags& f) {
  const fs::path path = f.config;
  json j = read_config_file(path);
  if (!j.is_object()) throw sdg::Error(sdg::ErrorKind::kConfig, "config must be a JSON object");
  if (f.seed) j["seed"] = *f.seed;
  if (f.out) j["output_dir"] = fs::absolute(*f.out).string();
  if (f.threads) j["threads"] = *f.threads;
  if (f.top_k || f.dedup_threshold) {
    json& r = j["relevance"];
    if (r.is_null()) r = json::object();
    if (f.top_k) r["top_k"] = *f.top_k;
    if (f.dedup_threshold) r["dedup_threshold"] = *f.dedup_threshold;
  }
  return sdg::pipeline::config_from_json(j, path.parent_path());
}

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "pipeline configuration (JSON)")->required();
  cmd->add_option("--seed", f.seed, "master seed, overrides the config");
  cmd->add_option("--out", f.out, "output directory, overrides the config");
  cmd->add_option("--top-k", f.top_k, "evidence sentences kept per company and SDG");
  cmd->add_option("--dedup-threshold", f.dedup_threshold, "headline overlap that marks a duplicate");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores); outputs do not depend on it");
}

int fail(std::string_view cls, const std::string& detail, int code) {
  std::string line = detail;
  for (char& ch : line) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  std::cerr << "error: " << cls << ": " << line << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scores company alignment with the UN Sustainable Development Goals."};
  app.set_version_flag("--version", std::string(sdg::kVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  sdg::pipeline::ExplainRequest request;
  std::string company;
  int sdg_filter = 0;
  std::string model_path;

  using Stage = std::function<void(const sdg::pipeline::PipelineConfig&)>;
  const std::vector<std::tuple<const char*, const char*, Stage>> verbs = {
      {"extract-graph", "2-hop knowledge-graph subgraph around the companies", sdg::pipeline::extract_graph},
      {"summarize-graph", "company summary graph, degree histogram and reachability", sdg::pipeline::summarize_graph},
      {"filter-text", "relevant evidence sentences and influential news", sdg::pipeline::filter_text},
      {"featurize", "vocabulary, bag-of-words rows, labels and splits", sdg::pipeline::featurize},
      {"train", "fit the configured models per SDG", sdg::pipeline::train},
      {"predict", "predictions.csv for every company", sdg::pipeline::predict},
      {"evaluate", "micro and macro F1 on the test splits", sdg::pipeline::evaluate},
      {"pipeline", "run every stage in order", sdg::pipeline::run_all},
  };
  std::map<CLI::App*, Stage> handlers;
  for (const auto& [name, help, fn] : verbs) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, flags);
    handlers[cmd] = fn;
  }
  CLI::App* explain_cmd = app.add_subcommand("explain", "term and edge explanations with supporting evidence");
  add_common(explain_cmd, flags);
  explain_cmd->add_option("--company", company, "explain one company");
  explain_cmd->add_option("--sdg", sdg_filter, "explain one SDG");
  explain_cmd->add_option("--model", model_path, "explain one model file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("CONFIG", e.what(), sdg::exit_code_for(sdg::ErrorKind::kConfig));
  }

  try {
    const auto config = load(flags);
    if (explain_cmd->parsed()) {
      if (!company.empty()) request.company = company;
      if (sdg_filter != 0) request.sdg = sdg_filter;
      if (!model_path.empty()) request.model = fs::path(model_path);
      sdg::pipeline::explain(config, request);
    } else {
      for (const auto& [cmd, fn] : handlers) {
        if (cmd->parsed()) fn(config);
      }
    }
  } catch (const sdg::Error& e) {
    return fail(sdg::error_class_name(e.kind()), e.what(), sdg::exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    return fail("INTERNAL", e.what(), 3);
  }
  return 0;
}
