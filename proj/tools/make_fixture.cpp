// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

// Writes synthetic fixtures.
//
//   make_fixture companies --out DIR [--companies 30] [--seed 2021]
//   make_fixture kg --out DIR [--entities N] [--edges M] [--relations R] [--seed S]

#include <iostream>

#include "CLI11.hpp"
#include "sdg/error.hpp"
#include "sdg/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic fixture generator."};
  app.require_subcommand(1);

  std::string out;
  sdg::synthetic::FixtureOptions options;
  CLI::App* companies = app.add_subcommand("companies", "company fixture with texts, news, graph and labels");
  companies->add_option("--out", out, "output directory")->required();
  companies->add_option("--companies", options.companies, "number of companies");
  companies->add_option("--seed", options.seed, "generator seed");
  companies->add_option("--sdgs", options.sdgs, "SDGs to label")->delimiter(',');

  sdg::synthetic::KgShape shape;
  std::uint64_t kg_seed = 1;
  CLI::App* kg = app.add_subcommand("kg", "edge list with exact entity, edge and relation counts");
  kg->add_option("--out", out, "output directory")->required();
  kg->add_option("--entities", shape.entities, "entity count");
  kg->add_option("--edges", shape.edges, "edge count");
  kg->add_option("--relations", shape.relations, "relation type count");
  kg->add_option("--seed", kg_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (companies->parsed()) sdg::synthetic::write_company_fixture(out, options);
    if (kg->parsed()) sdg::synthetic::write_shaped_kg(out, shape, kg_seed);
  } catch (const sdg::Error& e) {
    std::cerr << "error: " << sdg::error_class_name(e.kind()) << ": " << e.what() << "\n";
    return sdg::exit_code_for(e.kind());
  }
  return 0;
}
