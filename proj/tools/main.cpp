#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "analysis.hpp"
#include "arfinsler/errors.hpp"

namespace {

using nlohmann::json;
using namespace arf::app;

int fail(const char* stage, const std::string& what, int code) {
  std::cerr << "error [" << stage << "]: " << what << "\n";
  return code;
}

void write_json(const std::string& path, const json& doc) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of almost rational Finsler metrics"};
  app.require_subcommand(1);

  std::vector<std::string> specs;
  std::string object, json_path, weyl;
  int points = -1;
  unsigned precision = 0;
  std::uint64_t seed = 1;

  auto common = [&](CLI::App* sub, bool many) {
    if (many)
      sub->add_option("--spec", specs, "Metric definition file (repeatable)")->required()->check(CLI::ExistingFile);
    else
      sub->add_option("--spec", specs, "Metric definition file")->required()->expected(1)->check(CLI::ExistingFile);
    sub->add_option("--json", json_path, "Also write the report as JSON to this path");
    sub->add_option("--weyl", weyl, "Weyl curvature variant")->check(CLI::IsMember({"printed", "standard"}));
    sub->add_option("--points", points, "Oracle sample points (0 disables the oracle)")->check(CLI::Range(0, 1000));
    sub->add_option("--precision", precision, "Oracle working precision in digits")->check(CLI::Range(20, 10000));
    sub->add_option("--seed", seed, "Seed for sampling");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "Full report for each metric");
  common(analyze, true);
  CLI::App* tensor = app.add_subcommand("tensor", "Print one geometric object");
  common(tensor, false);
  tensor->add_option("--object", object, "Object name (g, ginv, C, I, G, N, Gjk, Gjkl, D, L, J, R, Ric, W, W_standard, chi, S, E, F2)")
      ->required();
  CLI::App* verify = app.add_subcommand("verify", "Check every registered claim; nonzero exit on failure");
  common(verify, true);
  CLI::App* oracle = app.add_subcommand("oracle", "Numeric cross-check of every tensor");
  common(oracle, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kSpecError;
  }

  RunOptions opt;
  if (weyl == "printed") opt.weyl = arf::WeylVariant::Printed;
  if (weyl == "standard") opt.weyl = arf::WeylVariant::Standard;
  if (points >= 0) opt.points = points;
  if (precision > 0) opt.precision = precision;
  opt.seed = seed;

  std::vector<arf::MetricSpec> parsed;
  for (const auto& path : specs) {
    try {
      parsed.push_back(load_spec(path));
    } catch (const arf::ParseError& e) {
      return fail("parse", path + ": " + e.what(), kSpecError);
    } catch (const std::exception& e) {
      return fail("spec", path + ": " + e.what(), kSpecError);
    }
  }

  const char* stage = "pipeline";
  try {
    if (tensor->parsed()) {
      std::cout << run_tensor(parsed[0], object, opt);
      return kOk;
    }
    json doc = {{"command", app.get_subcommands().front()->get_name()}, {"reports", json::array()}};
    int exit_code = kOk;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      json report;
      if (verify->parsed()) {
        stage = "verify";
        VerifyOutcome v = run_verify(parsed[i], opt);
        exit_code = std::max(exit_code, v.exit_code);
        report = std::move(v.report);
      } else if (oracle->parsed()) {
        stage = "oracle";
        report = run_oracle_report(parsed[i], opt);
        if (!report["oracle"]["ok"].get<bool>()) exit_code = kInternal;
      } else {
        stage = "analyze";
        report = run_analysis(parsed[i], opt);
      }
      std::cout << "== " << specs[i] << "\n" << render_text(report);
      doc["reports"].push_back({{"path", specs[i]}, {"report", report}});
    }
    doc["exit_code"] = exit_code;
    write_json(json_path, doc);
    return exit_code;
  } catch (const arf::InternalInconsistency& e) {
    return fail(stage, e.what(), kInternal);
  } catch (const arf::Error& e) {
    return fail(stage, e.what(), kSpecError);
  } catch (const std::exception& e) {
    return fail(stage, e.what(), kInternal);
  }
}
