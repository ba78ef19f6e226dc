// Command-line front end: validation, construction, search, and exhaustive
// finite-model checks over workspace files. Exit codes: 0 all checks passed,
// 1 some check failed, 2 input error.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "dirackit/workspace.hpp"

namespace {

using dirackit::CommandOutcome;
using dirackit::Json;

struct CommonOpts {
  std::string path;
  std::string report_out;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("file", opts.path, "workspace file")->required();
  cmd->add_option("--report-out", opts.report_out, "write the JSON report to this path");
  cmd->add_flag("--quiet", opts.quiet, "suppress stdout report");
}

int emit(const CommonOpts& opts, CommandOutcome outcome, const std::string& digest,
         double elapsed_ms) {
  outcome.report["inputs_digest"] = digest;
  outcome.report["ok"] = outcome.ok;
  // Timing lives outside the digest-relevant result subtree.
  outcome.report["timing_ms"] = elapsed_ms;
  std::string text = outcome.report.dump(2);
  if (!opts.quiet) std::cout << text << "\n";
  if (!opts.report_out.empty()) {
    std::ofstream out(opts.report_out);
    out << text << "\n";
  }
  if (!outcome.ok && opts.quiet) {
    for (const auto& check : outcome.report["result"]["checks"]) {
      if (!check.at("passed").get<bool>())
        std::cerr << "failed: " << check.at("name").get<std::string>() << "\n";
    }
  }
  return outcome.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic toolkit for metrized linear groupoids, Dirac Manin "
               "triples, and their homogeneous spaces"};
  app.require_subcommand(1);

  CommonOpts validate_opts, buildq_opts, homspace_opts, search_opts, finite_opts;
  std::string triple_name, c_name, k_name, candidates_name, model_name;
  std::size_t max_subset = 8;
  bool via_q = false, via_dbeta = false, both = false;

  CLI::App* validate = app.add_subcommand("validate", "validate a Dirac Manin triple");
  add_common(validate, validate_opts);
  validate->add_option("--triple", triple_name, "triple name (default: the only one)");

  CLI::App* buildq = app.add_subcommand("build-q", "construct the quadratic triple (q,g,r)");
  add_common(buildq, buildq_opts);
  buildq->add_option("--triple", triple_name, "triple name");

  CLI::App* homspace = app.add_subcommand("homspace", "build the homogeneous-space fiber for c");
  add_common(homspace, homspace_opts);
  homspace->add_option("--triple", triple_name, "triple name");
  homspace->add_option("--c", c_name, "subspace name of the candidate c")->required();
  homspace->add_flag("--via-q", via_q, "construct through the lambda normal form");
  homspace->add_flag("--via-dbeta", via_dbeta, "construct through d x d*_beta (default)");
  homspace->add_flag("--both", both, "run both constructions and cross-check");

  CLI::App* search = app.add_subcommand("search", "enumerate coisotropic subalgebras");
  add_common(search, search_opts);
  search->add_option("--triple", triple_name, "triple name");
  search->add_option("--k", k_name, "subspace name of k")->required();
  search->add_option("--candidates", candidates_name, "subspace entry listing candidates")
      ->required();
  search->add_option("--max-subset-size", max_subset, "largest candidate subset to try");

  CLI::App* finite = app.add_subcommand("finite-check", "exhaustive finite-model verification");
  add_common(finite, finite_opts);
  finite->add_option("--model", model_name, "finite_model name");

  CLI11_PARSE(app, argc, argv);

  try {
    auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                       started)
          .count();
    };
    if (validate->parsed()) {
      auto ws = dirackit::load_workspace(validate_opts.path);
      return emit(validate_opts, dirackit::cmd_validate(ws, triple_name),
                  dirackit::file_digest(validate_opts.path), elapsed());
    }
    if (buildq->parsed()) {
      auto ws = dirackit::load_workspace(buildq_opts.path);
      return emit(buildq_opts, dirackit::cmd_build_q(ws, triple_name),
                  dirackit::file_digest(buildq_opts.path), elapsed());
    }
    if (homspace->parsed()) {
      auto ws = dirackit::load_workspace(homspace_opts.path);
      dirackit::HomspaceRoute route = dirackit::HomspaceRoute::via_dbeta;
      if (both)
        route = dirackit::HomspaceRoute::both;
      else if (via_q && !via_dbeta)
        route = dirackit::HomspaceRoute::via_q;
      return emit(homspace_opts, dirackit::cmd_homspace(ws, triple_name, c_name, route),
                  dirackit::file_digest(homspace_opts.path), elapsed());
    }
    if (search->parsed()) {
      auto ws = dirackit::load_workspace(search_opts.path);
      return emit(search_opts,
                  dirackit::cmd_search(ws, triple_name, k_name, candidates_name, max_subset),
                  dirackit::file_digest(search_opts.path), elapsed());
    }
    if (finite->parsed()) {
      auto ws = dirackit::load_workspace(finite_opts.path);
      return emit(finite_opts, dirackit::cmd_finite_check(ws, model_name),
                  dirackit::file_digest(finite_opts.path), elapsed());
    }
  } catch (const dirackit::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const dirackit::DimMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
