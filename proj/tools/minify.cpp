// Rule-merging CSS minifier.
//
// Exit codes: 0 ok, 1 parse error, 2 solver failure, 3 validation failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cssmin/minifier.hpp"

using namespace cssmin;

int main(int argc, char** argv) {
  CLI::App app{"Semantics-preserving CSS minification by rule merging"};
  std::string input, output, report_file, mode = "fast", backend = "opt", validate;
  std::string smt_dir, wcnf_dir, graph_file;
  RunConfig cfg;
  bool lenient = false;
  app.add_option("input", input, "Stylesheet to minify")->required()->check(CLI::ExistingFile);
  app.add_option("-o,--output", output, "Write the result here instead of stdout");
  app.add_option("--timeout", cfg.timeout_s, "Overall time budget in seconds")->check(CLI::PositiveNumber);
  app.add_option("--workers", cfg.workers, "Parallel Max-SAT instances")->check(CLI::PositiveNumber);
  app.add_option("--partitions", cfg.partitions, "Partitions per worker (0 sizes them from the node count)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--mode", mode, "Biclique enumeration")->check(CLI::IsMember({"fast", "full"}));
  app.add_option("--backend", backend, "Emptiness backend")->check(CLI::IsMember({"opt", "full", "both"}));
  app.add_option("--emit-smt", smt_dir, "Write every SMT query to this directory");
  app.add_option("--emit-wcnf", wcnf_dir, "Write every Max-SAT instance to this directory");
  app.add_option("--emit-graph", graph_file, "Write the CSS graphs as JSON");
  app.add_option("--validate", validate, "Check equivalence on trees up to depth,branch");
  app.add_flag("--deterministic", cfg.deterministic, "One worker, one partition");
  app.add_option("--report", report_file, "Write a JSON report");
  app.add_option("--max-iterations", cfg.max_iterations, "Merges to apply at most");
  app.add_flag("--lenient", lenient, "Keep rules that cannot be parsed verbatim");
  CLI11_PARSE(app, argc, argv);

  cfg.mode = mode == "full" ? EnumMode::Full : EnumMode::Fast;
  cfg.emptiness.backend = backend == "full" ? Backend::Full : backend == "both" ? Backend::Both : Backend::Optimized;
  cfg.emptiness.smt.emit_dir = smt_dir;
  cfg.maxsat.emit_dir = wcnf_dir;
  cfg.emit_graph_file = graph_file;
  if (cfg.partitions == 0) cfg.auto_partitions = true;
  if (!validate.empty()) {
    ValidationBounds vb;
    char comma = 0;
    std::istringstream vs(validate);
    if (!(vs >> vb.depth >> comma >> vb.branch) || comma != ',' || vb.depth < 1 || vb.branch < 0) {
      std::cerr << "--validate expects depth,branch\n";
      return 1;
    }
    cfg.validate = vb;
  }

  std::ifstream in(input);
  std::stringstream buf;
  buf << in.rdbuf();
  Stylesheet ss;
  try {
    ss = parse_stylesheet(buf.str(), lenient);
  } catch (const ParseError& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return 1;
  }

  RunReport rep = run(ss, cfg);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  const std::string css = serialize(rep.output) + "\n";
  if (output.empty()) {
    std::cout << css;
  } else {
    std::ofstream(output) << css;
  }
  if (!report_file.empty()) std::ofstream(report_file) << report_json(rep) << "\n";
  std::cerr << rep.bytes_in << " -> " << rep.bytes_out << " bytes, " << rep.iterations.size() << " merges, "
            << rep.seconds << " s\n";

  if (rep.validation && !rep.validation->pass) {
    std::cerr << "validation failed: " << rep.validation->reason << "\n";
    if (rep.validation->witness)
      std::cerr << rep.validation->witness->tree << "node " << rep.validation->witness->node << ": "
                << rep.validation->witness->label << "\n";
    return 3;
  }
  if (rep.solver_failed) return 2;
  return 0;
}
