#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diagbound/netgen.hpp"
#include "diagbound/network_io.hpp"
#include "diagbound/oracle.hpp"
#include "diagbound/posterior.hpp"
#include "diagbound/report.hpp"
#include "diagbound/search.hpp"
#include "json.hpp"

namespace diagbound::cli {

namespace {

struct SolveFlags {
  double pmin = 1e-5;
  std::size_t max_hyps = 30000;
  std::size_t top = 10;
  std::size_t trace_every = 32;
  std::string trace_out;
  std::string format = "document";
  std::string stop_rule = "total";
  bool no_timing = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--pmin", f.pmin, "Stop once total error falls below this")
      ->capture_default_str();
  cmd->add_option("--max-hyps", f.max_hyps, "Node cap")->capture_default_str();
  cmd->add_option("--top", f.top, "Hypotheses to report")->capture_default_str();
  cmd->add_option("--trace-every", f.trace_every, "Expansions between trace rows")
      ->capture_default_str();
  cmd->add_option("--trace-out", f.trace_out, "Write the convergence trace here");
  cmd->add_option("--format", f.format, "document | tabular")->capture_default_str();
  cmd->add_option("--stop-rule", f.stop_rule,
                  "total: whole-space error; node: largest frontier node")
      ->capture_default_str();
  cmd->add_flag("--no-timing", f.no_timing, "Omit wall-clock fields");
}

SearchConfig config_from(const SolveFlags& f) {
  SearchConfig c;
  c.p_min = f.pmin;
  c.max_hypotheses = f.max_hyps;
  c.top_n = f.top;
  c.trace_every = f.trace_every;
  if (f.stop_rule == "total")
    c.stop_rule = StopRule::total_error;
  else if (f.stop_rule == "node")
    c.stop_rule = StopRule::largest_node;
  else
    throw InputError("unknown stop rule '" + f.stop_rule + "' (expected total or node)");
  c.validate();
  return c;
}

DocumentOptions options_from(const SolveFlags& f) {
  return {parse_document_format(f.format), !f.no_timing};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_text_file(path, text);
}

int cmd_generate(const GenSpec& spec, const std::string& path, std::ostream& out) {
  Network network = generate(spec);
  validate(network).raise_if_failed("generated network");
  emit(serialize_network(network), path, out);
  return kOk;
}

int cmd_sample(const std::string& net_path, std::uint64_t seed,
               std::size_t negatives, std::size_t max_positive,
               const std::string& path, std::ostream& out) {
  Network network = load_network(net_path);
  validate(network).raise_if_failed("network");
  SampledCase sampled = sample_case(network, seed, negatives, max_positive);
  auto doc = nlohmann::ordered_json::parse(serialize_case(network, sampled.evidence));
  std::vector<std::string> truth;
  for (DiseaseId d : sampled.true_diseases) truth.push_back(network.diseases[d].name);
  doc["true_diseases"] = truth;  // ignored by the case parser
  emit(doc.dump(2) + "\n", path, out);
  return kOk;
}

int cmd_solve(const std::string& net_path, const std::string& case_path,
              const SolveFlags& flags, const std::string& path, std::ostream& out) {
  SearchConfig config = config_from(flags);
  DocumentOptions options = options_from(flags);
  Network network = load_network(net_path);
  Evidence evidence = load_case(network, case_path);
  Search search(network, evidence, config);
  Termination t = search.run();
  InferenceResult result = assemble(search);
  emit(result_document(network, config, result, search.elapsed_ms(), options), path, out);
  if (!flags.trace_out.empty())
    write_text_file(flags.trace_out, trace_text(result.trace, options.timing));
  return t == Termination::node_cap ? kNodeCap : kOk;
}

int cmd_exact(const std::string& net_path, const std::string& case_path,
              std::size_t top, const std::string& format, const std::string& path,
              std::ostream& out) {
  Network network = load_network(net_path);
  Evidence evidence = load_case(network, case_path);
  validate(network).raise_if_failed("network");
  validate_case(network, evidence).raise_if_failed("case");
  ExactResult exact = enumerate_exact(network, evidence);
  emit(exact_document(network, exact, top, {parse_document_format(format), true}),
       path, out);
  return kOk;
}

int cmd_compare(const std::string& net_path, const std::string& case_path,
                const SolveFlags& flags, const std::string& path, std::ostream& out) {
  SearchConfig config = config_from(flags);
  DocumentOptions options = options_from(flags);
  Network network = load_network(net_path);
  Evidence evidence = load_case(network, case_path);
  validate(network).raise_if_failed("network");
  validate_case(network, evidence).raise_if_failed("case");
  ExactResult exact = enumerate_exact(network, evidence);
  Search search(network, evidence, config);
  search.run();
  CompareReport report = compare(search, exact);
  emit(compare_document(report, options), path, out);
  if (!flags.trace_out.empty())
    write_text_file(flags.trace_out, trace_text(search.trace(), options.timing));
  return report.violations > 0 ? kViolation : kOk;
}

int cmd_check(const std::string& net_path, const std::string& case_path,
              const std::vector<std::string>& checks, std::ostream& out) {
  Network network = load_network(net_path);
  validate(network).raise_if_failed("network");
  auto per_finding = [&](CheckResult (*fn)(const Network&, FindingId)) {
    CheckResult all;
    for (std::size_t f = 0; f < network.finding_count(); ++f) {
      CheckResult r = fn(network, static_cast<FindingId>(f));
      all.cases_checked += r.cases_checked;
      if (!r.passed && all.passed) {
        all.passed = false;
        all.witness = network.findings[f].name + ": " + r.witness;
      }
    }
    return all;
  };
  for (const std::string& c : checks) {
    try {
      CheckResult r;
      if (c == "pos") {
        r = per_finding(check_positive_influence);
      } else if (c == "nps2") {
        r = per_finding(check_nps_pairwise);
      } else if (c == "npsn") {
        r = per_finding(check_nps_general);
      } else if (c == "mep") {
        Evidence evidence;
        if (!case_path.empty()) evidence = load_case(network, case_path);
        validate_case(network, evidence).raise_if_failed("case");
        r = check_declining_mep(network, evidence);
      } else {
        throw InputError("unknown check '" + c + "' (expected pos, nps2, npsn, mep)");
      }
      out << check_document({c}, {r});
    } catch (const OracleTooLarge& e) {
      out << "SKIP " << c << " (" << e.what() << ")\n";
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anytime posterior bounds for bipartite noisy-OR diagnostic networks"};
  app.require_subcommand(1);

  GenSpec spec;
  std::string mode = "noisy-or-leaky";
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "Generate a synthetic network");
  gen->add_option("--seed", spec.seed)->capture_default_str();
  gen->add_option("--diseases", spec.n_diseases)->capture_default_str();
  gen->add_option("--findings", spec.n_findings)->capture_default_str();
  gen->add_option("--links", spec.mean_links, "Mean parents per finding")
      ->capture_default_str();
  gen->add_option("--prior-min", spec.prior_min)->capture_default_str();
  gen->add_option("--prior-max", spec.prior_max)->capture_default_str();
  gen->add_option("--strength-min", spec.strength_min)->capture_default_str();
  gen->add_option("--strength-max", spec.strength_max)->capture_default_str();
  gen->add_option("--leak-min", spec.leak_min)->capture_default_str();
  gen->add_option("--leak-max", spec.leak_max)->capture_default_str();
  gen->add_option("--mode", mode, "noisy-or-leaky | tabular-nps")->capture_default_str();
  gen->add_option("-o,--out", out_path, "Output file (default stdout)");

  std::string net_path, case_path;
  std::uint64_t seed = 1;
  std::size_t negatives = 11, max_positive = 0;
  auto* sample = app.add_subcommand("sample-case", "Forward-sample a case");
  sample->add_option("network", net_path)->required();
  sample->add_option("--seed", seed)->capture_default_str();
  sample->add_option("--negatives", negatives)->capture_default_str();
  sample->add_option("--max-positive", max_positive, "0 keeps all positives")
      ->capture_default_str();
  sample->add_option("-o,--out", out_path);

  SolveFlags flags;
  auto* solve = app.add_subcommand("solve", "Bound posteriors by best-first search");
  solve->add_option("network", net_path)->required();
  solve->add_option("case", case_path)->required();
  solve->add_option("--seed", seed, "Accepted for uniformity; the search is deterministic");
  add_solve_flags(solve, flags);
  solve->add_option("-o,--out", out_path);

  std::size_t exact_top = 10;
  std::string exact_format = "document";
  auto* exact = app.add_subcommand("exact", "Exact posteriors by enumeration");
  exact->add_option("network", net_path)->required();
  exact->add_option("case", case_path)->required();
  exact->add_option("--top", exact_top)->capture_default_str();
  exact->add_option("--format", exact_format)->capture_default_str();
  exact->add_option("-o,--out", out_path);

  auto* cmp = app.add_subcommand("compare", "Check search bounds against the oracle");
  cmp->add_option("network", net_path)->required();
  cmp->add_option("case", case_path)->required();
  add_solve_flags(cmp, flags);
  cmp->add_option("-o,--out", out_path);

  std::vector<std::string> checks;
  auto* check = app.add_subcommand("check", "Run qualitative property checkers");
  check->add_option("network", net_path)->required();
  check->add_option("--case", case_path, "Case for the declining-MEP check");
  check->add_option("--check", checks, "pos, nps2, npsn, mep (default all)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*gen) {
      spec.mode = parse_gate_mode(mode);
      return cmd_generate(spec, out_path, out);
    }
    if (*sample) return cmd_sample(net_path, seed, negatives, max_positive, out_path, out);
    if (*solve) return cmd_solve(net_path, case_path, flags, out_path, out);
    if (*exact) return cmd_exact(net_path, case_path, exact_top, exact_format, out_path, out);
    if (*cmp) return cmd_compare(net_path, case_path, flags, out_path, out);
    if (*check) {
      if (checks.empty()) checks = {"pos", "nps2", "npsn", "mep"};
      return cmd_check(net_path, case_path, checks, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace diagbound::cli
