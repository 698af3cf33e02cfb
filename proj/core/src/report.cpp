#include "diagbound/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "diagbound/logmath.hpp"
#include "json.hpp"

namespace diagbound {

using nlohmann::ordered_json;

namespace {

// JSON has no infinities
ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

std::string fmt(double x, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::vector<std::string> names_of(const Network& network,
                                  const std::vector<DiseaseId>& ids) {
  std::vector<std::string> out;
  for (DiseaseId d : ids) out.push_back(network.diseases[d].name);
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  if (parts.empty()) return "{}";
  std::string s = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + "}";
}

std::string tabular(const std::vector<std::pair<std::string, std::string>>& head,
                    const ordered_json& hyps, const ordered_json& margs) {
  std::ostringstream out;
  for (const auto& [k, v] : head) out << "# " << k << " " << v << "\n";
  out << "\nhypothesis lbp best ubp\n";
  for (const auto& h : hyps) {
    std::vector<std::string> names = h["present"].get<std::vector<std::string>>();
    out << join(names) << " " << fmt(h["lbp"].get<double>()) << " "
        << fmt(h["best"].get<double>()) << " " << fmt(h["ubp"].get<double>()) << "\n";
  }
  out << "\ndisease prior lbp best ubp\n";
  for (const auto& m : margs)
    out << m["disease"].get<std::string>() << " " << fmt(m["prior"].get<double>())
        << " " << fmt(m["lbp"].get<double>()) << " " << fmt(m["best"].get<double>())
        << " " << fmt(m["ubp"].get<double>()) << "\n";
  return out.str();
}

}  // namespace

DocumentFormat parse_document_format(const std::string& text) {
  if (text == "document") return DocumentFormat::document;
  if (text == "tabular") return DocumentFormat::tabular;
  throw InputError("unknown format '" + text + "' (expected document or tabular)");
}

std::string result_document(const Network& network, const SearchConfig& config,
                            const InferenceResult& result, double wall_ms,
                            const DocumentOptions& options) {
  ordered_json doc;
  doc["kind"] = "bounds";
  doc["config"] = {{"pmin", config.p_min},
                   {"max_hyps", config.max_hypotheses},
                   {"top", config.top_n},
                   {"trace_every", config.trace_every},
                   {"stop_rule", to_string(config.stop_rule)}};
  doc["termination"] = to_string(result.termination);
  doc["degraded"] = result.degraded;
  doc["counters"] = {{"expansions", result.expansions},
                     {"nodes", result.nodes_created},
                     {"settled", result.settled},
                     {"frontier", result.frontier},
                     {"factored", result.factored}};
  if (options.timing) doc["wall_ms"] = wall_ms;
  doc["total_error"] = result.total_error;
  doc["log_lbr_total"] = number(result.log_lbr_total);
  doc["log_ubr_total"] = number(result.log_ubr_total);
  doc["log_evidence"] = {{"lower", number(result.log_evidence_lower)},
                         {"upper", number(result.log_evidence_upper)}};

  ordered_json hyps = ordered_json::array();
  for (const auto& h : result.hypotheses)
    hyps.push_back({{"present", names_of(network, h.present)},
                    {"log_r", number(h.log_r)},
                    {"lbp", h.lbp},
                    {"best", h.best},
                    {"ubp", h.ubp},
                    {"best_raw", h.best_raw}});
  doc["hypotheses"] = hyps;

  ordered_json margs = ordered_json::array();
  for (const auto& m : result.marginals)
    margs.push_back({{"disease", network.diseases[m.disease].name},
                     {"prior", m.prior},
                     {"lbp", m.lbp},
                     {"best", m.best},
                     {"ubp", m.ubp},
                     {"best_raw", m.best_raw},
                     {"factored", m.factored}});
  doc["marginals"] = margs;

  if (options.format == DocumentFormat::document) return doc.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> head = {
      {"termination", to_string(result.termination)},
      {"total_error", fmt(result.total_error)},
      {"expansions", std::to_string(result.expansions)},
      {"nodes", std::to_string(result.nodes_created)},
      {"settled", std::to_string(result.settled)},
      {"log_evidence", "[" + fmt(result.log_evidence_lower) + ", " +
                           fmt(result.log_evidence_upper) + "]"},
      {"degraded", result.degraded ? "yes" : "no"}};
  if (options.timing) head.push_back({"wall_ms", fmt(wall_ms, "%.3f")});
  return tabular(head, hyps, margs);
}

std::string exact_document(const Network& network, const ExactResult& exact,
                           std::size_t top_n, const DocumentOptions& options) {
  const std::size_t masks = exact.log_r.size();
  std::vector<std::uint32_t> order(masks);
  std::iota(order.begin(), order.end(), 0u);
  const std::size_t keep = std::min(top_n, masks);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (exact.log_r[a] != exact.log_r[b])
                        return exact.log_r[a] > exact.log_r[b];
                      return a < b;
                    });

  ordered_json doc;
  doc["kind"] = "exact";
  doc["termination"] = "exact";
  doc["total_error"] = 0.0;
  doc["log_evidence"] = {{"lower", number(exact.log_evidence_probability)},
                         {"upper", number(exact.log_evidence_probability)}};

  ordered_json hyps = ordered_json::array();
  for (std::size_t i = 0; i < keep; ++i) {
    const std::uint32_t mask = order[i];
    std::vector<DiseaseId> present;
    for (std::size_t d = 0; d < exact.disease_count; ++d)
      if ((mask >> d) & 1u) present.push_back(static_cast<DiseaseId>(d));
    const double p = exact.posterior(mask);
    hyps.push_back({{"present", names_of(network, present)},
                    {"log_r", number(exact.log_r[mask])},
                    {"lbp", p},
                    {"best", p},
                    {"ubp", p}});
  }
  doc["hypotheses"] = hyps;

  ordered_json margs = ordered_json::array();
  for (std::size_t d = 0; d < exact.disease_count; ++d)
    margs.push_back({{"disease", network.diseases[d].name},
                     {"prior", network.diseases[d].prior},
                     {"lbp", exact.marginal[d]},
                     {"best", exact.marginal[d]},
                     {"ubp", exact.marginal[d]}});
  doc["marginals"] = margs;

  if (options.format == DocumentFormat::document) return doc.dump(2) + "\n";
  return tabular({{"termination", "exact"},
                  {"log_evidence", fmt(exact.log_evidence_probability)}},
                 hyps, margs);
}

std::string trace_text(const std::vector<TraceRow>& rows, bool timing) {
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (const auto& r : rows)
    out << r.expansions << " " << r.nodes << " " << r.settled << " "
        << fmt(r.log_lbr_total, "%.17g") << " " << fmt(r.log_ubr_total, "%.17g")
        << " " << fmt(r.total_error, "%.17g") << " "
        << (timing ? fmt(r.wall_ms, "%.3f") : std::string("0")) << "\n";
  return out.str();
}

CompareReport compare(const Search& search, const ExactResult& exact,
                      double tolerance) {
  const Network& network = search.network();
  const std::size_t n = network.disease_count();
  const FactoredSet& factored = search.factored();
  CompareReport report;
  report.total_error = search.total_error();
  report.termination = search.termination();

  double error_sum = 0.0;
  std::size_t error_count = 0;
  auto record = [&](CompareRow row) {
    row.best_error = std::fabs(row.best - row.exact);
    row.violation = row.exact < row.lbp - tolerance ||
                    row.exact > row.ubp + tolerance || row.best < row.lbp ||
                    row.best > row.ubp;
    if (row.violation) ++report.violations;
    report.max_best_error = std::max(report.max_best_error, row.best_error);
    error_sum += row.best_error;
    ++error_count;
    report.rows.push_back(std::move(row));
  };

  for (const auto& h : settled_posteriors(search)) {
    DiseaseSet included(n, h.present);
    DiseaseSet excluded(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto d = static_cast<DiseaseId>(i);
      if (!included.contains(d) && !factored.members.contains(d)) excluded.insert(d);
    }
    CompareRow row;
    row.kind = "hypothesis";
    row.label = join(names_of(network, h.present));
    row.exact = std::exp(log_exact_partial_mass(exact, included, excluded) -
                         exact.log_r_total);
    row.lbp = h.lbp;
    row.ubp = h.ubp;
    row.best = h.best;
    record(std::move(row));
  }

  for (const auto& m : all_marginal_bounds(search)) {
    CompareRow row;
    row.kind = "marginal";
    row.label = network.diseases[m.disease].name;
    row.exact = exact.marginal[m.disease];
    row.lbp = m.lbp;
    row.ubp = m.ubp;
    row.best = m.best;
    record(std::move(row));
  }

  const Interval ev = evidence_probability_bounds(search);
  const double slack = tolerance * std::max(1.0, std::fabs(exact.log_evidence_probability));
  report.evidence_contained = ev.lower <= exact.log_evidence_probability + slack &&
                              exact.log_evidence_probability <= ev.upper + slack;
  if (!report.evidence_contained) ++report.violations;

  report.mean_best_error = error_count ? error_sum / static_cast<double>(error_count) : 0.0;
  return report;
}

std::string compare_document(const CompareReport& report,
                             const DocumentOptions& options) {
  if (options.format == DocumentFormat::tabular) {
    std::ostringstream out;
    out << "# termination " << to_string(report.termination) << "\n"
        << "# total_error " << fmt(report.total_error) << "\n"
        << "# violations " << report.violations << "\n"
        << "# max_best_error " << fmt(report.max_best_error) << "\n"
        << "# mean_best_error " << fmt(report.mean_best_error) << "\n"
        << "# evidence_contained " << (report.evidence_contained ? "yes" : "no")
        << "\n\nkind label exact lbp ubp best best_error violation\n";
    for (const auto& r : report.rows)
      out << r.kind << " " << r.label << " " << fmt(r.exact) << " " << fmt(r.lbp)
          << " " << fmt(r.ubp) << " " << fmt(r.best) << " " << fmt(r.best_error)
          << " " << (r.violation ? "VIOLATION" : "ok") << "\n";
    return out.str();
  }
  ordered_json doc;
  doc["kind"] = "compare";
  doc["termination"] = to_string(report.termination);
  doc["total_error"] = report.total_error;
  doc["violations"] = report.violations;
  doc["max_best_error"] = report.max_best_error;
  doc["mean_best_error"] = report.mean_best_error;
  doc["evidence_contained"] = report.evidence_contained;
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"kind", r.kind},
                    {"label", r.label},
                    {"exact", r.exact},
                    {"lbp", r.lbp},
                    {"ubp", r.ubp},
                    {"best", r.best},
                    {"best_error", r.best_error},
                    {"violation", r.violation}});
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string check_document(const std::vector<std::string>& names,
                           const std::vector<CheckResult>& results) {
  std::ostringstream out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CheckResult& r = results[i];
    out << (r.passed ? "PASS " : "FAIL ") << names[i] << " (" << r.cases_checked
        << " cases)";
    if (!r.passed) out << " witness: " << r.witness;
    out << "\n";
  }
  return out.str();
}

}  // namespace diagbound
