#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "diagbound/network.hpp"
#include "diagbound/oracle.hpp"
#include "diagbound/posterior.hpp"
#include "diagbound/search.hpp"

namespace diagbound {

enum class DocumentFormat { document, tabular };

DocumentFormat parse_document_format(const std::string& text);

struct DocumentOptions {
  DocumentFormat format = DocumentFormat::document;
  bool timing = true;  // false drops wall-clock fields, for reproducibility diffs
};

/// Result of a bounded run. Hypotheses and marginals carry names; factored
/// diseases are listed separately.
std::string result_document(const Network& network, const SearchConfig& config,
                            const InferenceResult& result, double wall_ms,
                            const DocumentOptions& options = {});

/// Oracle result in the same schema with lbp = ubp = best.
std::string exact_document(const Network& network, const ExactResult& exact,
                           std::size_t top_n, const DocumentOptions& options = {});

inline constexpr const char* kTraceHeader =
    "expansions nodes settled log_lbr_total log_ubr_total total_error wall_ms";

/// Whitespace-separated table, one row per TraceRow, header first.
std::string trace_text(const std::vector<TraceRow>& rows, bool timing = true);

struct CompareRow {
  std::string kind;  // "hypothesis" or "marginal"
  std::string label;
  double exact = 0.0;
  double lbp = 0.0;
  double ubp = 0.0;
  double best = 0.0;
  double best_error = 0.0;
  bool violation = false;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::size_t violations = 0;
  double max_best_error = 0.0;
  double mean_best_error = 0.0;
  double total_error = 1.0;
  bool evidence_contained = true;  // log P(F) within its bounds
  Termination termination = Termination::running;
};

/// Checks every settled hypothesis and every marginal of a finished search
/// against the oracle. A row is a violation when the exact value leaves
/// [lbp - tol, ubp + tol] or best leaves [lbp, ubp].
CompareReport compare(const Search& search, const ExactResult& exact,
                      double tolerance = 1e-9);

std::string compare_document(const CompareReport& report,
                             const DocumentOptions& options = {});

std::string check_document(const std::vector<std::string>& names,
                           const std::vector<CheckResult>& results);

}  // namespace diagbound
