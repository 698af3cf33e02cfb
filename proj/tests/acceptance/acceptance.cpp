// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "diagbound/bounds.hpp"
#include "diagbound/likelihood.hpp"
#include "diagbound/netgen.hpp"
#include "diagbound/oracle.hpp"
#include "diagbound/posterior.hpp"
#include "diagbound/report.hpp"
#include "diagbound/search.hpp"

using namespace diagbound;

namespace {

constexpr double kContainTol = 1e-9;     // criteria 1, 2: oracle vs kernel rounding, absolute
constexpr double kPmin = 1e-5;           // criteria 1, 2
constexpr double kTightTol = 1e-12;      // criterion 4, single-candidate nodes
constexpr double kFactorTol = 1e-12;     // criterion 6, relative
constexpr double kScaleSeconds = 60.0;   // criterion 8

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Everything a criterion emits that must be reproducible (criterion 9).
using Transcript = std::vector<std::string>;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const DocumentOptions kNoTiming{DocumentFormat::document, false};

// --- criteria 1-3: the 200-network sweep --------------------------------

struct SweepStats {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::size_t converged = 0;
  std::size_t capped = 0;
  std::size_t exact = 0;
  std::size_t error_over_pmin = 0;       // converged with total_error >= p_min
  std::size_t best_outside_error = 0;    // |best - exact| > total_error + 1e-9
  std::size_t trace_violations = 0;
  std::size_t capped_runs = 0;         // extra runs with a 25-node cap
  std::size_t capped_violations = 0;
  double max_total_error_converged = 0.0;
  double seconds = 0.0;
  std::string containment_note, convergence_note, trace_note;
};

SweepStats run_sweep(Transcript& transcript) {
  SweepStats st;
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.n_diseases = 5 + (seed * 7) % 14;     // 5..18
    spec.n_findings = 8 + (seed * 13) % 33;    // 8..40
    spec.mean_links = 1.5 + static_cast<double>(seed % 4) * 0.5;
    Network n = generate(spec);
    Evidence e = sample_case(n, seed, 1 + seed % 6).evidence;

    SearchConfig config;
    config.p_min = kPmin;
    config.trace_every = 1;
    ExactResult ex = enumerate_exact(n, e);
    Search s(n, e, config);
    Termination t = s.run();
    CompareReport report = compare(s, ex, kContainTol);
    ++st.cases;
    st.violations += report.violations;
    if (report.violations && st.containment_note.empty())
      st.containment_note = "; first violation at seed " + std::to_string(seed);

    if (t == Termination::node_cap) {
      ++st.capped;
    } else {
      (t == Termination::exact ? st.exact : st.converged) += 1;
      st.max_total_error_converged = std::max(st.max_total_error_converged, s.total_error());
      if (!(s.total_error() < kPmin)) ++st.error_over_pmin;
      for (const auto& row : report.rows)
        if (row.kind == "hypothesis" && row.best_error > s.total_error() + kContainTol) {
          ++st.best_outside_error;
          if (st.convergence_note.empty())
            st.convergence_note = "; first at seed " + std::to_string(seed);
        }
    }

    // the same case stopped early by a tight cap must stay contained too
    SearchConfig tight = config;
    tight.max_hypotheses = 25;
    Search capped(n, e, tight);
    if (capped.run() == Termination::node_cap) ++st.capped_runs;
    CompareReport capped_report = compare(capped, ex, kContainTol);
    st.capped_violations += capped_report.violations;
    if (capped_report.violations && st.containment_note.empty())
      st.containment_note = "; first capped violation at seed " + std::to_string(seed);
    transcript.push_back(compare_document(capped_report, kNoTiming));

    const auto& trace = s.trace();
    for (std::size_t i = 1; i < trace.size(); ++i) {
      bool ok = trace[i].total_error <= trace[i - 1].total_error &&
                trace[i].log_ubr_total <= trace[i - 1].log_ubr_total &&
                trace[i].log_lbr_total >= trace[i - 1].log_lbr_total;
      if (!ok) {
        ++st.trace_violations;
        if (st.trace_note.empty()) st.trace_note = "; first at seed " + std::to_string(seed);
      }
    }

    transcript.push_back(compare_document(report, kNoTiming));
    transcript.push_back(result_document(n, config, assemble(s), 0.0, kNoTiming));
    transcript.push_back(trace_text(trace, false));
  }
  st.seconds = seconds_since(t0);
  return st;
}

// --- criterion 4: bound ordering on every created node ------------------

Outcome criterion4(Transcript& transcript) {
  std::size_t nodes = 0, outside = 0, order = 0, single = 0, loose = 0;
  for (std::uint64_t seed = 1001; seed <= 1050; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.n_diseases = 6 + seed % 9;
    spec.n_findings = 10 + seed % 20;
    Network n = generate(spec);
    Evidence e = sample_case(n, seed, seed % 5).evidence;
    ExactResult ex = enumerate_exact(n, e);

    struct Seen {
      DiseaseSet included;
      std::vector<DiseaseId> candidates;
      NodeBounds bounds;
    };
    std::vector<Seen> seen;
    Search s(n, e, {}, [&](const NodeView& v) {
      seen.push_back({v.included, {v.candidates.begin(), v.candidates.end()}, v.bounds});
    });
    s.run();
    const double mult = s.factored().log_multiplier;
    for (const Seen& node : seen) {
      ++nodes;
      double exact = std::exp(log_exact_partial_mass(
                                  ex, node.included, s.excluded_of(node.included, node.candidates)) -
                              mult);
      double lb = std::exp(node.bounds.log_lb), ub = std::exp(node.bounds.log_ub);
      double slack = kContainTol * std::max(1.0, exact);
      if (exact < lb - slack || exact > ub + slack) ++outside;
      if (node.bounds.log_r_complete > node.bounds.log_lb2 + 1e-12) ++order;
      if (node.candidates.size() == 1) {
        ++single;
        double tight = std::exp(std::min(node.bounds.log_ub1, node.bounds.log_ub2));
        if (std::fabs(tight - exact) > kTightTol * std::max(1.0, exact)) ++loose;
      }
    }
    transcript.push_back(std::to_string(seen.size()) + " " + fmt("%.17g", s.log_lbr()) + " " +
                         fmt("%.17g", s.log_ubr()));
  }
  Outcome o;
  o.pass = outside == 0 && order == 0 && loose == 0 && single > 0;
  o.detail = std::to_string(nodes) + " nodes, " + std::to_string(outside) +
             " outside [lb,ub], " + std::to_string(order) + " with LB1 > LB2, " +
             std::to_string(single) + " single-candidate nodes, " + std::to_string(loose) +
             " not tight at 1e-12";
  return o;
}

// --- criterion 5: qualitative theorems ------------------------------------

Outcome criterion5(Transcript& transcript) {
  std::size_t findings = 0, finding_fail = 0, mep_fail = 0;
  std::string witness;
  for (std::uint64_t seed = 2001; seed <= 2050; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.n_diseases = 6 + seed % 7;  // <= 12 for the 4^n declining-MEP check
    spec.n_findings = 10 + seed % 25;
    spec.mean_links = 1.0 + static_cast<double>(seed % 5) * 0.5;
    Network n = generate(spec);
    for (FindingId f = 0; f < n.finding_count(); ++f) {
      ++findings;
      CheckResult a = check_positive_influence(n, f);
      CheckResult b = check_nps_pairwise(n, f);
      CheckResult c = check_nps_general(n, f);
      if (!a.passed || !b.passed || !c.passed) {
        ++finding_fail;
        if (witness.empty()) witness = a.witness + b.witness + c.witness;
      }
    }
    Evidence e = sample_case(n, seed, seed % 6).evidence;
    CheckResult mep = check_declining_mep(n, e);
    if (!mep.passed) {
      ++mep_fail;
      if (witness.empty()) witness = mep.witness;
    }
    transcript.push_back(std::to_string(mep.cases_checked));
  }
  Outcome o;
  o.pass = finding_fail == 0 && mep_fail == 0;
  o.detail = std::to_string(findings) + " findings checked (pos, nps2, npsn), " +
             std::to_string(finding_fail) + " failing; declining MEP on 50 cases, " +
             std::to_string(mep_fail) + " failing";
  if (!witness.empty()) o.detail += "; witness: " + witness;
  return o;
}

// --- criterion 6: factored diseases are exact ------------------------------

bool rel_equal(double a, double b) {
  return std::fabs(a - b) <= kFactorTol * std::max(std::fabs(a), std::fabs(b));
}

Outcome criterion6(Transcript& transcript) {
  std::size_t compared = 0, mismatched = 0, prior_mismatch = 0;
  for (std::uint64_t seed = 3001; seed <= 3020; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.n_diseases = 8 + seed % 8;
    spec.n_findings = 15 + seed % 20;
    Network base = generate(spec);
    Evidence e = sample_case(base, seed, 2 + seed % 5).evidence;
    Network aug = with_unlinked_diseases(base, 3, seed);

    Search a(base, e), b(aug, e);
    a.run();
    b.run();
    InferenceResult ra = assemble(a), rb = assemble(b);
    for (std::size_t d = 0; d < base.disease_count(); ++d) {
      const auto& x = ra.marginals[d];
      const auto& y = rb.marginals[d];
      compared += 3;
      mismatched += !rel_equal(x.lbp, y.lbp) + !rel_equal(x.ubp, y.ubp) +
                    !rel_equal(x.best, y.best);
    }
    const std::size_t h = std::min(ra.hypotheses.size(), rb.hypotheses.size());
    if (ra.hypotheses.size() != rb.hypotheses.size()) ++mismatched;
    for (std::size_t i = 0; i < h; ++i) {
      compared += 3;
      mismatched += !rel_equal(ra.hypotheses[i].lbp, rb.hypotheses[i].lbp) +
                    !rel_equal(ra.hypotheses[i].ubp, rb.hypotheses[i].ubp) +
                    !rel_equal(ra.hypotheses[i].best, rb.hypotheses[i].best);
      if (ra.hypotheses[i].present != rb.hypotheses[i].present) ++mismatched;
    }
    for (std::size_t d = base.disease_count(); d < aug.disease_count(); ++d) {
      const auto& m = rb.marginals[d];
      const double p = aug.diseases[d].prior;
      if (!m.factored || m.lbp != p || m.ubp != p || m.best != p) ++prior_mismatch;
    }
    transcript.push_back(result_document(aug, b.config(), rb, 0.0, kNoTiming));
  }
  Outcome o;
  o.pass = mismatched == 0 && prior_mismatch == 0;
  o.detail = std::to_string(compared) + " linked-disease posterior values compared, " +
             std::to_string(mismatched) + " differ beyond 1e-12 relative; " +
             std::to_string(prior_mismatch) + " of 60 factored marginals differ from prior";
  return o;
}

// --- criterion 7: overflow ---------------------------------------------------

Outcome criterion7(Transcript& transcript) {
  GenSpec spec;
  spec.seed = 7;
  spec.n_diseases = 60;
  spec.n_findings = 150;
  spec.leak_min = 0.0005;
  spec.leak_max = 0.002;
  spec.strength_min = 0.7;
  spec.strength_max = 0.95;
  spec.prior_min = 0.01;
  spec.prior_max = 0.1;
  Network n = generate(spec);
  // a heavy presentation: 8 simultaneous diseases, strong links, tiny leaks
  DiseaseSet present(n.disease_count());
  for (DiseaseId d = 0; d < n.disease_count(); d += 8) present.insert(d);
  Evidence e = sample_case_given(n, present, 7, 10).evidence;

  AbsorbedEvidence absorbed = absorb(n, e);
  NodeLikelihoodCache root = root_cache(absorbed);
  double max_log_mep = kLogZero;
  for (DiseaseId d = 0; d < n.disease_count(); ++d)
    max_log_mep = std::max(max_log_mep, log_mep(absorbed, root, d));

  SearchConfig config;
  Search s(n, e, config);
  Termination t = s.run();
  InferenceResult r = assemble(s);
  bool finite = std::isfinite(r.log_lbr_total) && std::isfinite(r.log_ubr_total) &&
                std::isfinite(r.log_evidence_lower) && std::isfinite(r.log_evidence_upper) &&
                std::isfinite(r.total_error);
  bool valid = r.log_lbr_total <= r.log_ubr_total;
  for (const auto& m : r.marginals)
    valid = valid && 0.0 <= m.lbp && m.lbp <= m.best && m.best <= m.ubp && m.ubp <= 1.0;
  for (const auto& h : r.hypotheses)
    valid = valid && 0.0 <= h.lbp && h.lbp <= h.best && h.best <= h.ubp && h.ubp <= 1.0;
  const double root_ub1 = r.trace.empty() ? 0.0 : r.trace.front().log_ubr_total;

  Outcome o;
  o.pass = e.positive.size() >= 25 && max_log_mep > std::log(1e3) && finite && valid;
  o.detail = std::to_string(e.positive.size()) + " positives, max root MEP 10^" +
             fmt("%.1f", max_log_mep / std::log(10.0)) + ", initial log UBR " +
             fmt("%.1f", root_ub1) + ", termination " + to_string(t) + ", total_error " +
             fmt("%.3g", r.total_error) + (finite ? ", finite" : ", NON-FINITE") +
             (valid ? "" : ", INVALID bounds");
  transcript.push_back(result_document(n, config, r, 0.0, kNoTiming));
  return o;
}

// --- criterion 8: scale --------------------------------------------------------

Outcome criterion8(Transcript& transcript) {
  GenSpec spec;
  spec.seed = 576;
  spec.n_diseases = 576;
  spec.n_findings = 4000;
  Network n = generate(spec);
  // 9 positive + 11 negative findings
  Evidence e = sample_case(n, 4000, 11, 9).evidence;

  auto t0 = std::chrono::steady_clock::now();
  SearchConfig config;
  config.max_hypotheses = 30000;
  Search s(n, e, config);
  Termination t = s.run();
  InferenceResult r = assemble(s);
  const double secs = seconds_since(t0);

  bool valid = std::isfinite(r.log_lbr_total) && std::isfinite(r.log_ubr_total) &&
               r.log_lbr_total <= r.log_ubr_total;
  for (const auto& m : r.marginals)
    valid = valid && 0.0 <= m.lbp && m.lbp <= m.best && m.best <= m.ubp && m.ubp <= 1.0;
  for (const auto& h : r.hypotheses)
    valid = valid && 0.0 <= h.lbp && h.lbp <= h.best && h.best <= h.ubp && h.ubp <= 1.0;

  Outcome o;
  o.pass = valid && secs < kScaleSeconds && r.nodes_created <= 30000 &&
           e.positive.size() + e.negative.size() == 20;
  o.detail = std::to_string(e.positive.size()) + "+" + std::to_string(e.negative.size()) +
             " findings, " + std::to_string(r.nodes_created) + " nodes, termination " +
             to_string(t) + ", total_error " + fmt("%.3g", r.total_error) + ", " +
             fmt("%.2f", secs) + " s" + (valid ? "" : ", INVALID bounds");
  transcript.push_back(result_document(n, config, r, 0.0, kNoTiming));
  return o;
}

struct SuiteRun {
  SweepStats sweep;
  std::vector<Outcome> outcomes;  // criteria 1..8
  Transcript transcript;
};

SuiteRun run_suite() {
  SuiteRun run;
  run.sweep = run_sweep(run.transcript);
  const SweepStats& st = run.sweep;

  Outcome c1;
  c1.pass = st.violations == 0 && st.capped_violations == 0;
  c1.detail = std::to_string(st.cases) + " cases, " + std::to_string(st.violations) +
              " containment violations at 1e-9 (" + std::to_string(st.exact) + " exact, " +
              std::to_string(st.converged) + " pmin, " + std::to_string(st.capped) +
              " node cap); 25-node-cap reruns: " + std::to_string(st.capped_runs) +
              " capped, " + std::to_string(st.capped_violations) + " violations; " +
              fmt("%.1f", st.seconds) + " s";
  Outcome c2;
  c2.pass = st.error_over_pmin == 0 && st.best_outside_error == 0 && st.violations == 0;
  c2.detail = std::to_string(st.exact + st.converged) + " converged cases, max total_error " +
              fmt("%.3g", st.max_total_error_converged) + ", " +
              std::to_string(st.error_over_pmin) + " at or above 1e-5, " +
              std::to_string(st.best_outside_error) + " hypotheses with |best-exact| > total_error + 1e-9";
  Outcome c3;
  c3.pass = st.trace_violations == 0;
  c3.detail = std::to_string(st.trace_violations) + " non-monotone trace steps over " +
              std::to_string(st.cases) + " traces";
  c1.detail += st.containment_note;
  c2.detail += st.convergence_note;
  c3.detail += st.trace_note;
  run.outcomes = {c1, c2, c3};
  run.outcomes.push_back(criterion4(run.transcript));
  run.outcomes.push_back(criterion5(run.transcript));
  run.outcomes.push_back(criterion6(run.transcript));
  run.outcomes.push_back(criterion7(run.transcript));
  run.outcomes.push_back(criterion8(run.transcript));
  return run;
}

}  // namespace

int main() {
  const char* names[] = {"soundness sweep",     "convergence",           "anytime monotonicity",
                         "bound ordering",      "qualitative theorems",  "factored exactness",
                         "overflow robustness", "scale smoke test",      "determinism"};
  SuiteRun first = run_suite();
  bool all = true;
  for (std::size_t i = 0; i < first.outcomes.size(); ++i) {
    const Outcome& o = first.outcomes[i];
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, names[i],
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }

  SuiteRun second = run_suite();
  std::size_t differing = 0;
  const std::size_t docs = std::min(first.transcript.size(), second.transcript.size());
  for (std::size_t i = 0; i < docs; ++i) differing += first.transcript[i] != second.transcript[i];
  bool same = differing == 0 && first.transcript.size() == second.transcript.size();
  std::printf("%s criterion 9 (%s): %zu documents compared across two full runs, %zu differ\n",
              same ? "PASS" : "FAIL", names[8], docs, differing);
  all = all && same;
  return all ? 0 : 1;
}
