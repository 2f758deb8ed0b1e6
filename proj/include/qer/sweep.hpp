// Experiment sweeps: run recovery methods and dual bounds over a noise-
// parameter grid, gather one row per (grid point, method), and emit a
// deterministic CSV table and a self-contained SVG chart.
#pragma once

#include "qer/bounds.hpp"
#include "qer/sdp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qer {

struct CodeSpec {
  std::string id;  // "five_qubit" | "steane" | "shor" | "random"
  int n = 0;       // random codes only
  int k = 0;
  std::uint64_t seed = 0;
};

struct ChannelSpec {
  std::string id;  // "amplitude_damping" | "depolarizing" |
                   // "pure_state_rotation"
  std::vector<double> params;     // grid; empty -> the channel's default grid
  double theta = 0.0;             // rotation half-angle; 0 -> 5*pi/12
};

// Method tokens: "baseline" (bare single-qubit channel, no recovery),
// "qec" (syndrome-table correction), "eigqer", "blockeig<M>" (e.g.
// "blockeig2"), "orderqer<digits>" (error-pattern orders, e.g. "orderqer12"
// for orders {1,2}), "optimal" (full-space semidefinite solve).
// Bound tokens: "gersgorin", "svd" (repaired first when infeasible),
// "iterative_lambda" (repair from the lambda-max start on the greedy
// partition), "iterative_block<M>" (repair from blocked subspace duals),
// "iterated_block<M>" (pairwise merge of blocked subspace duals),
// "pauli_cert" (exact certificate; Pauli channels on stabilizer codes).
struct ExperimentSpec {
  CodeSpec code;
  ChannelSpec channel;
  std::vector<std::string> methods;
  std::vector<std::string> bounds;
  std::string csv_path;    // empty -> no file
  std::string chart_path;  // empty -> no file
  int workers = 0;         // grid points in flight; 0 -> available cores
  bool force_large_sdp = false;  // allow full-space SDP beyond 6 qubits
  bool timing = false;     // record wall seconds (defeats byte-identity)
  SdpOptions sdp;
};

struct SweepRow {
  std::string code;
  std::string channel;
  std::string param_name;
  double param_value = 0.0;
  std::string method;
  double value = 0.0;    // fidelity or bound; NaN when the row failed
  double margin = 0.0;   // dual feasibility margin; 0 for recovery rows
  Index elements = 0;    // operator elements; dual updates for repairs
  double seconds = 0.0;  // 0 unless timing was requested
  bool failed = false;
  std::string error;     // diagnostic for failed rows (not part of the CSV)
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (param_value, requested order)
  bool any_failed = false;
};

// Runs every requested method and bound at every grid point. Rows are
// computed in a worker pool and sorted deterministically afterwards, so
// identical specs produce identical tables (byte-identical CSV when timing
// is off). A failing row records its error and the sweep continues; an
// invalid spec (unknown token, parameter outside the channel's domain, or
// a full-space SDP beyond 6 qubits without the force flag) throws
// std::invalid_argument before any work starts. After gathering, every
// feasible bound row is checked against every recovery row at the same
// grid point (1e-6 slack) and the optimal value against the structured
// methods; a violation throws std::logic_error.
SweepResult run_sweep(const ExperimentSpec& spec);

// CSV with header `code,channel,param_name,param_value,method,value,
// margin,elements,seconds`: UTF-8, LF line endings, numbers printed with
// up to 17 significant digits so parsing them back is bit-exact.
std::string csv_string(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);

// Self-contained SVG line chart: one polyline per method over the grid,
// axes, ticks, and legend; failed rows are skipped.
std::string chart_string(const SweepResult& result);
void emit_chart(const SweepResult& result, const std::string& path);

}  // namespace qer
