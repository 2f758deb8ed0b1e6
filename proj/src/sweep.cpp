#include "qer/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qer/channels.hpp"
#include "qer/codes.hpp"
#include "qer/fidelity.hpp"
#include "qer/opalg.hpp"
#include "qer/recovery.hpp"

namespace qer {

namespace {

constexpr double kDefaultTheta = 5.0 * 3.14159265358979323846 / 12.0;

[[noreturn]] void invalid(const std::string& what) {
  throw std::invalid_argument("sweep: " + what);
}

// ---------------------------------------------------------------------------
// Requested columns.

struct Column {
  enum Kind {
    kBaseline,
    kQec,
    kEigQer,
    kBlockEig,
    kOrderQer,
    kOptimal,
    kGersgorin,
    kSvd,
    kIterLambda,
    kIterBlock,
    kIteratedBlock,
    kPauliCert,
  };
  std::string token;
  Kind kind = kBaseline;
  bool is_bound = false;
  Index M = 0;              // block size for the block-based columns
  std::vector<int> orders;  // error-pattern orders
};

// Parses a decimal suffix after `prefix`; returns false when `tok` does not
// start with the prefix, throws when the suffix is missing or malformed.
bool suffix_of(const std::string& tok, const std::string& prefix, long& out) {
  if (tok.rfind(prefix, 0) != 0) return false;
  const std::string tail = tok.substr(prefix.size());
  if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
    invalid("malformed token '" + tok + "': expected " + prefix + "<number>");
  out = std::strtol(tail.c_str(), nullptr, 10);
  return true;
}

Column parse_method(const std::string& tok) {
  Column col;
  col.token = tok;
  long m = 0;
  if (tok == "baseline") {
    col.kind = Column::kBaseline;
  } else if (tok == "qec") {
    col.kind = Column::kQec;
  } else if (tok == "eigqer") {
    col.kind = Column::kEigQer;
  } else if (tok == "optimal") {
    col.kind = Column::kOptimal;
  } else if (suffix_of(tok, "blockeig", m)) {
    col.kind = Column::kBlockEig;
    col.M = m;
  } else if (tok.rfind("orderqer", 0) == 0) {
    col.kind = Column::kOrderQer;
    for (char c : tok.substr(8)) {
      if (c < '1' || c > '9')
        invalid("malformed token '" + tok + "': orders are digits 1-9");
      col.orders.push_back(c - '0');
    }
    if (col.orders.empty())
      invalid("malformed token '" + tok + "': no orders given");
    for (size_t i = 1; i < col.orders.size(); ++i) {
      if (col.orders[i] <= col.orders[i - 1])
        invalid("malformed token '" + tok + "': orders must increase");
    }
  } else {
    invalid("unknown method '" + tok + "'");
  }
  return col;
}

Column parse_bound(const std::string& tok) {
  Column col;
  col.token = tok;
  col.is_bound = true;
  long m = 0;
  if (tok == "gersgorin") {
    col.kind = Column::kGersgorin;
  } else if (tok == "svd") {
    col.kind = Column::kSvd;
  } else if (tok == "iterative_lambda") {
    col.kind = Column::kIterLambda;
  } else if (tok == "pauli_cert") {
    col.kind = Column::kPauliCert;
  } else if (suffix_of(tok, "iterative_block", m)) {
    col.kind = Column::kIterBlock;
    col.M = m;
  } else if (suffix_of(tok, "iterated_block", m)) {
    col.kind = Column::kIteratedBlock;
    col.M = m;
  } else {
    invalid("unknown bound '" + tok + "'");
  }
  return col;
}

// ---------------------------------------------------------------------------
// Codes and channels.

struct CodeBundle {
  Mat U_C;  // encoding isometry, 2^n x 2^k
  std::optional<StabilizerCode> stab;
  int n = 0;
  int k = 0;
};

CodeBundle build_code(const CodeSpec& cs) {
  CodeBundle b;
  if (cs.id == "five_qubit") {
    b.stab = five_qubit_code();
  } else if (cs.id == "steane") {
    b.stab = steane_code();
  } else if (cs.id == "shor") {
    b.stab = shor_code();
  } else if (cs.id == "random") {
    if (cs.n < 2 || cs.n > 10) invalid("random code needs 2 <= n <= 10");
    if (cs.k < 1 || cs.k >= cs.n) invalid("random code needs 1 <= k < n");
    b.U_C = random_code(cs.n, cs.k, cs.seed);
    b.n = cs.n;
    b.k = cs.k;
    return b;
  } else {
    invalid("unknown code '" + cs.id + "'");
  }
  b.U_C = b.stab->U_C;
  b.n = b.stab->n;
  b.k = b.stab->k;
  return b;
}

struct ChannelPlan {
  std::string param_name;
  double lo = 0.0;
  double hi = 1.0;
  double theta = 0.0;  // rotation half-angle when applicable
  bool pauli = false;
  std::vector<double> grid;
};

ChannelPlan plan_channel(const ChannelSpec& cs) {
  ChannelPlan plan;
  if (cs.id == "amplitude_damping") {
    plan.param_name = "gamma";
    for (int i = 0; i <= 20; ++i) plan.grid.push_back(0.025 * i);
  } else if (cs.id == "depolarizing") {
    plan.param_name = "p";
    plan.pauli = true;
    plan.grid = {0.01, 0.05, 0.1, 0.2};
  } else if (cs.id == "pure_state_rotation") {
    plan.param_name = "phi";
    plan.theta = cs.theta > 0.0 ? cs.theta : kDefaultTheta;
    plan.hi = plan.theta;
    for (int i = 0; i <= 20; ++i) plan.grid.push_back(plan.theta * i / 20.0);
  } else {
    invalid("unknown channel '" + cs.id + "'");
  }
  if (!cs.params.empty()) plan.grid = cs.params;
  for (double v : plan.grid) {
    if (!std::isfinite(v) || v < plan.lo || v > plan.hi) {
      std::ostringstream msg;
      msg << plan.param_name << " = " << v << " outside ["
          << plan.lo << ", " << plan.hi << "]";
      invalid(msg.str());
    }
  }
  return plan;
}

KrausChannel single_qubit_channel(const ChannelSpec& cs,
                                  const ChannelPlan& plan, double value) {
  if (cs.id == "amplitude_damping") return amplitude_damping(value);
  if (cs.id == "depolarizing") return depolarizing(value);
  return pure_state_rotation(plan.theta, value);
}

PauliChannelSpec depolarizing_channel_spec(int n, double p) {
  const std::string letters = "IXYZ";
  PauliChannelSpec spec;
  spec.n = n;
  const Index total = Index(1) << (2 * n);
  for (Index t = 0; t < total; ++t) {
    std::string word(static_cast<size_t>(n), 'I');
    double prob = 1.0;
    for (int site = 0; site < n; ++site) {
      const int l = int((t >> (2 * (n - 1 - site))) & 3);
      word[static_cast<size_t>(site)] = letters[static_cast<size_t>(l)];
      prob *= (l == 0) ? 1.0 - p : p / 3.0;
    }
    spec.terms.push_back({word, cplx(std::sqrt(prob), 0.0)});
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Per-grid-point evaluation with shared lazy artifacts.

struct PointContext {
  const ExperimentSpec* spec = nullptr;
  const CodeBundle* code = nullptr;
  const ChannelPlan* plan = nullptr;
  double value = 0.0;
  KrausChannel single;
  DataMatrix D;

  std::optional<StructuredRecovery> eig;
  std::optional<std::vector<Mat>> partition;
  std::map<Index, BlockRecovery> blocks;

  const StructuredRecovery& eig_rec() {
    if (!eig) eig = eig_qer(D);
    return *eig;
  }
  // Subspace partition for the partition-based bounds: the supports of the
  // greedy recovery extended by the orthogonal complement.
  const std::vector<Mat>& bases() {
    if (!partition) partition = recovery_subspace_bases(eig_rec());
    return *partition;
  }
  const BlockRecovery& block(Index M) {
    auto it = blocks.find(M);
    if (it == blocks.end())
      it = blocks.emplace(M, block_eig_qer(D, M, spec->sdp)).first;
    return it->second;
  }
};

const StabilizerCode& require_stabilizer(const PointContext& ctx,
                                         const std::string& what) {
  if (!ctx.code->stab)
    throw std::runtime_error(what + " needs a stabilizer code");
  return *ctx.code->stab;
}

Index choi_rank(const Mat& X, Index d_S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(X);
  Index count = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-8 * double(d_S)) ++count;
  }
  return count;
}

// Fills value / margin / elements for one column at one grid point.
void eval_column(PointContext& ctx, const Column& col, SweepRow& row) {
  switch (col.kind) {
    case Column::kBaseline: {
      // The bare single-qubit channel with no recovery at all.
      DataMatrix bare =
          build_data_matrix(mixed_state_ensemble(2), ctx.single);
      row.value = fidelity_of_elements({Mat::Identity(2, 2)}, bare);
      row.elements = 1;
      return;
    }
    case Column::kQec: {
      const StabilizerCode& code = require_stabilizer(ctx, "qec");
      StructuredRecovery rec = standard_qec_recovery(code, ctx.D);
      row.value = rec.fidelity;
      row.elements = Index(rec.elements.size());
      return;
    }
    case Column::kEigQer: {
      const StructuredRecovery& rec = ctx.eig_rec();
      row.value = rec.fidelity;
      row.elements = Index(rec.elements.size());
      return;
    }
    case Column::kBlockEig: {
      const BlockRecovery& rec = ctx.block(col.M);
      row.value = rec.fidelity;
      row.elements = Index(block_recovery_elements(rec).size());
      return;
    }
    case Column::kOrderQer: {
      const StabilizerCode& code = require_stabilizer(ctx, "orderqer");
      // Element 1 of the single-qubit channel is the designated error.
      BlockRecovery rec =
          order_qer(code, ctx.single, 1, ctx.D, col.orders, true, ctx.spec->sdp);
      row.value = rec.fidelity;
      row.elements = Index(block_recovery_elements(rec).size());
      return;
    }
    case Column::kOptimal: {
      QerSdpSolution sol =
          solve_qer_sdp({ctx.D.C, ctx.D.d_S, ctx.D.d_C}, ctx.spec->sdp);
      if (!sol.converged)
        throw std::runtime_error("semidefinite solver did not converge");
      row.value = sol.primal_value;
      row.margin = std::max(0.0, sol.gap);
      row.elements = choi_rank(sol.X, ctx.D.d_S);
      return;
    }
    case Column::kGersgorin: {
      DualPoint dp = gersgorin_dual(ctx.D, ctx.bases());
      row.value = dp.bound;
      row.margin = dp.feasibility_margin;
      return;
    }
    case Column::kSvd: {
      DualPoint dp = svd_dual(ctx.D, ctx.bases());
      // An infeasible two-norm point is only an initializer; repair it so
      // the reported value is always a genuine bound.
      if (!dp.feasible) dp = iterative_dual(ctx.D, dp.Y);
      row.value = dp.bound;
      row.margin = dp.feasibility_margin;
      row.elements = dp.updates;
      return;
    }
    case Column::kIterLambda: {
      DualPoint dp =
          iterative_dual(ctx.D, block_lambda_max_init(ctx.D, ctx.bases()));
      row.value = dp.bound;
      row.margin = dp.feasibility_margin;
      row.elements = dp.updates;
      return;
    }
    case Column::kIterBlock: {
      DualPoint dp = iterative_dual(ctx.D, block_dual_init(ctx.block(col.M)));
      row.value = dp.bound;
      row.margin = dp.feasibility_margin;
      row.elements = dp.updates;
      return;
    }
    case Column::kIteratedBlock: {
      DualPoint dp = iterated_block_dual(ctx.D, ctx.block(col.M));
      row.value = dp.bound;
      row.margin = dp.feasibility_margin;
      row.elements = dp.updates;
      return;
    }
    case Column::kPauliCert: {
      const StabilizerCode& code = require_stabilizer(ctx, "pauli_cert");
      if (!ctx.plan->pauli)
        throw std::runtime_error("pauli_cert needs a Pauli channel");
      PauliCertificate cert = pauli_certificate(
          code, depolarizing_channel_spec(ctx.code->n, ctx.value));
      row.value = cert.dual.bound;
      row.margin = cert.dual.feasibility_margin;
      row.elements = Index(cert.recovery.elements.size());
      return;
    }
  }
  throw std::logic_error("sweep: unhandled column kind");
}

std::vector<SweepRow> run_point(const ExperimentSpec& spec,
                                const CodeBundle& code,
                                const ChannelPlan& plan,
                                const std::vector<Column>& columns,
                                double value) {
  std::vector<SweepRow> rows;
  rows.reserve(columns.size());
  SweepRow proto;
  proto.code = spec.code.id;
  proto.channel = spec.channel.id;
  proto.param_name = plan.param_name;
  proto.param_value = value;

  PointContext ctx;
  ctx.spec = &spec;
  ctx.code = &code;
  ctx.plan = &plan;
  ctx.value = value;
  std::string setup_error;
  try {
    ctx.single = single_qubit_channel(spec.channel, plan, value);
    ctx.D = build_data_matrix(
        mixed_state_ensemble(Index(1) << code.k),
        compose_encoding(tensor_pow(ctx.single, code.n), code.U_C));
  } catch (const std::exception& e) {
    setup_error = e.what();
  }

  for (const Column& col : columns) {
    SweepRow row = proto;
    row.method = col.token;
    const auto start = std::chrono::steady_clock::now();
    try {
      if (!setup_error.empty()) throw std::runtime_error(setup_error);
      eval_column(ctx, col, row);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.margin = 0.0;
      row.elements = 0;
    }
    if (spec.timing) {
      row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Every reported bound must dominate every recovery of the encoded problem
// at the same grid point, and no structured method may beat the optimum.
// The bare-channel baseline solves a different problem and is exempt.
void check_soundness(const std::vector<SweepRow>& rows,
                     const std::vector<Column>& columns) {
  const double slack = 1e-6;
  double best_recovery = -std::numeric_limits<double>::infinity();
  double optimal = std::numeric_limits<double>::infinity();
  const SweepRow* best_row = nullptr;
  for (size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    const Column& col = columns[i];
    if (row.failed || col.kind == Column::kBaseline) continue;
    if (col.kind == Column::kOptimal) optimal = row.value;
    if (!col.is_bound && row.value > best_recovery) {
      best_recovery = row.value;
      best_row = &row;
    }
  }
  auto complain = [&](const SweepRow& low, const std::string& high_name,
                      double high) {
    std::ostringstream msg;
    msg << "sweep soundness violated at " << low.param_name << " = "
        << low.param_value << ": " << high_name << " = " << high << " < "
        << best_row->method << " = " << best_row->value;
    throw std::logic_error(msg.str());
  };
  if (!best_row) return;
  for (size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    if (row.failed || !columns[i].is_bound) continue;
    if (row.value + slack < best_recovery) complain(row, row.method, row.value);
  }
  if (optimal + slack < best_recovery)
    complain(*best_row, "optimal", optimal);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good())
    throw std::runtime_error("sweep: cannot open '" + path + "' for writing");
  out.write(content.data(), std::streamsize(content.size()));
  if (!out.good()) throw std::runtime_error("sweep: write to '" + path + "' failed");
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec) {
  const CodeBundle code = build_code(spec.code);
  const ChannelPlan plan = plan_channel(spec.channel);

  std::vector<Column> columns;
  for (const std::string& tok : spec.methods) columns.push_back(parse_method(tok));
  for (const std::string& tok : spec.bounds) columns.push_back(parse_bound(tok));
  if (columns.empty()) invalid("no methods or bounds requested");

  const Index d_total = Index(1) << (code.n + code.k);
  for (const Column& col : columns) {
    if ((col.kind == Column::kBlockEig || col.kind == Column::kIterBlock ||
         col.kind == Column::kIteratedBlock) &&
        (col.M < 1 || col.M > d_total)) {
      invalid("block size in '" + col.token + "' outside [1, " +
              std::to_string(d_total) + "]");
    }
    if (col.kind == Column::kOrderQer && col.orders.back() > code.n)
      invalid("order in '" + col.token + "' exceeds the block length " +
              std::to_string(code.n));
    if (col.kind == Column::kOptimal && code.n >= 7 && !spec.force_large_sdp)
      invalid("full-space semidefinite solve on " + std::to_string(code.n) +
              " qubits is refused without force_large_sdp");
  }
  if (spec.workers < 0) invalid("workers must be nonnegative");

  // One task per grid point; artifacts shared between that point's columns.
  std::vector<std::vector<SweepRow>> per_point(plan.grid.size());
  std::atomic<size_t> next{0};
  auto drain = [&] {
    for (size_t i = next.fetch_add(1); i < plan.grid.size();
         i = next.fetch_add(1)) {
      per_point[i] = run_point(spec, code, plan, columns, plan.grid[i]);
    }
  };
  unsigned workers = spec.workers > 0
                         ? unsigned(spec.workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, unsigned(plan.grid.size()));
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
  }

  SweepResult result;
  for (std::vector<SweepRow>& rows : per_point) {
    check_soundness(rows, columns);
    for (SweepRow& row : rows) {
      result.any_failed = result.any_failed || row.failed;
      result.rows.push_back(std::move(row));
    }
  }
  // Deterministic order: by grid value, requested column order within ties.
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return a.param_value < b.param_value;
                   });

  if (!spec.csv_path.empty()) emit_csv(result, spec.csv_path);
  if (!spec.chart_path.empty()) emit_chart(result, spec.chart_path);
  return result;
}

std::string csv_string(const SweepResult& result) {
  std::string out =
      "code,channel,param_name,param_value,method,value,margin,elements,"
      "seconds\n";
  for (const SweepRow& row : result.rows) {
    out += row.code;
    out += ',';
    out += row.channel;
    out += ',';
    out += row.param_name;
    out += ',';
    out += fmt17(row.param_value);
    out += ',';
    out += row.method;
    out += ',';
    out += fmt17(row.value);
    out += ',';
    out += fmt17(row.margin);
    out += ',';
    out += std::to_string(row.elements);
    out += ',';
    out += fmt17(row.seconds);
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  write_file(path, csv_string(result));
}

std::string chart_string(const SweepResult& result) {
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  for (const SweepRow& row : result.rows) {
    if (row.failed || !std::isfinite(row.value)) continue;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.name == row.method; });
    if (it == series.end()) {
      series.push_back({row.method, {}});
      it = series.end() - 1;
    }
    it->pts.emplace_back(row.param_value, row.value);
  }
  for (Series& s : series) std::sort(s.pts.begin(), s.pts.end());

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const Series& s : series) {
    for (auto [x, y] : s.pts) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (series.empty()) {
    xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
  }
  if (xhi - xlo < 1e-12) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  ylo = std::min(ylo, yhi - 1e-3);
  const double ypad = 0.05 * (yhi - ylo);
  ylo -= ypad;
  yhi += ypad;

  const double W = 860, H = 540;
  const double L = 70, R = 190, T = 48, B = 56;
  const double PW = W - L - R, PH = H - T - B;
  auto px = [&](double x) { return L + (x - xlo) / (xhi - xlo) * PW; };
  auto py = [&](double y) { return T + (yhi - y) / (yhi - ylo) * PH; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
                                  "#bcbd22", "#7f7f7f"};
  const size_t ncolors = sizeof palette / sizeof palette[0];

  std::string title;
  std::string xlabel = "parameter";
  if (!result.rows.empty()) {
    title = result.rows.front().code + "  /  " + result.rows.front().channel;
    xlabel = result.rows.front().param_name;
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W
      << " " << H << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
      << "\" fill=\"#ffffff\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << fmt2(L + PW / 2) << "\" y=\"26\" "
        << "text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  }

  // Grid lines and ticks.
  svg << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double gx = L + PW * i / 5.0;
    const double gy = T + PH * i / 5.0;
    svg << "<line x1=\"" << fmt2(gx) << "\" y1=\"" << fmt2(T) << "\" x2=\""
        << fmt2(gx) << "\" y2=\"" << fmt2(T + PH) << "\"/>\n";
    svg << "<line x1=\"" << fmt2(L) << "\" y1=\"" << fmt2(gy) << "\" x2=\""
        << fmt2(L + PW) << "\" y2=\"" << fmt2(gy) << "\"/>\n";
  }
  svg << "</g>\n";
  svg << "<g fill=\"#333333\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xlo + (xhi - xlo) * i / 5.0;
    const double yv = yhi - (yhi - ylo) * i / 5.0;
    svg << "<text x=\"" << fmt2(L + PW * i / 5.0) << "\" y=\""
        << fmt2(T + PH + 20) << "\" text-anchor=\"middle\">" << fmt_tick(xv)
        << "</text>\n";
    svg << "<text x=\"" << fmt2(L - 8) << "\" y=\"" << fmt2(T + PH * i / 5.0 + 4)
        << "\" text-anchor=\"end\">" << fmt_tick(yv) << "</text>\n";
  }
  svg << "<text x=\"" << fmt2(L + PW / 2) << "\" y=\"" << fmt2(H - 14)
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  svg << "<text x=\"20\" y=\"" << fmt2(T + PH / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << fmt2(T + PH / 2) << ")\">fidelity / bound</text>\n";
  svg << "</g>\n";
  svg << "<rect x=\"" << fmt2(L) << "\" y=\"" << fmt2(T) << "\" width=\""
      << fmt2(PW) << "\" height=\"" << fmt2(PH)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // Series and legend.
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % ncolors];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (size_t i = 0; i < series[s].pts.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt2(px(series[s].pts[i].first)) << ','
          << fmt2(py(series[s].pts[i].second));
    }
    svg << "\"/>\n";
    svg << "<g fill=\"" << color << "\">\n";
    for (auto [x, y] : series[s].pts) {
      svg << "<circle cx=\"" << fmt2(px(x)) << "\" cy=\"" << fmt2(py(y))
          << "\" r=\"2.6\"/>\n";
    }
    svg << "</g>\n";
    const double ly = T + 10 + 22.0 * double(s);
    svg << "<line x1=\"" << fmt2(W - R + 14) << "\" y1=\"" << fmt2(ly)
        << "\" x2=\"" << fmt2(W - R + 40) << "\" y2=\"" << fmt2(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2.5\"/>\n";
    svg << "<text x=\"" << fmt2(W - R + 48) << "\" y=\"" << fmt2(ly + 4)
        << "\">" << series[s].name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_chart(const SweepResult& result, const std::string& path) {
  write_file(path, chart_string(result));
}

}  // namespace qer
