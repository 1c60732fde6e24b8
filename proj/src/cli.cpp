// Copyright 2026 The gsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsep/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "gsep/geometry.hpp"
#include "gsep/io.hpp"
#include "gsep/search.hpp"

namespace gsep::cli {

namespace {

using io::json;

struct Options {
  std::optional<double> hbar;
  std::optional<double> tol;
  std::string format = "json";
  bool timing = false;
  std::string input;
  std::string criteria = "all";
  std::string epsilon = "search";
  std::string strategy = "uniform";
  std::string ab = "scan";
  int j = 1;
  std::string grid = "200x200";
  int threads = 1;
  std::string out_path;
  std::string plane;
  std::string blob;
  std::string subsystem = "A";
};

struct Loaded {
  io::InputDocument doc;
  std::optional<NormalizedMatrix> m;
  std::optional<CovarianceMatrix> sigma;
  std::optional<QuantumCondition> qc;
  std::string problem;

  bool valid_state() const { return qc && qc->holds; }
};

Loaded load(const Options& opt, const Tolerances& tol) {
  Loaded l{io::load_input(opt.input, opt.hbar), {}, {}, {}, {}};
  const auto& split = l.doc.split;
  try {
    if (l.doc.kind == io::MatrixKind::Sigma) {
      l.sigma.emplace(split, l.doc.matrix);
      l.m.emplace(to_normalized(*l.sigma));
    } else {
      l.m.emplace(split, l.doc.matrix);
      if (l.m->positive_definite()) l.sigma.emplace(from_normalized(*l.m));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    l.problem = e.what();
  }
  if (!l.sigma) {
    if (l.problem.empty()) l.problem = "M is not positive definite";
    return l;
  }
  l.qc = check_quantum_condition(*l.sigma, tol);
  if (!l.qc->holds) l.problem = "quantum condition violated";
  return l;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(io::parse_number(item, what));
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, what + ": empty list");
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// "a,b" for one pair or "a1,a2,.../b1,b2,..." in general.
std::pair<Vector, Vector> parse_ab(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return {to_vector(parse_list(text.substr(0, slash), "--ab")),
            to_vector(parse_list(text.substr(slash + 1), "--ab"))};
  }
  const auto v = parse_list(text, "--ab");
  if (v.size() != 2) throw Error(ErrorCode::ParseError, "--ab: expected 'a,b' or 'a1,../b1,..'");
  return {to_vector({v[0]}), to_vector({v[1]})};
}

std::vector<int> parse_plane(const std::string& text, const BipartiteSplit& split) {
  if (text == "A" || text == "B") {
    const Subsystem s = text == "A" ? Subsystem::A : Subsystem::B;
    std::vector<int> coords;
    for (int i = 0; i < split.dim_of(s); ++i) coords.push_back(split.offset_of(s) + i);
    return coords;
  }
  std::vector<int> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    // x_A1, p_A1, x_B2, ...
    if (item.size() < 4 || (item[0] != 'x' && item[0] != 'p') || item[1] != '_' ||
        (item[2] != 'A' && item[2] != 'B')) {
      throw Error(ErrorCode::BadPlane, "unknown coordinate '" + item + "'");
    }
    char* end = nullptr;
    const long mode = std::strtol(item.c_str() + 3, &end, 10);
    const int n = item[2] == 'A' ? split.n_a() : split.n_b();
    if (*end != '\0' || mode < 1 || mode > n) {
      throw Error(ErrorCode::BadPlane, "mode index out of range in '" + item + "'");
    }
    const int offset = item[2] == 'A' ? 0 : split.dim_a();
    coords.push_back(offset + static_cast<int>(mode - 1) + (item[0] == 'p' ? n : 0));
  }
  if (coords.size() != 2) throw Error(ErrorCode::BadPlane, "a plane needs exactly two coordinates");
  if (coords[0] == coords[1]) throw Error(ErrorCode::BadPlane, "plane coordinates must differ");
  return coords;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto sep = path.find_last_of('/');
  if (dot == std::string::npos || (sep != std::string::npos && dot < sep)) return path + suffix;
  return path.substr(0, dot) + suffix;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Separable: return kOk;
    case Verdict::NotSeparable: return kNotSeparable;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int error_exit(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidState:
    case ErrorCode::NotPositiveDefinite:
      return kInvalidState;
    case ErrorCode::NotApplicable:
      return kNotApplicable;
    default:
      return kParseError;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

std::string summary_line(const SeparabilityReport& r) {
  std::string s = std::string(to_string(r.criterion)) + ": " + std::string(to_string(r.verdict));
  if (!r.spectrum_a.empty()) s += " A=" + fmt_list(r.spectrum_a);
  if (!r.spectrum_b.empty()) s += " B=" + fmt_list(r.spectrum_b);
  if (r.witness) s += " (" + r.witness->kind + " " + fmt(r.witness->value) + ")";
  return s;
}

json base_doc(const std::string& command, const Loaded& l) {
  json j = {{"command", command},
            {"schema_version", "1"},
            {"input_hash", l.doc.hash},
            {"split", io::to_json(l.doc.split)},
            {"valid_state", l.valid_state()}};
  if (l.qc) j["quantum_condition"] = io::to_json(*l.qc);
  if (!l.problem.empty()) j["problem"] = l.problem;
  return j;
}

class Emitter {
 public:
  Emitter(const Options& opt, std::ostream& out)
      : opt_(opt), out_(out), start_(std::chrono::steady_clock::now()) {}

  void emit(json doc, const std::vector<std::string>& summary) {
    if (opt_.timing) {
      const auto dt = std::chrono::steady_clock::now() - start_;
      doc["timing_ms"] = std::chrono::duration<double, std::milli>(dt).count();
    }
    if (opt_.format == "summary") {
      for (const auto& line : summary) out_ << line << "\n";
      if (opt_.timing) out_ << "timing_ms: " << fmt(doc["timing_ms"].get<double>()) << "\n";
    } else {
      out_ << doc.dump(2) << "\n";
    }
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
};

int cmd_check(const Options& opt, const Tolerances& tol, std::ostream& out) {
  Emitter em(opt, out);
  const Loaded l = load(opt, tol);
  json doc = base_doc("check", l);
  std::vector<std::string> lines;
  if (!l.valid_state()) {
    lines.push_back("state: invalid (" + l.problem + ")");
    if (l.qc) lines.push_back("symplectic spectrum of M: " + fmt_list(l.qc->symplectic_spectrum_of_m));
    em.emit(doc, lines);
    return kInvalidState;
  }
  const GaussianState state(*l.sigma, l.doc.mean);
  doc["purity"] = purity(state);
  doc["pure"] = is_pure(state, 1e-10);
  doc["reduced_purity"] = {{"A", reduced_purity(state, Subsystem::A)},
                           {"B", reduced_purity(state, Subsystem::B)}};
  lines.push_back("quantum condition: holds");
  lines.push_back("symplectic spectrum of M: " + fmt_list(l.qc->symplectic_spectrum_of_m));
  lines.push_back("purity: " + fmt(doc["purity"].get<double>()) +
                  (doc["pure"].get<bool>() ? " (pure)" : " (mixed)"));
  em.emit(doc, lines);
  return kOk;
}

std::vector<int> parse_criteria(const std::string& text) {
  if (text == "all") return {1, 2, 3, 4};
  std::vector<int> out;
  for (double v : parse_list(text, "--criteria")) {
    const int c = static_cast<int>(v);
    if (c != v || c < 1 || c > 4) throw Error(ErrorCode::ParseError, "--criteria: expected 1..4");
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

EpsilonStrategy parse_strategy(const std::string& s) {
  if (s == "uniform") return EpsilonStrategy::UniformScalar;
  if (s == "coordinate") return EpsilonStrategy::CoordinateDescent;
  if (s == "nelder-mead") return EpsilonStrategy::NelderMeadLike;
  throw Error(ErrorCode::ParseError, "--strategy: expected uniform, coordinate or nelder-mead");
}

int cmd_analyze(const Options& opt, const Tolerances& tol, std::ostream& out) {
  Emitter em(opt, out);
  const auto criteria = parse_criteria(opt.criteria);
  const auto strategy = parse_strategy(opt.strategy);
  const Loaded l = load(opt, tol);
  json doc = base_doc("analyze", l);
  std::vector<std::string> lines;
  if (!l.m) {
    lines.push_back("state: invalid (" + l.problem + ")");
    em.emit(doc, lines);
    return kInvalidState;
  }
  const NormalizedMatrix& m = *l.m;
  json reports = json::array();
  Verdict overall = Verdict::Inconclusive;
  std::string decided_by;
  auto record = [&](const SeparabilityReport& r) {
    reports.push_back(io::to_json(r));
    lines.push_back(summary_line(r));
    if (r.verdict != Verdict::Inconclusive && decided_by.empty()) {
      overall = r.verdict;
      decided_by = to_string(r.criterion);
    }
  };

  if (l.valid_state()) record(ppt_test(*l.sigma, tol));
  for (int c : criteria) {
    if (!decided_by.empty()) break;
    switch (c) {
      case 1: record(criterion1(m, tol)); break;
      case 2: record(criterion2(m, tol)); break;
      case 3:
        if (opt.epsilon == "search") {
          EpsilonSearchConfig config;
          config.strategy = strategy;
          config.tol = tol;
          const auto found = search_epsilon(m, config);
          doc["epsilon_search"] = {{"found", found.found},
                                   {"epsilon", io::to_json(found.epsilon)},
                                   {"objective", found.objective},
                                   {"evaluations", found.evaluations}};
          record(found.report);
        } else {
          record(criterion3(m, to_vector(parse_list(opt.epsilon, "--epsilon")), tol));
        }
        break;
      case 4:
        if (opt.ab == "scan") {
          record(criterion4_auto(m, tol));
        } else {
          const auto [a, b] = parse_ab(opt.ab);
          record(criterion4(m, a, b, tol));
        }
        break;
    }
  }
  doc["reports"] = std::move(reports);
  doc["overall"] = std::string(to_string(overall));
  doc["decided_by"] = decided_by.empty() ? json(nullptr) : json(decided_by);
  if (!l.valid_state()) {
    lines.push_back("state: invalid (" + l.problem + ")");
    em.emit(doc, lines);
    return kInvalidState;
  }
  lines.push_back("overall: " + std::string(to_string(overall)) +
                  (decided_by.empty() ? "" : " via " + decided_by));
  em.emit(doc, lines);
  return verdict_exit(overall);
}

std::array<int, 2> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw Error(ErrorCode::ParseError, "--grid: expected RxC");
  char* e1 = nullptr;
  char* e2 = nullptr;
  const std::string r = text.substr(0, x), c = text.substr(x + 1);
  const long rows = std::strtol(r.c_str(), &e1, 10);
  const long cols = std::strtol(c.c_str(), &e2, 10);
  if (r.empty() || c.empty() || *e1 != '\0' || *e2 != '\0' || rows < 2 || cols < 2) {
    throw Error(ErrorCode::ParseError, "--grid: expected RxC with R, C >= 2");
  }
  return {static_cast<int>(rows), static_cast<int>(cols)};
}

int cmd_region(const Options& opt, const Tolerances& tol, std::ostream& out) {
  Emitter em(opt, out);
  const auto resolution = parse_grid(opt.grid);
  const Loaded l = load(opt, tol);
  if (!l.m) throw Error(ErrorCode::InvalidState, l.problem);
  const auto region = region_scan(*l.m, opt.j, resolution, opt.threads, tol);
  const std::string grid_path = opt.out_path.empty() ? "region.csv" : opt.out_path;
  const std::string boundary_path = with_suffix(grid_path, "_boundary.csv");
  io::write_file(grid_path, region_grid_csv(region));
  io::write_file(boundary_path, boundary_csv(boundary_curves(region, region.resolution_a)));
  const auto lemma = lemma_quadratic(region.lambda_a, region.lambda_b, region.d, region.d_p);

  json doc = base_doc("region", l);
  doc["j"] = region.j;
  doc["lambda_A"] = region.lambda_a;
  doc["lambda_B"] = region.lambda_b;
  doc["d"] = {region.d, region.d_p};
  doc["a_range"] = region.a_range;
  doc["b_range"] = region.b_range;
  doc["resolution"] = {region.resolution_a, region.resolution_b};
  doc["feasible_points"] = region.points.size();
  doc["boundary_error_cells"] = raster_boundary_error_cells(region);
  doc["lemma"] = {{"alpha", lemma.alpha},
                  {"beta", lemma.beta},
                  {"gamma", lemma.gamma},
                  {"feasible", lemma.feasible},
                  {"a0", lemma.a0 ? json(*lemma.a0) : json(nullptr)}};
  doc["files"] = {{"grid", grid_path}, {"boundary", boundary_path}};
  em.emit(doc, {"feasible points: " + std::to_string(region.points.size()),
                "grid: " + grid_path, "boundary: " + boundary_path});
  return kOk;
}

int cmd_project(const Options& opt, const Tolerances& tol, std::ostream& out) {
  Emitter em(opt, out);
  const Loaded l = load(opt, tol);
  if (!l.sigma) throw Error(ErrorCode::InvalidState, l.problem);
  const auto& split = l.doc.split;
  const auto coords = parse_plane(opt.plane, split);
  if (coords.size() != 2) {
    throw Error(ErrorCode::BadPlane, "subsystem plane is not two-dimensional");
  }
  const double hbar = split.hbar();
  Matrix outer = l.m->matrix();
  std::optional<Matrix> inner;
  if (!opt.blob.empty()) {
    const auto setup = criterion4_applicable(*l.m, tol);
    if (!setup.applicable) throw Error(ErrorCode::NotApplicable, setup.detail);
    const auto [a_in, b_in] = parse_ab(opt.blob);
    Vector a = setup.lambda_a, b = setup.lambda_b;
    if (a_in.size() > a.size() || b_in.size() > b.size()) {
      throw Error(ErrorCode::ParseError, "--blob: too many entries");
    }
    a.head(a_in.size()) = a_in;
    b.head(b_in.size()) = b_in;
    Vector diag(split.dim());
    for (int i = 0; i < split.n_a(); ++i) {
      diag(i) = a(i);
      diag(split.n_a() + i) = 1.0 / a(i);
    }
    for (int j = 0; j < split.n_b(); ++j) {
      diag(split.dim_a() + j) = b(j);
      diag(split.dim_a() + split.n_b() + j) = 1.0 / b(j);
    }
    outer = setup.m_d;
    inner = Matrix(diag.asDiagonal());
  }
  const Ellipsoid outer2 = project_onto_coordinates(Ellipsoid(outer, hbar), coords);
  std::string csv = "curve,x,y\n";
  for (const auto& p : ellipse_polyline(outer2.q, outer2.level, 360)) {
    csv += "outer," + fmt(p[0]) + "," + fmt(p[1]) + "\n";
  }
  json doc = base_doc("project", l);
  doc["plane"] = opt.plane;
  doc["coordinates"] = coords;
  doc["frame"] = inner ? "normal_form" : "input";
  doc["outer"] = {{"q", io::to_json(outer2.q)}, {"level", outer2.level}};
  std::vector<std::string> lines{"outer form: " + fmt_list({outer2.q(0, 0), outer2.q(0, 1),
                                                           outer2.q(1, 1)})};
  if (inner) {
    const Ellipsoid inner2 = project_onto_coordinates(Ellipsoid(*inner, hbar), coords);
    for (const auto& p : ellipse_polyline(inner2.q, inner2.level, 360)) {
      csv += "inner," + fmt(p[0]) + "," + fmt(p[1]) + "\n";
    }
    const bool contained = ellipsoid_contains(outer2, inner2, tol.psd);
    doc["inner"] = {{"q", io::to_json(inner2.q)}, {"level", inner2.level}};
    doc["inner_contained"] = contained;
    doc["full_contained"] = ellipsoid_contains(Ellipsoid(outer, hbar), Ellipsoid(*inner, hbar), tol.psd);
    lines.push_back(std::string("inner contained: ") + (contained ? "yes" : "no"));
  }
  const std::string path = opt.out_path.empty() ? "projection.csv" : opt.out_path;
  const std::string params = with_suffix(path, "_params.json");
  doc["files"] = {{"polyline", path}, {"params", params}};
  io::write_file(path, csv);
  io::write_file(params, doc.dump(2) + "\n");
  em.emit(doc, lines);
  return kOk;
}

int cmd_reduce(const Options& opt, const Tolerances& tol, std::ostream& out) {
  Emitter em(opt, out);
  const Loaded l = load(opt, tol);
  if (!l.valid_state()) throw Error(ErrorCode::InvalidState, l.problem);
  if (opt.subsystem != "A" && opt.subsystem != "B") {
    throw Error(ErrorCode::ParseError, "--subsystem: expected A or B");
  }
  const Subsystem keep = opt.subsystem == "A" ? Subsystem::A : Subsystem::B;
  const GaussianState state(*l.sigma, l.doc.mean);
  const ReducedState r = reduce(state, keep);
  json doc = base_doc("reduce", l);
  doc["subsystem"] = opt.subsystem;
  doc["modes"] = r.modes;
  doc["sigma"] = io::to_json(r.sigma);
  doc["normalized"] = io::to_json(r.normalized);
  doc["mean"] = io::to_json(r.mean);
  doc["reduced_quantum_condition"] = io::to_json(r.quantum_condition);
  doc["purity"] = reduced_purity(state, keep);
  em.emit(doc, {"subsystem " + opt.subsystem + ": purity " + fmt(doc["purity"].get<double>()),
                "symplectic spectrum: " + fmt_list(r.quantum_condition.symplectic_spectrum_of_m)});
  return kOk;
}

int cmd_ppt(const Options& opt, const Tolerances& tol, std::ostream& out) {
  Emitter em(opt, out);
  const Loaded l = load(opt, tol);
  if (!l.valid_state()) throw Error(ErrorCode::InvalidState, l.problem);
  const auto r = ppt_test(*l.sigma, tol);
  json doc = base_doc("ppt", l);
  doc["report"] = io::to_json(r);
  em.emit(doc, {summary_line(r)});
  return verdict_exit(r.verdict);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Separability analysis for bipartite Gaussian states", "gsep"};
  app.require_subcommand(1);
  app.add_option("--hbar", opt.hbar, "Override hbar from the input file")->check(CLI::PositiveNumber);
  app.add_option("--tol", opt.tol, "Spectral and PSD tolerance (default 1e-10)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "summary"}));
  app.add_flag("--timing", opt.timing, "Include wall-clock timing in the output");

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", opt.input, "Input JSON document")->required();
    sub->fallthrough();
  };
  auto* check = app.add_subcommand("check", "Quantum condition, spectrum and purity");
  add_input(check);
  auto* analyze = app.add_subcommand("analyze", "PPT test and sufficient criteria");
  add_input(analyze);
  analyze->add_option("--criteria", opt.criteria, "Comma list of 1..4, or all");
  analyze->add_option("--epsilon", opt.epsilon, "Comma list of epsilon values, or search");
  analyze->add_option("--strategy", opt.strategy, "uniform, coordinate or nelder-mead");
  analyze->add_option("--ab", opt.ab, "'a,b', 'a1,../b1,..' or scan");
  auto* region = app.add_subcommand("region", "Rasterise the (a, b) feasibility region");
  add_input(region);
  region->add_option("--j", opt.j, "Coupled pair index (1-based)");
  region->add_option("--grid", opt.grid, "Resolution RxC");
  region->add_option("--out", opt.out_path, "Grid CSV path");
  region->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* project = app.add_subcommand("project", "Planar shadow of the covariance ellipsoid");
  add_input(project);
  project->add_option("--plane", opt.plane, "x_A1,p_B1 style pair, or A or B")->required();
  project->add_option("--out", opt.out_path, "Polyline CSV path");
  project->add_option("--blob", opt.blob, "Normal-form blob parameters 'a,b'");
  auto* reduce_cmd = app.add_subcommand("reduce", "Marginal state of one subsystem");
  add_input(reduce_cmd);
  reduce_cmd->add_option("--subsystem", opt.subsystem, "A or B");
  auto* ppt = app.add_subcommand("ppt", "Partial-transpose test only");
  add_input(ppt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  Tolerances tol;
  if (opt.tol) {
    tol.spectral = *opt.tol;
    tol.psd = *opt.tol;
  }
  try {
    if (check->parsed()) return cmd_check(opt, tol, out);
    if (analyze->parsed()) return cmd_analyze(opt, tol, out);
    if (region->parsed()) return cmd_region(opt, tol, out);
    if (project->parsed()) return cmd_project(opt, tol, out);
    if (reduce_cmd->parsed()) return cmd_reduce(opt, tol, out);
    if (ppt->parsed()) return cmd_ppt(opt, tol, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return error_exit(e.code());
  }
  return kParseError;
}

}  // namespace gsep::cli
