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

#include "gsep/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gsep::io {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

double parse_scalar_text(const std::string& text, const std::string& field) {
  auto one = [&](const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || !end || *end != '\0') {
      parse_fail(field + ": cannot parse number '" + text + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  const double den = one(text.substr(slash + 1));
  if (den == 0.0) parse_fail(field + ": zero denominator in '" + text + "'");
  return one(text.substr(0, slash)) / den;
}

double parse_scalar(const json& j, const std::string& field) {
  double v = 0.0;
  if (j.is_number()) {
    v = j.get<double>();
  } else if (j.is_string()) {
    v = parse_scalar_text(j.get<std::string>(), field);
  } else {
    parse_fail(field + ": expected a number or a numeric string");
  }
  if (!std::isfinite(v)) parse_fail(field + ": value is not finite");
  return v;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int parse_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) parse_fail(field + ": expected an integer");
  return j.get<int>();
}

}  // namespace

double parse_number(const std::string& text, const std::string& field) {
  const double v = parse_scalar_text(text, field);
  if (!std::isfinite(v)) parse_fail(field + ": value is not finite");
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) parse_fail(field + ": expected a non-empty array");
  if (j.front().is_array()) {
    const auto rows = j.size();
    const auto cols = j.front().size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!j[r].is_array() || j[r].size() != cols) {
        parse_fail(field + "[" + std::to_string(r) + "]: ragged row");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        m(r, c) = parse_scalar(j[r][c], field + "[" + std::to_string(r) + "][" +
                                            std::to_string(c) + "]");
      }
    }
    return m;
  }
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(j.size()))));
  if (n * n != j.size()) parse_fail(field + ": flat matrix length is not a perfect square");
  Matrix m(n, n);
  for (std::size_t i = 0; i < j.size(); ++i) {
    m(i / n, i % n) = parse_scalar(j[i], field + "[" + std::to_string(i) + "]");
  }
  return m;
}

InputDocument parse_input(const std::string& text, std::optional<double> hbar_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("top level must be an object");

  InputDocument out;
  out.hash = fnv1a_hex(doc.dump());
  if (doc.contains("schema_version")) {
    const auto& v = doc["schema_version"];
    out.schema_version = v.is_string() ? v.get<std::string>() : v.dump();
    if (out.schema_version != "1") parse_fail("schema_version: unsupported '" + out.schema_version + "'");
  }
  if (!doc.contains("split") || !doc["split"].is_object()) parse_fail("split: missing object");
  const auto& sp = doc["split"];
  if (!sp.contains("n_A")) parse_fail("split.n_A: missing");
  if (!sp.contains("n_B")) parse_fail("split.n_B: missing");
  const int na = parse_int(sp["n_A"], "split.n_A");
  const int nb = parse_int(sp["n_B"], "split.n_B");
  double hbar = sp.contains("hbar") ? parse_scalar(sp["hbar"], "split.hbar") : 1.0;
  if (hbar_override) hbar = *hbar_override;
  try {
    out.split = BipartiteSplit(na, nb, hbar);
  } catch (const Error& e) {
    parse_fail(std::string("split: ") + e.what());
  }

  const std::string kind = doc.value("matrix_kind", std::string("sigma"));
  if (kind == "sigma") {
    out.kind = MatrixKind::Sigma;
  } else if (kind == "M") {
    out.kind = MatrixKind::M;
  } else {
    parse_fail("matrix_kind: expected \"sigma\" or \"M\", got \"" + kind + "\"");
  }
  const std::string layout = doc.value("layout", std::string("ab_block"));
  if (layout == "ab_block") {
    out.layout = Layout::ABBlock;
  } else if (layout == "global") {
    out.layout = Layout::Global;
  } else {
    parse_fail("layout: expected \"ab_block\" or \"global\", got \"" + layout + "\"");
  }

  if (!doc.contains("matrix")) parse_fail("matrix: missing");
  Matrix m = matrix_from_json(doc["matrix"], "matrix");
  const int dim = out.split.dim();
  if (m.rows() != dim || m.cols() != dim) {
    parse_fail("matrix: expected " + std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
               std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    parse_fail("matrix: not symmetric (max |m - m^T| = " + std::to_string(asym) + ")");
  }
  m = (0.5 * (m + m.transpose())).eval();

  if (doc.contains("mean") && !doc["mean"].is_null()) {
    const auto& mj = doc["mean"];
    if (!mj.is_array() || static_cast<int>(mj.size()) != dim) {
      parse_fail("mean: expected an array of " + std::to_string(dim) + " numbers");
    }
    Vector mean(dim);
    for (int i = 0; i < dim; ++i) mean(i) = parse_scalar(mj[i], "mean[" + std::to_string(i) + "]");
    out.mean = out.layout == Layout::Global ? global_to_ab(mean, out.split) : mean;
  }
  out.matrix = out.layout == Layout::Global ? global_to_ab(m, out.split) : m;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path);
}

InputDocument load_input(const std::string& path, std::optional<double> hbar_override) {
  return parse_input(read_file(path), hbar_override);
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const std::vector<double>& v) { return json(v); }

json to_json(const BipartiteSplit& split) {
  return {{"n_A", split.n_a()}, {"n_B", split.n_b()}, {"hbar", split.hbar()}};
}

json to_json(const QuantumCondition& qc) {
  return {{"holds", qc.holds},
          {"symplectic_spectrum_of_M", qc.symplectic_spectrum_of_m},
          {"margin", qc.margin},
          {"hermitian_psd", qc.hermitian_psd}};
}

json to_json(const Witness& w) {
  return {{"kind", w.kind}, {"detail", w.detail}, {"value", w.value}, {"threshold", w.threshold}};
}

json to_json(const SeparabilityCertificate& cert) {
  json j = {{"provenance", std::string(to_string(cert.provenance))},
            {"sigma_A", to_json(cert.sigma_a)},
            {"sigma_B", to_json(cert.sigma_b)}};
  if (cert.epsilon) j["epsilon"] = to_json(*cert.epsilon);
  if (cert.ab_params) {
    j["a"] = to_json(cert.ab_params->first);
    j["b"] = to_json(cert.ab_params->second);
  }
  return j;
}

json to_json(const SeparabilityReport& r) {
  json j = {{"criterion", std::string(to_string(r.criterion))},
            {"verdict", std::string(to_string(r.verdict))}};
  if (!r.spectrum_a.empty()) j["spectrum_A"] = r.spectrum_a;
  if (!r.spectrum_b.empty()) j["spectrum_B"] = r.spectrum_b;
  if (!r.spectrum.empty()) j["spectrum"] = r.spectrum;
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
  return j;
}

SeparabilityCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) parse_fail("certificate: expected an object");
  SeparabilityCertificate cert;
  if (!j.contains("sigma_A") || !j.contains("sigma_B")) parse_fail("certificate: missing blocks");
  cert.sigma_a = matrix_from_json(j["sigma_A"], "certificate.sigma_A");
  cert.sigma_b = matrix_from_json(j["sigma_B"], "certificate.sigma_B");
  const std::string prov = j.value("provenance", std::string("UserSupplied"));
  for (auto p : {Provenance::Criterion1, Provenance::Criterion2, Provenance::Criterion3,
                 Provenance::Criterion4, Provenance::UserSupplied}) {
    if (prov == to_string(p)) cert.provenance = p;
  }
  auto vec = [&](const char* key) {
    Vector v(j[key].size());
    for (std::size_t i = 0; i < j[key].size(); ++i) v(i) = parse_scalar(j[key][i], key);
    return v;
  };
  if (j.contains("epsilon")) cert.epsilon = vec("epsilon");
  if (j.contains("a") && j.contains("b")) cert.ab_params = std::make_pair(vec("a"), vec("b"));
  return cert;
}

}  // namespace gsep::io
