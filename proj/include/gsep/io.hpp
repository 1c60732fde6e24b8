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

// JSON input documents and JSON/CSV serialisation of results.

#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "gsep/geometry.hpp"
#include "gsep/separability.hpp"

namespace gsep::io {

using nlohmann::json;

enum class MatrixKind { Sigma, M };

struct InputDocument {
  std::string schema_version = "1";
  BipartiteSplit split{1, 1};
  MatrixKind kind = MatrixKind::Sigma;
  Layout layout = Layout::ABBlock;
  Matrix matrix;  ///< ABBlock order, exactly symmetric
  std::optional<Vector> mean;
  std::string hash;  ///< FNV-1a of the canonical JSON text
};

/// Matrix entries may be numbers or strings such as "2/3" or "0.125".
/// Throws ParseError naming the offending field.
InputDocument parse_input(const std::string& text, std::optional<double> hbar_override = {});
InputDocument load_input(const std::string& path, std::optional<double> hbar_override = {});

/// A decimal or a fraction "p/q". Throws ParseError naming `field`.
double parse_number(const std::string& text, const std::string& field);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

json to_json(const Matrix& m);
json to_json(const Vector& v);
json to_json(const std::vector<double>& v);
Matrix matrix_from_json(const json& j, const std::string& field);

json to_json(const QuantumCondition& qc);
json to_json(const Witness& w);
json to_json(const SeparabilityCertificate& cert);
json to_json(const SeparabilityReport& report);
json to_json(const BipartiteSplit& split);

SeparabilityCertificate certificate_from_json(const json& j);

}  // namespace gsep::io
