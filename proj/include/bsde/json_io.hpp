#pragma once

// JSON encodings used by the command-line tool.
//
//   point: { "kind": "I"|"III"|"Siegel", "p": rows, "q": cols, "re": [[...]], "im": [[...]] }
//   spec:  { "source_dim": N, "target_g": g,
//            "factors": [{ "kind": "standard_I"|"standard_III"|"connecting_lambda"|"lambda_III", "m": int }] }
//
// Decoding failures throw Error(ErrorKind::Schema) naming the offending field.

#include <json.hpp>

#include <string>

#include "bsde/domains.hpp"
#include "bsde/embeddings.hpp"

namespace bsde {

nlohmann::json point_to_json(const DomainPoint& pt);
DomainPoint point_from_json(const nlohmann::json& j);

nlohmann::json ball_to_json(const BallPoint& z);
/// A TypeI point with a single column (or a single row) read as a ball point.
BallPoint ball_from_json(const nlohmann::json& j);

nlohmann::json spec_to_json(const EmbeddingSpec& spec);
EmbeddingSpec spec_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace bsde
