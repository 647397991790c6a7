#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sospack/packing.h"
#include "sospack/polynomial.h"
#include "sospack/shape.h"
#include "sospack/sos.h"

namespace sospack {

using Json = nlohmann::ordered_json;

/// {"dim": n, "terms": [{"exp": [...], "coef": c}, ...]} in graded-lex order.
Json PolynomialToJson(const Polynomial& p);
Polynomial PolynomialFromJson(const Json& j);

/// {"linear": [[...]], "offset": [...], "rigid": bool}
Json TransformToJson(const AffineTransform& t);
AffineTransform TransformFromJson(const Json& j);

Json BoxToJson(const Box& b);
Box BoxFromJson(const Json& j);

Json CertificateToJson(const Certificate& c);
/// Multipliers and scalar fields only; Gram matrices are not serialized.
Certificate CertificateFromJson(const Json& j);

Json SceneToJson(const Scene& s);
Scene SceneFromJson(const Json& j);

Json WitnessToJson(const std::optional<Witness>& w);
Json ReportToJson(const PackingReport& r);
Json OracleReportToJson(const std::vector<OracleResult>& results);

/// Polynomial fields plus "radius", "config" and "certificate".
Json ShapeToJson(const ShapeModel& m);
ShapeModel ShapeFromJson(const Json& j);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);
/// Parses a file; errors name the path.
Json ReadJsonFile(const std::string& path);
/// Two-space indentation and a trailing newline.
std::string DumpJson(const Json& j);

/// Lowercase hex SHA-256 of a byte string.
std::string Sha256Hex(const std::string& bytes);

/// Run record written next to CLI outputs.
struct Manifest {
  std::string command;
  Json config = Json::object();
  std::vector<std::string> inputs;  // paths; digests are computed on write
  std::optional<std::uint64_t> seed;
  Json timings = Json::object();
};
Json ManifestToJson(const Manifest& m);

}  // namespace sospack
