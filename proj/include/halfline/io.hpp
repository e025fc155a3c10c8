#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "halfline/inequalities.hpp"

namespace halfline {

using Json = nlohmann::ordered_json;

Json to_json(const BoundaryCondition& bc);
Json to_json(const Grid& grid);
/// {"bc", "eigenvalues", "phi0", "dphi0", "grid", ...} with refinement metadata.
Json to_json(const NegativeSpectrum& spectrum);
Json to_json(const LTReport& report);
Json to_json(const TelescopeReport& report);
Json to_json(const DominanceCertificate& certificate);
Json to_json(const RiccatiDiagnostics& diagnostics);
Json to_json(const AntiderivativeCheck& check);
/// Ordered array of step records plus the order and sigma sequence.
Json to_json(const CommutationChain& chain);

/// Pretty-printed JSON with a trailing newline; number formatting is the
/// shortest round-trip form, so equal inputs give byte-identical files.
std::string dump(const Json& json);
void write_json(const std::filesystem::path& path, const Json& json);

}  // namespace halfline
