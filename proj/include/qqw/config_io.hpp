#pragma once

#include <json.hpp>

#include "qqw/bimodfunctors.hpp"
#include "qqw/fixtures.hpp"

namespace qqw {

using nlohmann::json;

/// Reads {"field": {"kind": "rational"} | {"kind": "prime", "p": int},
/// "q": string-or-int} from the document root.
/// errors: ConfigError with the offending path
QContext parse_context(const json& root);

Quiver parse_quiver(const json& j, const std::string& path);

Matrix parse_matrix(const json& j, std::size_t rows, std::size_t cols, const QContext& ctx,
                    const std::string& path);
json matrix_to_json(const Matrix& m);

/// Action-data config: {"gamma": {vertex: scalar}, "g_perm": [ids],
/// "g_on_arrows": matrix, "sigma": matrix} with the sl2 variants using
/// "gammaE"/"gammaF"/"sigmaE"/"sigmaF" and "g_perm"/"g_on_arrows" for K.
std::pair<UqbVertexData, UqbArrowData> parse_uqb_action(const json& j, const Quiver& q,
                                                        const QContext& ctx,
                                                        const std::string& path);
UqslActionData parse_uqsl_action(const json& j, const Quiver& q, const QContext& ctx,
                                 const std::string& path);

/// GammaRep file format: {"mode": "borel"|"sl2", "vertices":
/// [{"coset","s","k","dim"}], "A": [...], "B": [...], "C": [...]} with
/// matrices as row-major scalar-string arrays (rows inferred from the entry
/// count; a 0-row matrix is an empty array).
GammaRep parse_gamma_rep(const json& j, const QContext& ctx, const std::string& path);
json gamma_rep_to_json(const GammaRep& w);

/// Bimodule format mirrors the action-data config plus {"m","mprime"}:
/// {"m", "mprime", "block_dims": [[...]], "gamma": {vertex: scalar} over the
/// m + m' joint vertices, "g_on_arrows", "sigma"}; the sl2 variant carries
/// "gammaE"/"gammaF"/"sigmaE"/"sigmaF".
BimoduleInC parse_bimodule(const json& j, const QContext& ctx, const std::string& path);
json bimodule_to_json(const BimoduleInC& v, const QContext& ctx);

struct CommandResult {
  int exit_code = 0;  // 0 pass, 1 semantic failure, 2 malformed config / bad call
  json report;
};

/// Executes one CLI command against a parsed config document.
CommandResult run_command(const std::string& command, const json& config, unsigned threads = 1);

/// Writes the shipped fixture corpus (deterministic in the seed).
std::vector<std::string> write_fixture_corpus(const std::string& dir, std::uint64_t seed);

}  // namespace qqw
