#pragma once

#include "regerr/fusion.hpp"
#include "regerr/pairwise_stats.hpp"
#include "regerr/recovery.hpp"
#include "regerr/synth.hpp"

#include <json.hpp>

namespace regerr {

using Json = nlohmann::ordered_json;

/// Version stamped into every top-level report document.
inline constexpr int kSchemaVersion = 1;

/// Top-level document {"schema_version": 1, "kind": kind}.
Json make_document(std::string_view kind);

/// Checks schema_version; throws ParseError on mismatch.
void check_document(const Json& doc);

void to_json(Json& j, const PairwiseStats& stats);
void from_json(const Json& j, PairwiseStats& stats);

void to_json(Json& j, const SolverInfo& info);
void from_json(const Json& j, SolverInfo& info);

void to_json(Json& j, const RecoveryReport& report);
void from_json(const Json& j, RecoveryReport& report);

void to_json(Json& j, const NoiseSpec& spec);
void from_json(const Json& j, NoiseSpec& spec);

void to_json(Json& j, const Score& score);
void to_json(Json& j, const FusionEvaluation& eval);

/// Human-readable pair labels "(r1,r2)" in canonical order, using names when given.
std::vector<std::string> pair_labels(int regressors, PairMode mode,
                                     const std::vector<std::string>& names = {});

}  // namespace regerr
