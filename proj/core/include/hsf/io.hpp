#pragma once

// JSON forms of the library's value types. Group points use
// {"u": [...], "v": [...], "w": number}; the interleaved form {"x": [...]}
// of odd length is accepted on input.

#include <nlohmann/json.hpp>
#include <string>

#include "hsf/analysis.hpp"
#include "hsf/embeddings.hpp"
#include "hsf/heisenberg.hpp"
#include "hsf/integrate.hpp"
#include "hsf/lattice.hpp"
#include "hsf/monte_carlo.hpp"

namespace hsf {

void to_json(nlohmann::json& j, const GroupPoint& x);
void from_json(const nlohmann::json& j, GroupPoint& x);

void to_json(nlohmann::json& j, const EmbeddingParams& params);
void to_json(nlohmann::json& j, const LatticeElement& g);
void to_json(nlohmann::json& j, const QuadratureResult& r);
void to_json(nlohmann::json& j, const MCEstimate& e);
void to_json(nlohmann::json& j, const WitnessPair& w);
void to_json(nlohmann::json& j, const DistortionReport& r);
void to_json(nlohmann::json& j, const DoublingTrial& t);
void to_json(nlohmann::json& j, const DoublingReport& r);
void to_json(nlohmann::json& j, const MeasureRatioReport& r);
void to_json(nlohmann::json& j, const SweepRow& r);
void to_json(nlohmann::json& j, const SweepReport& r);
void to_json(nlohmann::json& j, const LnInequalityReport& r);
void to_json(nlohmann::json& j, const GrowthFit& f);

/// One JSON line {"x":..,"y":..,"z":..,"d":..} for a ball or X_n element.
std::string lattice_line(const LatticeElement& g, int distance);

/// Parses "a,b,c" (H_1) or "u1,..,un,v1,..,vn,w" (odd count) into a point.
/// Throws DomainError on malformed input.
GroupPoint parse_point(const std::string& text);

/// Shortest decimal that round-trips, as used in every CSV cell.
std::string format_double(double value);

/// CSV rows for a sweep: epsilon,sup_ratio,inf_ratio,spread,max_abs_error.
std::string sweep_csv(const SweepReport& report);

}  // namespace hsf
