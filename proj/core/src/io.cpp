#include "hsf/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "hsf/errors.hpp"

namespace hsf {
namespace {

// JSON has no infinity; unbounded values are written as null.
nlohmann::json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace

void to_json(nlohmann::json& j, const GroupPoint& x) {
  j = nlohmann::json{{"u", std::vector<double>(x.u().begin(), x.u().end())},
                     {"v", std::vector<double>(x.v().begin(), x.v().end())},
                     {"w", x.w()}};
}

void from_json(const nlohmann::json& j, GroupPoint& x) {
  try {
    if (j.contains("x")) {
      const auto coords = j.at("x").get<std::vector<double>>();
      x = from_interleaved(coords);
      return;
    }
    x = GroupPoint(j.at("u").get<std::vector<double>>(),
                   j.at("v").get<std::vector<double>>(), j.at("w").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("group point JSON: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const EmbeddingParams& params) {
  j = nlohmann::json{{"p", params.p},
                     {"epsilon", params.epsilon},
                     {"n", params.n},
                     {"alpha", params.alpha},
                     {"in_theorem_range", params.in_theorem_range()}};
}

void to_json(nlohmann::json& j, const LatticeElement& g) {
  j = nlohmann::json{{"x", g.x}, {"y", g.y}, {"z", g.z}};
}

void to_json(nlohmann::json& j, const QuadratureResult& r) {
  j = nlohmann::json{{"value", r.value},
                     {"abs_error", r.abs_error},
                     {"evaluations", r.evaluations},
                     {"degenerate", r.degenerate}};
}

void to_json(nlohmann::json& j, const MCEstimate& e) {
  j = nlohmann::json{{"mean", e.mean},
                     {"std_error", e.std_error},
                     {"samples", e.samples},
                     {"seed", e.seed}};
}

void to_json(nlohmann::json& j, const WitnessPair& w) {
  j = nlohmann::json{{"i", w.i},
                     {"j", w.j},
                     {"metric_a", w.metric_a},
                     {"metric_b", w.metric_b},
                     {"ratio", w.ratio}};
}

void to_json(nlohmann::json& j, const DistortionReport& r) {
  j = nlohmann::json{{"label_a", r.label_a},
                     {"label_b", r.label_b},
                     {"point_count", r.point_count},
                     {"pair_count", r.pair_count},
                     {"excluded_pairs", r.excluded_pairs},
                     {"min_ratio", r.min_ratio},
                     {"max_ratio", r.max_ratio},
                     {"distortion", r.distortion},
                     {"min_witness", r.min_witness},
                     {"max_witness", r.max_witness},
                     {"subsampled", r.subsampled},
                     {"seed", r.seed}};
}

void to_json(nlohmann::json& j, const DoublingTrial& t) {
  j = nlohmann::json{{"center", t.center},
                     {"radius", t.radius},
                     {"ball_size", t.ball_size},
                     {"covering", t.covering},
                     {"packing", t.packing},
                     {"cover_verified", t.cover_verified}};
}

void to_json(nlohmann::json& j, const DoublingReport& r) {
  j = nlohmann::json{{"centers", r.centers},
                     {"radii", r.radii},
                     {"trials", r.trials},
                     {"max_covering", r.max_covering},
                     {"max_packing", r.max_packing},
                     {"bound", number(r.bound)},
                     {"within_bound", r.within_bound},
                     {"resolution", r.resolution},
                     {"unreliable", r.unreliable}};
}

void to_json(nlohmann::json& j, const MeasureRatioReport& r) {
  j = nlohmann::json{{"ratio", r.ratio},
                     {"std_error", r.std_error},
                     {"expected", r.expected},
                     {"radius", r.radius},
                     {"volume_r", r.volume_r},
                     {"volume_2r", r.volume_2r},
                     {"hits_r", r.hits_r},
                     {"hits_2r", r.hits_2r},
                     {"samples", r.samples},
                     {"quadratures", r.quadratures},
                     {"seed", r.seed}};
}

void to_json(nlohmann::json& j, const SweepRow& r) {
  j = nlohmann::json{{"epsilon", r.epsilon},
                     {"sup_ratio", r.sup_ratio},
                     {"inf_ratio", r.inf_ratio},
                     {"spread", r.spread},
                     {"max_abs_error", r.max_abs_error}};
}

void to_json(nlohmann::json& j, const SweepReport& r) {
  j = nlohmann::json{{"p", r.p},
                     {"pairs", r.pairs},
                     {"seed", r.seed},
                     {"rows", r.rows},
                     {"slope", r.slope},
                     {"intercept", r.intercept},
                     {"sup_slope", r.sup_slope},
                     {"sup_intercept", r.sup_intercept}};
}

void to_json(nlohmann::json& j, const LnInequalityReport& r) {
  j = nlohmann::json{{"n", r.n},
                     {"p", r.p},
                     {"epsilon", r.epsilon},
                     {"ball_n", r.ball_n},
                     {"ball_21n", r.ball_21n},
                     {"lhs", r.lhs},
                     {"rhs_proxy", r.rhs_proxy},
                     {"analytic_sum", r.analytic_sum},
                     {"integral_comparison", r.integral_comparison},
                     {"first_term", r.first_term},
                     {"rel_error", r.rel_error}};
}

void to_json(nlohmann::json& j, const GrowthFit& f) {
  j = nlohmann::json{{"exponent", f.exponent},
                     {"residual", f.residual},
                     {"sizes", f.sizes}};
}

std::string lattice_line(const LatticeElement& g, int distance) {
  return nlohmann::json{{"x", g.x}, {"y", g.y}, {"z", g.z}, {"d", distance}}.dump();
}

GroupPoint parse_point(const std::string& text) {
  std::vector<double> coords;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string field = text.substr(pos, comma - pos);
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    if (first == std::string::npos) {
      throw DomainError("point '" + text + "': empty coordinate");
    }
    field = field.substr(first, last - first + 1);
    double value = 0.0;
    const auto [end, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size()) {
      throw DomainError("point '" + text + "': bad number '" + field + "'");
    }
    coords.push_back(value);
    pos = comma + 1;
  }
  if (coords.size() < 3 || coords.size() % 2 == 0) {
    throw DomainError("point '" + text + "': need an odd count >= 3 (u.., v.., w)");
  }
  const std::size_t n = (coords.size() - 1) / 2;
  return GroupPoint(std::vector<double>(coords.begin(), coords.begin() + n),
                    std::vector<double>(coords.begin() + n, coords.end() - 1),
                    coords.back());
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "epsilon,sup_ratio,inf_ratio,spread,max_abs_error\n";
  for (const auto& row : report.rows) {
    out << format_double(row.epsilon) << ',' << format_double(row.sup_ratio) << ','
        << format_double(row.inf_ratio) << ',' << format_double(row.spread) << ','
        << format_double(row.max_abs_error) << '\n';
  }
  return out.str();
}

}  // namespace hsf
