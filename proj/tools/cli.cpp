#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <mutex>
#include <optional>
#include <sstream>

#include "hsf/analysis.hpp"
#include "hsf/embeddings.hpp"
#include "hsf/errors.hpp"
#include "hsf/heisenberg.hpp"
#include "hsf/integrate.hpp"
#include "hsf/io.hpp"
#include "hsf/lattice.hpp"
#include "hsf/monte_carlo.hpp"
#include "hsf/random.hpp"

namespace hsf::cli {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "1";
constexpr std::uint32_t kStreamSchrodinger = 0x6100;

struct Options {
  double p = 2.5;
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  std::int64_t samples = 1'000'000;
  double tol = kDefaultQuadratureTol;
  unsigned workers = 1;
  std::string out;
  std::string format;

  // command specific
  double radius = 1.0;
  std::optional<double> beta;
  int r = 2;
  int r_max = 24;
  std::int64_t count = 100;
  std::string x = "1,0,0";
  std::string y = "0,0,0";
  std::optional<double> ball_k;
  std::string points_file;
  std::int64_t xn = 0;
  std::string metric = "repr";
  std::string base = "koranyi";
  std::size_t max_pairs = 0;
  double h = 0.125;
  std::size_t centers = 8;
  std::vector<double> radii;
  int eps_from = 2;
  int eps_to = 7;
  std::size_t pairs = 256;
  double sweep_radius = 10.0;
  std::int64_t ln_n = 2;
  int draws = 50;
  std::optional<double> lambda;
  double u = 0.0, v = 0.0, w = 0.0;
};

// What a command produced: a JSON result, or a text body (JSONL / CSV) plus
// a JSON summary for the sidecar.
struct Artifact {
  json result;
  std::optional<std::string> text;
};

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

EmbeddingParams make_params(const Options& o, std::ostream& err) {
  const EmbeddingParams params = params_from(o.p, o.epsilon);
  if (!params.in_theorem_range()) {
    err << "warning: epsilon = " << o.epsilon
        << " is outside (0, 1/2], where the distortion statements are made\n";
  }
  return params;
}

json base_config(const std::string& command, const Options& o) {
  // `workers` is deliberately absent: it never changes the output.
  return json{{"command", command}, {"p", o.p},         {"epsilon", o.epsilon},
              {"seed", o.seed},     {"samples", o.samples}, {"tol", o.tol},
              {"output", o.out},    {"format", o.format}};
}

MCConfig mc_config(const Options& o) {
  return MCConfig{o.samples, o.seed, o.workers};
}

// Points for the matrix-style commands: X_n mapped into H_1, or a JSON file.
struct PointSet {
  std::vector<GroupPoint> points;
  std::vector<LatticeElement> lattice;  // filled for X_n
};

PointSet load_points(const Options& o) {
  PointSet set;
  if (o.xn > 0) {
    const XnSet xn = build_xn(static_cast<std::size_t>(o.xn));
    set.lattice = xn.elements;
    for (const auto& g : xn.elements) set.points.push_back(lattice_to_continuous(g));
    return set;
  }
  if (o.points_file.empty()) throw Usage("give --xn N or --points FILE");
  std::ifstream in(o.points_file);
  if (!in) throw Usage("cannot read " + o.points_file);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Usage(o.points_file + ": " + e.what());
  }
  if (!doc.is_array()) throw Usage(o.points_file + ": expected a JSON array of points");
  for (const auto& item : doc) set.points.push_back(item.get<GroupPoint>());
  return set;
}

struct PairValue {
  double value = 0.0;
  double error = 0.0;
};

PairValue pair_distance(const GroupPoint& a, const GroupPoint& b,
                        const EmbeddingParams& params, const Options& o) {
  if (o.metric == "repr") {
    const auto d = repr_distance(a, b, params, o.tol);
    return {d.value, d.abs_error};
  }
  const auto d = kernel_distance(a, b, params, mc_config(o));
  return {d.mean, d.std_error};
}

// ---------------------------------------------------------------------------

Artifact cmd_ball_volume(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  const double beta = o.beta.value_or(params.alpha * params.p);
  const double integral = ball_integral_exact(o.radius, beta, params.n);
  return {json{{"n", params.n},
               {"params", params},
               {"volume", koranyi_ball_volume(params.n)},
               {"radius", o.radius},
               {"beta", beta},
               {"integral", integral},
               {"integral_root_p", std::pow(integral, 1.0 / params.p)},
               {"abs_error", 0.0}},
          std::nullopt};
}

Artifact cmd_word_ball(const Options& o, std::ostream&) {
  const WordBall ball = word_ball(o.r);
  std::string body;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    body += lattice_line(ball.elements()[i], ball.distances()[i]);
    body += '\n';
  }
  const auto sizes = ball.cumulative_sizes();
  return {json{{"radius", o.r},
               {"size", ball.size()},
               {"cumulative_sizes", std::vector<std::size_t>(sizes.begin(), sizes.end())}},
          body};
}

Artifact cmd_xn(const Options& o, std::ostream&) {
  if (o.count < 1) throw Usage("--n must be >= 1");
  const XnSet xn = build_xn(static_cast<std::size_t>(o.count));
  std::string body;
  for (std::size_t i = 0; i < xn.elements.size(); ++i) {
    body += lattice_line(xn.elements[i], xn.distances[i]);
    body += '\n';
  }
  return {json{{"n", o.count},
               {"inner_radius", xn.inner_radius},
               {"outer_radius", xn.outer_radius},
               {"n_quarter", std::pow(static_cast<double>(o.count), 0.25)}},
          body};
}

Artifact cmd_kernel_norm(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  require_embedding_epsilon(params);
  GroupPoint x = parse_point(o.x);
  if (x.dim() == 1 && params.n > 1) x = embed_h1(x, params.n);
  const MCEstimate norm_p = o.ball_k ? mc_kernel_norm_ball(x, *o.ball_k, params, mc_config(o))
                                     : mc_kernel_norm(x, params, mc_config(o));
  const double scale = params.p * std::pow(1.0 - params.epsilon, 1.0 / params.p);
  const double norm = std::pow(norm_p.mean, 1.0 / params.p);
  const double factor = std::pow(koranyi_norm(x), params.integrability_margin());
  const KernelEnvelope env = kernel_norm_envelope(params);
  json result{{"x", x}, {"params", params}, {"norm_p", norm_p}};
  if (o.ball_k) {
    result["ball_k"] = *o.ball_k;
  } else {
    result["distance_from_identity"] = {
        {"mean", scale * norm},
        {"std_error", scale * norm * norm_p.std_error / (params.p * norm_p.mean)}};
    result["envelope_p"] = {{"lower", env.lower * factor}, {"upper", env.upper * factor}};
  }
  return {result, std::nullopt};
}

Artifact cmd_repr_distance(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  const GroupPoint x = parse_point(o.x);
  const GroupPoint y = parse_point(o.y);
  const QuadratureResult d = repr_distance(x, y, params, o.tol);
  const double dn = koranyi_distance(x, y);
  const ReprEnvelope env = repr_envelope(multiply(inverse(x), y), params);
  json result{{"x", x},
              {"y", y},
              {"params", params},
              {"distance", d.value},
              {"abs_error", d.abs_error},
              {"evaluations", d.evaluations},
              {"d_N", dn},
              {"envelope", {{"term_uv", env.term_uv}, {"term_w", env.term_w}}}};
  result["ratio_to_snowflake"] = dn > 0.0 ? json(d.value / std::pow(dn, 1.0 - params.epsilon))
                                          : json(nullptr);
  return {result, std::nullopt};
}

Artifact cmd_distance_matrix(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  const PointSet set = load_points(o);
  const std::size_t count = set.points.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
  }
  Options inner = o;
  inner.workers = 1;  // parallel over pairs instead
  const auto values = parallel_map<PairValue>(pairs.size(), o.workers, [&](std::size_t k) {
    return pair_distance(set.points[pairs[k].first], set.points[pairs[k].second], params,
                         inner);
  });
  std::ostringstream csv;
  json rows = json::array();
  csv << "i,j,d_N,d_snowflake,distance,std_error_or_abs_error\n";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const double dn = koranyi_distance(set.points[i], set.points[j]);
    const double snow = std::pow(dn, 1.0 - params.epsilon);
    csv << i << ',' << j << ',' << format_double(dn) << ',' << format_double(snow) << ','
        << format_double(values[k].value) << ',' << format_double(values[k].error) << '\n';
    rows.push_back(json{{"i", i},
                        {"j", j},
                        {"d_N", dn},
                        {"d_snowflake", snow},
                        {"distance", values[k].value},
                        {"std_error_or_abs_error", values[k].error}});
  }
  json summary{{"points", count}, {"pairs", pairs.size()}, {"metric", o.metric},
               {"params", params}};
  if (o.format == "json") {
    summary["rows"] = rows;
    return {summary, std::nullopt};
  }
  return {summary, csv.str()};
}

Artifact cmd_distortion(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  const PointSet set = load_points(o);
  const double snow = 1.0 - params.epsilon;
  PairMetric base;
  if (o.base == "koranyi") {
    base = [&](std::size_t i, std::size_t j) {
      return std::pow(koranyi_distance(set.points[i], set.points[j]), snow);
    };
  } else if (o.base == "word") {
    if (set.lattice.empty()) throw Usage("--base word needs --xn");
    base = [&](std::size_t i, std::size_t j) {
      const WordDistance d = word_distance(set.lattice[i], set.lattice[j]);
      if (!d.resolved) throw BudgetExceeded("word distance unresolved within radius 64");
      return std::pow(static_cast<double>(d.distance), snow);
    };
  } else {
    throw Usage("--base must be koranyi or word");
  }
  Options inner = o;
  inner.workers = 1;
  double worst_error = 0.0;
  std::mutex error_mutex;
  PairMetric image = [&](std::size_t i, std::size_t j) {
    const PairValue d = pair_distance(set.points[i], set.points[j], params, inner);
    std::lock_guard lock(error_mutex);
    worst_error = std::max(worst_error, d.error);
    return d.value;
  };
  DistortionOptions options;
  options.label_a = o.base + "^(1-eps)";
  options.label_b = o.metric;
  options.max_pairs = o.max_pairs;
  options.seed = o.seed;
  options.workers = o.workers;
  const DistortionReport report = distortion_report(set.points.size(), base, image, options);
  return {json{{"params", params},
               {"report", report},
               {"max_pair_error", worst_error}},
          std::nullopt};
}

Artifact cmd_doubling(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  const HeisenbergNet net = heisenberg_net(o.h);
  const NetReprMetric metric(net, params, std::max(o.tol, 1e-7));
  const double resolution = metric.resolution();
  std::vector<double> radii = o.radii;
  if (radii.empty()) radii = {2.0 * resolution, 3.0 * resolution};
  // The identity is always a center; the rest are drawn with the seed.
  auto centers = select_centers(net.points.size(), std::min(o.centers, net.points.size()),
                                o.seed);
  const auto origin = static_cast<std::size_t>(
      std::find_if(net.index.begin(), net.index.end(),
                   [](const auto& idx) { return idx[0] == 0 && idx[1] == 0 && idx[2] == 0; }) -
      net.index.begin());
  centers.erase(std::remove(centers.begin(), centers.end(), origin), centers.end());
  centers.insert(centers.begin(), origin);
  if (centers.size() > o.centers) centers.resize(o.centers);
  DoublingOptions options;
  options.resolution = resolution;
  options.bound = image_doubling_bound(params.epsilon);
  const DoublingReport report = doubling_estimate(
      net.points.size(), [&](std::size_t i, std::size_t j) { return metric(i, j); }, radii,
      centers, options);
  return {json{{"params", params},
               {"h", o.h},
               {"net_points", net.points.size()},
               {"distinct_integrals", metric.cache_size()},
               {"theorem_bound", std::exp2(16.0)},
               {"report", report}},
          std::nullopt};
}

Artifact cmd_measure_ratio(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  const MeasureRatioReport report =
      measure_ratio_check(params, o.radius, mc_config(o), std::max(o.tol, 1e-6));
  return {json{{"params", params},
               {"report", report},
               {"relative_deviation", report.ratio / report.expected - 1.0}},
          std::nullopt};
}

Artifact cmd_sweep(const Options& o, std::ostream&) {
  const std::vector<double> eps = dyadic_epsilons(o.eps_from, o.eps_to);
  SweepSpec spec;
  spec.pairs = o.pairs;
  spec.radius = o.sweep_radius;
  spec.seed = o.seed;
  spec.tol = o.tol;
  spec.workers = o.workers;
  const SweepReport report = epsilon_sweep(eps, o.p, spec);
  json result{{"report", report}, {"expected_slope", 1.0 / o.p}};
  if (o.format == "csv") return {result, sweep_csv(report)};
  return {result, std::nullopt};
}

Artifact cmd_ln_inequality(const Options& o, std::ostream& err) {
  const EmbeddingParams params = make_params(o, err);
  if (o.ln_n < 1 || o.ln_n > 1000) throw Usage("--n must lie in [1, 1000]");
  const LnInequalityReport report =
      ln_inequality_eval(static_cast<int>(o.ln_n), params, o.tol);
  return {json{{"params", params},
               {"report", report},
               {"lhs_over_rhs", report.lhs / report.rhs_proxy},
               {"sum_over_integral", report.analytic_sum / report.integral_comparison}},
          std::nullopt};
}

Artifact cmd_schrodinger(const Options& o, std::ostream&) {
  json draws = json::array();
  double worst = 0.0;
  auto check = [&](double lambda, double u, double v, double w) {
    const double oracle = schrodinger_pairing_oracle(lambda, u, v, w);
    const double closed = schrodinger_pairing_closed_form(lambda, u * u + v * v, w);
    const double error = std::abs(oracle - closed);
    worst = std::max(worst, error);
    draws.push_back(json{{"lambda", lambda}, {"u", u}, {"v", v}, {"w", w},
                         {"oracle", oracle}, {"closed_form", closed},
                         {"abs_error", error}});
  };
  if (o.lambda) {
    check(*o.lambda, o.u, o.v, o.w);
  } else {
    for (int i = 0; i < o.draws; ++i) {
      CounterRng rng(o.seed, kStreamSchrodinger, static_cast<std::uint64_t>(i));
      const double lambda = 0.1 + 9.9 * rng.uniform();
      const double u = 4.0 * rng.uniform() - 2.0;
      const double v = 4.0 * rng.uniform() - 2.0;
      const double w = 4.0 * rng.uniform() - 2.0;
      check(lambda, u, v, w);
    }
  }
  return {json{{"draws", draws}, {"max_abs_error", worst}}, std::nullopt};
}

Artifact cmd_growth(const Options& o, std::ostream&) {
  const GrowthFit fit = growth_fit(o.r_max);
  json doubling = json::array();
  for (int r = 1; 2 * r <= o.r_max; ++r) {
    doubling.push_back(json{{"r", r},
                            {"ratio", static_cast<double>(fit.sizes[2 * r]) /
                                          static_cast<double>(fit.sizes[r])}});
  }
  return {json{{"r_max", o.r_max}, {"fit", fit}, {"doubling_ratios", doubling}},
          std::nullopt};
}

// ---------------------------------------------------------------------------

std::filesystem::path resolve_output(const std::string& out) {
  std::filesystem::path path(out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("HSF_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / path;
    }
  }
  return path;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Usage("cannot write " + path.string());
  file << body;
  if (!file) throw Usage("failed writing " + path.string());
}

std::string document(const std::string& command, const json& config, const json& result) {
  return json{{"schema", kSchema}, {"command", command}, {"config", config},
              {"result", result}}
             .dump(2) +
         "\n";
}

void emit(const std::string& command, const json& config, const Artifact& artifact,
          const Options& o, std::ostream& out) {
  if (!artifact.text) {
    const std::string body = document(command, config, artifact.result);
    if (o.out.empty()) {
      out << body;
    } else {
      write_file(resolve_output(o.out), body);
    }
    return;
  }
  if (o.out.empty()) {
    out << *artifact.text;
    return;
  }
  const auto path = resolve_output(o.out);
  write_file(path, *artifact.text);
  write_file(path.string() + ".run.json", document(command, config, artifact.result));
}

std::string default_format(const std::string& command) {
  if (command == "distance-matrix") return "csv";
  if (command == "word-ball" || command == "xn") return "jsonl";
  return "json";
}

using Handler = Artifact (*)(const Options&, std::ostream&);

struct Command {
  const char* name;
  const char* help;
  Handler handler;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{
      "hsf: snowflake embeddings of the Heisenberg group into L_p.\n"
      "Every command prints JSON (schema 1) echoing its full configuration."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for all subcommands");

  const std::vector<Command> commands{
      {"ball-volume",
       "Lebesgue volume c_N of the unit Koranyi ball of H_n and the exact value of "
       "int_{B_N(0,R)} N(z)^{-beta} dz = c_N (2n+2)/(2n+2-beta) R^{2n+2-beta}. With the "
       "default beta = alpha p its p-th root scales as R^{1-eps}.",
       cmd_ball_volume},
      {"word-ball",
       "The word-metric ball B(r) of the discrete Heisenberg group <a, b>, one JSON line "
       "{x,y,z,d} per element in BFS order; |B(r)| grows like r^4.",
       cmd_word_ball},
      {"xn",
       "The set X_n: the first n elements of the BFS order, with the radii of the largest "
       "ball it contains and the smallest ball containing it (both ~ n^{1/4}).",
       cmd_xn},
      {"kernel-norm",
       "Monte Carlo estimate of ||T(x)||_p^p for T(x)(z) = N(x^{-1}z)^{-alpha} - "
       "N(z)^{-alpha}, which is finite because alpha p < 2n+2 < (alpha+1) p. With --k, "
       "the integral over B_N(0, K N(x)) only (K >= 1/3).",
       cmd_kernel_norm},
      {"repr-distance",
       "||Q(x) - Q(y)||_p = (1-eps)^{1/p} I(s,w)^{1/p} at x^{-1}y from the Schrodinger "
       "representation cocycle; comparable to d_N(x,y)^{1-eps}.",
       cmd_repr_distance},
      {"distance-matrix",
       "Pairwise distances of a point set under the representation (or kernel) "
       "embedding, next to d_N and d_N^{1-eps}. CSV by default.",
       cmd_distance_matrix},
      {"distortion",
       "Ratio extremes of the embedded distance over d^{1-eps} (d = Koranyi or word "
       "metric); the snowflake embedding has bounded distortion.",
       cmd_distortion},
      {"doubling",
       "Greedy covering and packing numbers of balls in the image of a Koranyi net of "
       "B_N(0,1) under the representation embedding, against the doubling bound "
       "2^{8/(1-eps)} (2^16 at eps = 1/2).",
       cmd_doubling},
      {"measure-ratio",
       "Monte Carlo ratio of the Lebesgue volumes of {q : ||Q(q) - Q(e)|| <= 2r} and "
       "{... <= r}; dilation homogeneity makes it exactly 2^{4/(1-eps)}.",
       cmd_measure_ratio},
      {"sweep-epsilon",
       "Spread sup/inf of ||Q(x)-Q(y)|| / d_N(x,y)^{1-eps} over a fixed pair sample for "
       "eps = 2^-from .. 2^-to; the spread blows up like eps^{-1/p}, which is sharp.",
       cmd_sweep},
      {"ln-inequality",
       "Both sides of the lattice inequality sum_k sum_{x in B_n} ||f(xc^k)-f(x)||^p / "
       "k^{1+p/2} <~ sum_{x in B_21n} (||f(xa)-f(x)||^p + ||f(xb)-f(x)||^p) for f = Q, and "
       "the sum over k of k^{-1-eps p/2} that forces distortion >~ eps^{-1/p}.",
       cmd_ln_inequality},
      {"schrodinger-check",
       "Grid quadrature of ||g - sigma_lambda(u,v,w) g||^2 for the Gaussian g against "
       "the closed form 2 sqrt(pi)(1 - e^{-lambda(u^2+v^2)} cos(lambda w)).",
       cmd_schrodinger},
      {"growth",
       "Least-squares exponent of log|B(r)| against log r on [r_max/4, r_max]; |B(r)| is "
       "comparable to r^4.",
       cmd_growth},
  };

  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    const std::string name = command.name;
    auto add_params = [&] {
      sub->add_option("--p", o.p, "Target exponent p >= 2")->capture_default_str();
      sub->add_option("--epsilon", o.epsilon, "Snowflake defect eps in (0,1)")
          ->capture_default_str();
    };
    auto add_mc = [&] {
      sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
      sub->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
    };
    auto add_tol = [&] {
      sub->add_option("--tol", o.tol, "Relative quadrature tolerance")->capture_default_str();
    };
    auto add_points = [&] {
      sub->add_option("--xn", o.xn, "Use X_n mapped into H_1 as the point set");
      sub->add_option("--points", o.points_file, "JSON array of points");
      sub->add_option("--metric", o.metric, "repr or kernel")
          ->check(CLI::IsMember({"repr", "kernel"}))
          ->capture_default_str();
    };
    sub->add_option("--out", o.out, "Output file (relative paths honour HSF_OUTPUT_DIR)");
    sub->add_option("--workers", o.workers, "Threads; results do not depend on it")
        ->capture_default_str();

    if (name == "ball-volume") {
      add_params();
      sub->add_option("--radius", o.radius, "Ball radius R")->capture_default_str();
      sub->add_option("--beta", o.beta, "Exponent beta (default alpha p)");
    } else if (name == "word-ball") {
      sub->add_option("--r", o.r, "Radius")->required();
    } else if (name == "xn") {
      sub->add_option("--n", o.count, "Number of elements")->required();
    } else if (name == "kernel-norm") {
      add_params();
      add_mc();
      sub->add_option("--x", o.x, "Point u..,v..,w")->capture_default_str();
      sub->add_option("--k", o.ball_k, "Restrict to B_N(0, K N(x)), K >= 1/3");
    } else if (name == "repr-distance") {
      add_params();
      add_tol();
      sub->add_option("--x", o.x, "Point u..,v..,w")->required();
      sub->add_option("--y", o.y, "Point u..,v..,w")->required();
    } else if (name == "distance-matrix") {
      add_params();
      add_mc();
      add_tol();
      add_points();
      sub->add_option("--format", o.format, "csv (default) or json")
          ->check(CLI::IsMember({"csv", "json"}));
    } else if (name == "distortion") {
      add_params();
      add_mc();
      add_tol();
      add_points();
      sub->add_option("--base", o.base, "koranyi or word")->capture_default_str();
      sub->add_option("--max-pairs", o.max_pairs, "Subsample this many pairs (0 = all)");
    } else if (name == "doubling") {
      add_params();
      add_tol();
      sub->add_option("--seed", o.seed, "Seed for the centers")->capture_default_str();
      sub->add_option("--spacing", o.h, "Net spacing h; the net has steps (h, h, h^2)")->capture_default_str();
      sub->add_option("--centers", o.centers, "Number of ball centers")->capture_default_str();
      sub->add_option("--radii", o.radii, "Radii r (default 2 and 3 net resolutions)")
          ->delimiter(',');
    } else if (name == "measure-ratio") {
      add_params();
      add_mc();
      add_tol();
      sub->add_option("--r", o.radius, "Radius r")->capture_default_str();
    } else if (name == "sweep-epsilon") {
      sub->add_option("--p", o.p, "Target exponent p >= 2")->capture_default_str();
      add_tol();
      sub->add_option("--seed", o.seed, "Seed for the pair sample")->capture_default_str();
      sub->add_option("--eps-from", o.eps_from, "Largest eps is 2^-from")->capture_default_str();
      sub->add_option("--eps-to", o.eps_to, "Smallest eps is 2^-to")->capture_default_str();
      sub->add_option("--pairs", o.pairs, "Pairs in the sample")->capture_default_str();
      sub->add_option("--radius", o.sweep_radius, "Pairs lie in B_N(0, radius)")
          ->capture_default_str();
      sub->add_option("--format", o.format, "json or csv")
          ->check(CLI::IsMember({"json", "csv"}));
    } else if (name == "ln-inequality") {
      add_params();
      add_tol();
      sub->add_option("--n", o.ln_n, "Ball radius n (BFS reaches 21n)")
          ->capture_default_str();
    } else if (name == "schrodinger-check") {
      sub->add_option("--seed", o.seed, "Seed for random draws")->capture_default_str();
      sub->add_option("--draws", o.draws, "Random draws")->capture_default_str();
      sub->add_option("--lambda", o.lambda, "Check one point instead of random draws");
      sub->add_option("--u", o.u, "u (with --lambda)");
      sub->add_option("--v", o.v, "v (with --lambda)");
      sub->add_option("--w", o.w, "w (with --lambda)");
    } else if (name == "growth") {
      sub->add_option("--r-max", o.r_max, "Largest radius (>= 8)")->capture_default_str();
    }
    subs.emplace_back(sub, &command);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests land here too.
    if (e.get_exit_code() == 0) {
      for (const auto& [sub, command] : subs) {
        if (sub->parsed()) {
          out << sub->help();
          return kExitOk;
        }
      }
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  for (const auto& [sub, command] : subs) {
    if (!sub->parsed()) continue;
    if (o.format.empty()) o.format = default_format(command->name);
    json config = base_config(command->name, o);
    for (const CLI::Option* opt : sub->get_options()) {
      const std::string flag = opt->get_name(false, true);
      if (opt->count() == 0 || flag == "--help" || flag == "--workers") continue;
      config["flags"][flag.substr(2)] = opt->as<std::vector<std::string>>();
    }
    try {
      const Artifact artifact = command->handler(o, err);
      emit(command->name, config, artifact, o, out);
      return kExitOk;
    } catch (const Usage& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const DomainError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const ConvergenceError& e) {
      err << "error: " << e.what() << "\n";
      const json partial{{"partial", true},
                         {"error", e.what()},
                         {"partial_value", e.partial_value()},
                         {"partial_error", e.partial_error()}};
      out << document(command->name, config, partial);
      return kExitFailure;
    } catch (const BudgetExceeded& e) {
      err << "error: " << e.what() << "\n";
      out << document(command->name, config, json{{"partial", true}, {"error", e.what()}});
      return kExitFailure;
    }
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace hsf::cli
