#include "qcluster/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qcluster {

using nlohmann::json;

namespace {

[[noreturn]] void fail(std::string_view source, std::string_view field, const std::string& what) {
  std::string msg(source);
  msg += ": ";
  if (!field.empty()) {
    msg += field;
    msg += ": ";
  }
  msg += what;
  throw SpecError(msg);
}

double number_at(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_number()) fail(source, field, "expected a number");
  return j.get<double>();
}

int integer_at(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_number_integer()) fail(source, field, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    fail(source, field, "integer out of range");
  return static_cast<int>(v);
}

PointSet parse_points(const json& j, std::string_view source) {
  if (!j.is_array()) fail(source, "/points", "expected an array of points");
  std::vector<Point> pts;
  std::vector<std::string> labels;
  bool any_label = false;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string field = "/points/" + std::to_string(i);
    const auto& p = j[i];
    if (p.is_array()) {
      if (p.size() != 2) fail(source, field, "expected [x, y]");
      pts.push_back({number_at(p[0], source, field + "/0"), number_at(p[1], source, field + "/1")});
      labels.emplace_back();
    } else if (p.is_object()) {
      for (const auto& [key, _] : p.items())
        if (key != "x" && key != "y" && key != "label") fail(source, field + "/" + key, "unknown key");
      if (!p.contains("x") || !p.contains("y")) fail(source, field, "point needs both x and y");
      pts.push_back({number_at(p["x"], source, field + "/x"), number_at(p["y"], source, field + "/y")});
      if (p.contains("label")) {
        if (!p["label"].is_string()) fail(source, field + "/label", "expected a string");
        labels.push_back(p["label"].get<std::string>());
        any_label = true;
      } else {
        labels.emplace_back();
      }
    } else {
      fail(source, field, "expected [x, y] or {\"x\": .., \"y\": ..}");
    }
  }
  try {
    return PointSet(std::move(pts), any_label ? std::move(labels) : std::vector<std::string>{});
  } catch (const std::invalid_argument& e) {
    fail(source, "/points", e.what());
  }
}

std::vector<int> int_list(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_array()) fail(source, field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer_at(j[i], source, field + "/" + std::to_string(i)));
  return out;
}

AnnealConfig parse_anneal(const json& j, std::string_view source) {
  AnnealConfig cfg;
  if (!j.is_object()) fail(source, "/anneal", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string field = "/anneal/" + key;
    if (key == "steps") {
      cfg.steps = integer_at(value, source, field);
    } else if (key == "dt") {
      cfg.dt = number_at(value, source, field);
    } else if (key == "h") {
      cfg.field = number_at(value, source, field);
    } else if (key == "mode") {
      if (value == "exact")
        cfg.mode = StepMode::exact;
      else if (value == "split")
        cfg.mode = StepMode::split;
      else
        fail(source, field, "expected \"exact\" or \"split\"");
    } else {
      fail(source, field, "unknown key");
    }
  }
  return cfg;
}

OutputTargets parse_output(const json& j, std::string_view source) {
  OutputTargets out;
  if (!j.is_object()) fail(source, "/output", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string field = "/output/" + key;
    if (key == "dir") {
      if (!value.is_string()) fail(source, field, "expected a string");
      out.dir = value.get<std::string>();
    } else if (key == "emit") {
      out.formats.clear();
      if (!value.is_array()) fail(source, field, "expected an array of formats");
      for (const auto& f : value) {
        if (!f.is_string()) fail(source, field, "expected format names");
        try {
          const auto parsed = parse_emit_list(f.get<std::string>());
          out.formats.insert(out.formats.end(), parsed.begin(), parsed.end());
        } catch (const std::invalid_argument& e) {
          fail(source, field, e.what());
        }
      }
    } else {
      fail(source, field, "unknown key");
    }
  }
  return out;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string describe_blocks(const ProblemSpec& spec, const Partition& p) {
  std::string out;
  for (const auto& block : p.blocks()) {
    out += '{';
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) out += ' ';
      out += spec.points.label(static_cast<std::size_t>(block[i]));
    }
    out += '}';
  }
  return out;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

}  // namespace

std::string_view to_string(EmitFormat f) {
  switch (f) {
    case EmitFormat::table: return "table";
    case EmitFormat::csv: return "csv";
    case EmitFormat::svg: return "svg";
  }
  return "table";
}

std::vector<EmitFormat> parse_emit_list(std::string_view list) {
  std::vector<EmitFormat> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto end = std::min(list.find(',', start), list.size());
    const auto item = list.substr(start, end - start);
    if (item == "table")
      out.push_back(EmitFormat::table);
    else if (item == "csv")
      out.push_back(EmitFormat::csv);
    else if (item == "svg")
      out.push_back(EmitFormat::svg);
    else
      throw std::invalid_argument("unknown output format '" + std::string(item) + "' (table, csv, svg)");
    start = end + 1;
  }
  return out;
}

void ProblemSpec::validate() const {
  try {
    scheme.validate();
    anneal.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(name + ": " + e.what());
  }
  const bool kmeans = scheme.method == EncodingMethod::kmeanspp;
  if (kmeans != !centroids.empty())
    throw SpecError(name + ": centroids must be given exactly when method is kmeanspp");
  if (kmeans) {
    if (centroids.size() != static_cast<std::size_t>(scheme.clusters))
      throw SpecError(name + ": need one centroid per cluster");
    std::set<int> seen;
    for (int c : centroids) {
      if (c < 0 || c >= static_cast<int>(points.size()))
        throw SpecError(name + ": centroid index " + std::to_string(c) + " out of range");
      if (!seen.insert(c).second) throw SpecError(name + ": duplicate centroid index " + std::to_string(c));
    }
    if (points.size() <= centroids.size()) throw SpecError(name + ": kmeanspp needs at least one non-centroid point");
  }
}

ProblemSpec parse_spec(std::string_view json_text, std::string_view source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(source, "", e.what());
  }
  if (!j.is_object()) fail(source, "", "top level must be an object");

  static const std::set<std::string> known = {"name",      "points",          "n_points", "seed",
                                              "method",    "clusters",        "pinned",   "centroids",
                                              "centroid_states", "penalty",   "anneal",   "output"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) fail(source, "/" + key, "unknown key");

  ProblemSpec spec;
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail(source, "/name", "expected a string");
    spec.name = j["name"].get<std::string>();
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(source, "/seed", "expected a non-negative integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("points")) {
    if (j.contains("n_points")) fail(source, "/n_points", "give either points or n_points, not both");
    spec.points = parse_points(j["points"], source);
  } else if (j.contains("n_points")) {
    if (!spec.seed) fail(source, "/seed", "generating points requires a seed");
    const int n = integer_at(j["n_points"], source, "/n_points");
    if (n < 2) fail(source, "/n_points", "need at least 2 points");
    spec.points = generate_instance(n, *spec.seed);
  } else {
    fail(source, "/points", "missing (give points, or n_points with seed)");
  }

  EncodingMethod method = EncodingMethod::onehot_k3_pinned;
  if (j.contains("method")) {
    if (!j["method"].is_string()) fail(source, "/method", "expected a string");
    try {
      method = parse_method(j["method"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(source, "/method", e.what());
    }
  }
  std::optional<int> clusters;
  if (j.contains("clusters")) clusters = integer_at(j["clusters"], source, "/clusters");
  if (j.contains("centroids")) spec.centroids = int_list(j["centroids"], source, "/centroids");
  if (j.contains("pinned") && method != EncodingMethod::onehot_k2_penalty)
    fail(source, "/pinned", "only one-hot-K2-penalty takes a pinned flag (use one-hot-K3 or one-hot-K3-pinned)");
  if (j.contains("centroid_states") && method != EncodingMethod::kmeanspp)
    fail(source, "/centroid_states", "only valid for method kmeanspp");

  const auto require_k = [&](int k) {
    if (clusters && *clusters != k)
      fail(source, "/clusters", std::string(to_string(method)) + " requires K = " + std::to_string(k));
  };
  switch (method) {
    case EncodingMethod::onehot_k3:
      require_k(3);
      spec.scheme = EncodingScheme::onehot_k3();
      break;
    case EncodingMethod::onehot_k3_pinned:
      require_k(3);
      spec.scheme = EncodingScheme::onehot_k3_pinned();
      break;
    case EncodingMethod::onehot_k2_penalty: {
      require_k(2);
      bool pinned = true;
      if (j.contains("pinned")) {
        if (!j["pinned"].is_boolean()) fail(source, "/pinned", "expected true or false");
        pinned = j["pinned"].get<bool>();
      }
      spec.scheme = EncodingScheme::k2_penalty(pinned);
      break;
    }
    case EncodingMethod::onehot_multispin:
      if (!clusters) fail(source, "/clusters", "one-hot-multispin requires a cluster count");
      if (*clusters < 2) fail(source, "/clusters", "need at least 2 clusters");
      spec.scheme = EncodingScheme::multispin(*clusters);
      break;
    case EncodingMethod::kmeanspp: {
      if (spec.centroids.empty()) fail(source, "/centroids", "kmeanspp requires centroid indices");
      const int k = static_cast<int>(spec.centroids.size());
      if (k < 2) fail(source, "/centroids", "need at least 2 centroids");
      require_k(k);
      try {
        if (j.contains("centroid_states")) {
          const auto& cs = j["centroid_states"];
          if (!cs.is_array()) fail(source, "/centroid_states", "expected an array of spin-projection lists");
          std::vector<BlockState> states;
          for (std::size_t i = 0; i < cs.size(); ++i)
            states.push_back(int_list(cs[i], source, "/centroid_states/" + std::to_string(i)));
          if (static_cast<int>(states.size()) != k)
            fail(source, "/centroid_states", "need one state per centroid");
          if (states.front().size() != static_cast<std::size_t>(spins_per_point_for(k)))
            fail(source, "/centroid_states", "each state needs ceil(log3 K) projections");
          spec.scheme = EncodingScheme::kmeanspp(std::move(states));
        } else {
          spec.scheme = EncodingScheme::kmeanspp_default(k);
        }
      } catch (const SpecError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        fail(source, "/centroid_states", e.what());
      }
      break;
    }
  }
  if (method != EncodingMethod::kmeanspp && !spec.centroids.empty())
    fail(source, "/centroids", "centroids are only valid for method kmeanspp");
  if (j.contains("penalty")) {
    const double p = number_at(j["penalty"], source, "/penalty");
    if (!(p > 0.0)) fail(source, "/penalty", "penalty constant must be positive");
    spec.scheme.penalty = p;
  }

  if (j.contains("anneal")) spec.anneal = parse_anneal(j["anneal"], source);
  if (j.contains("output")) spec.output = parse_output(j["output"], source);

  try {
    spec.validate();
  } catch (const SpecError& e) {
    fail(source, "", e.what());
  }
  return spec;
}

ProblemSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path.string() + ": cannot open spec file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str(), path.string());
}

std::string spec_to_json(const ProblemSpec& spec) {
  json j;
  j["name"] = spec.name;
  json pts = json::array();
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    const auto& p = spec.points[i];
    if (spec.points.has_labels())
      pts.push_back({{"x", p.x}, {"y", p.y}, {"label", spec.points.label(i)}});
    else
      pts.push_back({p.x, p.y});
  }
  j["points"] = pts;
  if (spec.seed) j["seed"] = *spec.seed;
  j["method"] = std::string(to_string(spec.scheme.method));
  j["clusters"] = spec.scheme.clusters;
  if (spec.scheme.method == EncodingMethod::onehot_k2_penalty) j["pinned"] = spec.scheme.pinned;
  if (!spec.centroids.empty()) j["centroids"] = spec.centroids;
  if (!spec.scheme.centroid_states.empty()) j["centroid_states"] = spec.scheme.centroid_states;
  if (spec.scheme.penalty) j["penalty"] = *spec.scheme.penalty;
  j["anneal"] = {{"steps", spec.anneal.steps},
                 {"dt", spec.anneal.dt},
                 {"h", spec.anneal.field},
                 {"mode", spec.anneal.mode == StepMode::split ? "split" : "exact"}};
  json emit_list = json::array();
  for (auto f : spec.output.formats) emit_list.push_back(std::string(to_string(f)));
  j["output"] = {{"emit", emit_list}};
  if (spec.output.dir) j["output"]["dir"] = spec.output.dir->string();
  return j.dump(2);
}

PointSet generate_instance(int n_points, std::uint64_t seed) {
  if (n_points < 2) throw std::invalid_argument("generate_instance: need at least 2 points");
  constexpr std::uint64_t kValues = 21;  // integers -10 .. 10
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  // Draws at or above `limit` would bias the modulo; 2^64 = limit + (2^64 mod 21).
  constexpr std::uint64_t kRemainder = (kMax % kValues + 1) % kValues;
  constexpr std::uint64_t kLimit = kMax - kRemainder + 1;
  std::mt19937_64 engine(seed);
  const auto draw = [&] {
    std::uint64_t x = engine();
    if constexpr (kRemainder != 0)
      while (x >= kLimit) x = engine();
    return static_cast<double>(static_cast<int>(x % kValues) - 10);
  };
  std::vector<Point> pts;
  for (int i = 0; i < n_points; ++i) {
    const double x = draw();
    const double y = draw();
    pts.push_back({x, y});
  }
  return PointSet(std::move(pts));
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4"}; }

ProblemSpec preset(std::string_view name) {
  ProblemSpec s;
  s.name = std::string(name);
  s.anneal = AnnealConfig{2000, 0.1, 8.0, StepMode::exact};
  if (name == "fig1") {
    s.points = PointSet({{4, -2}, {-7, 7}, {6, -9}, {-6, 8}, {-2, -6}, {-9, 5}});
    s.scheme = EncodingScheme::onehot_k3_pinned();
    s.anneal.field = 2.0;
  } else if (name == "fig2") {
    s.points = PointSet({{6, 6}, {-6, 5}, {-3, 9}, {4, -10}, {-7, 4}, {-5, 1}});
    s.scheme = EncodingScheme::k2_penalty(true);
  } else if (name == "fig3") {
    s.points = PointSet({{8, -1}, {-2, -6}, {1, 6}, {4, -4}, {3, 8}, {9, -4}, {-5, 8}, {-6, -8}, {3, -10}});
    s.scheme = EncodingScheme::kmeanspp({{1}, {0}, {-1}});
    s.centroids = {0, 1, 2};
  } else if (name == "fig4") {
    s.points = PointSet({{-9, 10}, {1, 9}, {-8, -3}, {-2, -9}, {4, -2}, {8, -8}, {10, -5}});
    s.scheme = EncodingScheme::kmeanspp({{1, 1}, {1, 0}, {1, -1}, {0, 1}});
    s.centroids = {0, 1, 2, 4};
  } else {
    throw SpecError("unknown preset '" + std::string(name) + "' (fig1, fig2, fig3, fig4)");
  }
  s.validate();
  return s;
}

RunResult run(const ProblemSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n_points = static_cast<int>(spec.points.size());
  RunResult r;
  r.qutrits = spec.scheme.register_size(n_points);
  if (r.qutrits > kMaxQutrits)
    throw SizeLimitError(spec.name + ": register of " + std::to_string(r.qutrits) +
                         " qutrits exceeds the limit of " + std::to_string(kMaxQutrits));
  if (n_points > kMaxOraclePoints)
    throw SizeLimitError(spec.name + ": " + std::to_string(n_points) +
                         " points exceed the oracle enumeration limit of " + std::to_string(kMaxOraclePoints));

  const auto dm = distance_matrix(spec.points);
  const auto hf = build_problem_hamiltonian(dm, spec.scheme, spec.centroids);
  const auto psi = anneal(spec.anneal, hf);
  r.final_norm = psi.norm();

  const Decoder decoder(spec.scheme, n_points, spec.centroids);
  r.readout = decode(psi, decoder);
  r.top_partition = r.readout.top_partition;
  r.top_probability = r.readout.top_probability;
  r.invalid_probability = r.readout.invalid_probability;
  r.annealed_cost = r.top_partition ? cost(dm, *r.top_partition) : std::numeric_limits<double>::quiet_NaN();

  FixedLabels fixed;
  for (std::size_t c = 0; c < spec.centroids.size(); ++c) fixed[spec.centroids[c]] = static_cast<int>(c);
  const auto oracle = oracle_min(dm, spec.scheme.clusters, fixed);
  r.oracle_min_cost = oracle.min_cost;
  r.oracle_partitions = oracle.argmin_partitions;
  r.match = r.top_partition && oracle.contains(*r.top_partition);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void emit_table(std::ostream& os, const ProblemSpec& spec, const RunResult& r) {
  const auto row = [&](std::string_view key, const std::string& value) {
    os << std::left << std::setw(16) << key << value << '\n';
  };
  row("problem", spec.name);
  row("method", std::string(to_string(spec.scheme.method)) + " (K=" + std::to_string(spec.scheme.clusters) + ", " +
                    std::to_string(r.qutrits) + " qutrits)");
  row("anneal", "M=" + std::to_string(spec.anneal.steps) + " dt=" + fmt(spec.anneal.dt) +
                    " h=" + fmt(spec.anneal.field) +
                    " mode=" + (spec.anneal.mode == StepMode::split ? "split" : "exact"));
  if (r.top_partition) {
    row("top partition", describe_blocks(spec, *r.top_partition));
    row("top prob", fmt(r.top_probability));
    row("annealed cost", fmt(r.annealed_cost, 10));
  } else {
    row("top partition", "none (all probability in invalid states)");
  }
  row("oracle cost", fmt(r.oracle_min_cost, 10));
  for (const auto& p : r.oracle_partitions) row("oracle argmin", describe_blocks(spec, p));
  row("invalid prob", fmt(r.invalid_probability));
  row("norm error", fmt(std::abs(r.final_norm - 1.0), 3));
  row("wall time", fmt(r.wall_seconds, 4) + " s");
  row("match", r.match ? "true" : "false");
}

void emit_csv(std::ostream& os, const RunResult& r) {
  os << "basis_index,digits,partition_id,probability\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < r.readout.basis_probabilities.size(); ++i) {
    os << i << ',';
    const auto digits = basis_digits(i, r.qutrits);
    for (std::size_t k = 0; k < digits.size(); ++k) os << (k ? " " : "") << digits[k];
    os << ',' << r.readout.basis_partition[i] << ',' << r.readout.basis_probabilities[i] << '\n';
  }
}

void emit_partitions_csv(std::ostream& os, const ProblemSpec& spec, const RunResult& r) {
  const auto dm = distance_matrix(spec.points);
  os << "partition_id,blocks,probability,cost\n" << std::setprecision(17);
  for (std::size_t k = 0; k < r.readout.partitions.size(); ++k) {
    const auto& pp = r.readout.partitions[k];
    os << k << ',' << pp.partition.to_string() << ',' << pp.probability << ',' << cost(dm, pp.partition) << '\n';
  }
  os << kInvalidPartition << ",invalid," << r.readout.invalid_probability << ",\n";
}

void emit_svg(std::ostream& os, const ProblemSpec& spec, const RunResult& r) {
  constexpr double kSize = 480.0;
  constexpr double kMargin = 40.0;
  constexpr double kMarker = 7.0;
  static constexpr std::array<std::string_view, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                           "#9467bd", "#ff7f0e", "#8c564b"};
  static constexpr std::array<std::string_view, 6> kShapes{"circle", "square", "triangle",
                                                           "rhomb",  "pentagon", "cross"};

  double lo_x = spec.points[0].x, hi_x = lo_x, lo_y = spec.points[0].y, hi_y = lo_y;
  for (const auto& p : spec.points.points()) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0}) * 1.1;
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  const double scale = (kSize - 2 * kMargin) / span;
  const auto sx = [&](double x) { return kSize / 2 + (x - cx) * scale; };
  const auto sy = [&](double y) { return kSize / 2 - (y - cy) * scale; };

  const auto marker = [&](std::size_t shape, double x, double y) {
    const double m = kMarker;
    std::ostringstream s;
    s << std::setprecision(6);
    switch (shape % kShapes.size()) {
      case 0: s << "<circle class=\"marker\" cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << m << "\"/>"; break;
      case 1:
        s << "<rect class=\"marker\" x=\"" << x - m << "\" y=\"" << y - m << "\" width=\"" << 2 * m
          << "\" height=\"" << 2 * m << "\"/>";
        break;
      case 2:
        s << "<polygon class=\"marker\" points=\"" << x << ',' << y - m << ' ' << x + m << ',' << y + m << ' '
          << x - m << ',' << y + m << "\"/>";
        break;
      case 3:
        s << "<polygon class=\"marker\" points=\"" << x << ',' << y - m << ' ' << x + m << ',' << y << ' ' << x
          << ',' << y + m << ' ' << x - m << ',' << y << "\"/>";
        break;
      case 4: {
        s << "<polygon class=\"marker\" points=\"";
        for (int k = 0; k < 5; ++k) {
          const double a = -std::numbers::pi / 2 + 2 * std::numbers::pi * k / 5;
          s << (k ? " " : "") << x + m * std::cos(a) << ',' << y + m * std::sin(a);
        }
        s << "\"/>";
        break;
      }
      default:
        s << "<path class=\"marker\" d=\"M" << x - m << ',' << y - m << " L" << x + m << ',' << y + m << " M"
          << x - m << ',' << y + m << " L" << x + m << ',' << y - m << "\" stroke-width=\"2\"/>";
    }
    return s.str();
  };

  os << std::setprecision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
     << "<title>" << xml_escape(spec.name) << "</title>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n"
     << "<g class=\"axes\" stroke=\"#888\" stroke-width=\"1\">\n"
     << "<rect x=\"" << kMargin / 2 << "\" y=\"" << kMargin / 2 << "\" width=\"" << kSize - kMargin
     << "\" height=\"" << kSize - kMargin << "\" fill=\"none\"/>\n";
  if (sx(0) > kMargin / 2 && sx(0) < kSize - kMargin / 2)
    os << "<line x1=\"" << sx(0) << "\" y1=\"" << kMargin / 2 << "\" x2=\"" << sx(0) << "\" y2=\""
       << kSize - kMargin / 2 << "\"/>\n";
  if (sy(0) > kMargin / 2 && sy(0) < kSize - kMargin / 2)
    os << "<line x1=\"" << kMargin / 2 << "\" y1=\"" << sy(0) << "\" x2=\"" << kSize - kMargin / 2 << "\" y2=\""
       << sy(0) << "\"/>\n";
  os << "</g>\n";

  std::vector<std::vector<int>> blocks;
  if (r.top_partition) {
    blocks = r.top_partition->blocks();
    // Largest cluster gets the first marker shape.
    std::stable_sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.size() > y.size(); });
  } else {
    blocks.emplace_back();
    for (int i = 0; i < static_cast<int>(spec.points.size()); ++i) blocks.back().push_back(i);
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto color = r.top_partition ? kColors[b % kColors.size()] : std::string_view("#888888");
    const bool stroke_only = b % kShapes.size() == 5;
    os << "<g class=\"cluster\" data-cluster=\"" << b << "\" data-size=\"" << blocks[b].size() << "\" data-shape=\""
       << kShapes[b % kShapes.size()] << "\" fill=\"" << (stroke_only ? "none" : color) << "\" stroke=\"" << color
       << "\">\n";
    for (int i : blocks[b]) {
      const auto& p = spec.points[static_cast<std::size_t>(i)];
      os << marker(b, sx(p.x), sy(p.y)) << '\n';
    }
    os << "</g>\n";
  }
  os << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    os << "<text x=\"" << kMargin << "\" y=\"" << kMargin + 14.0 * static_cast<double>(b) << "\">cluster " << b + 1
       << " (" << kShapes[b % kShapes.size()] << "): " << blocks[b].size() << " points</text>\n";
  }
  os << "</g>\n</svg>\n";
}

std::vector<std::filesystem::path> emit(const ProblemSpec& spec, const RunResult& result, EmitFormat format,
                                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  switch (format) {
    case EmitFormat::table: {
      written.push_back(dir / "summary.txt");
      auto f = open_output(written.back());
      emit_table(f, spec, result);
      break;
    }
    case EmitFormat::csv: {
      written.push_back(dir / "probabilities.csv");
      auto f = open_output(written.back());
      emit_csv(f, result);
      written.push_back(dir / "partitions.csv");
      auto g = open_output(written.back());
      emit_partitions_csv(g, spec, result);
      break;
    }
    case EmitFormat::svg: {
      written.push_back(dir / "clusters.svg");
      auto f = open_output(written.back());
      emit_svg(f, spec, result);
      break;
    }
  }
  return written;
}

}  // namespace qcluster
