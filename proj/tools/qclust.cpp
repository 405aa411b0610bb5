// qclust: run qutrit annealing clustering from spec files, presets or
// generated instances, and emit table / CSV / SVG results.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcluster/harness.hpp"

namespace fs = std::filesystem;
using namespace qcluster;

namespace {

enum ExitCode { kMatch = 0, kMismatch = 1, kInputError = 2, kSizeGuard = 3 };

struct Overrides {
  std::string emit;
  std::optional<bool> pinned;
  std::string mode;
  std::string out;
  std::optional<int> steps;
  std::optional<double> dt;
  std::optional<double> field;
};

void apply(const Overrides& o, ProblemSpec& spec) {
  if (!o.emit.empty()) spec.output.formats = parse_emit_list(o.emit);
  if (!o.out.empty()) spec.output.dir = o.out;
  if (!o.mode.empty()) {
    if (o.mode == "exact")
      spec.anneal.mode = StepMode::exact;
    else if (o.mode == "split")
      spec.anneal.mode = StepMode::split;
    else
      throw SpecError("--mode: expected exact or split, got '" + o.mode + "'");
  }
  if (o.pinned) {
    switch (spec.scheme.method) {
      case EncodingMethod::onehot_k3:
      case EncodingMethod::onehot_k3_pinned:
        spec.scheme = *o.pinned ? EncodingScheme::onehot_k3_pinned() : EncodingScheme::onehot_k3();
        break;
      case EncodingMethod::onehot_k2_penalty:
        spec.scheme.pinned = *o.pinned;
        break;
      default:
        throw SpecError("--pinned applies to one-hot-K3 and one-hot-K2-penalty only");
    }
  }
  if (o.steps) spec.anneal.steps = *o.steps;
  if (o.dt) spec.anneal.dt = *o.dt;
  if (o.field) spec.anneal.field = *o.field;
  spec.validate();
}

// Runs one spec and writes its outputs. Table output goes to `console`;
// every requested format is also written to the output directory if set.
int execute(const ProblemSpec& spec, std::ostream& console, std::ostream& err) {
  try {
    const auto result = run(spec);
    const auto& formats = spec.output.formats;
    const bool wants_files =
        std::any_of(formats.begin(), formats.end(), [](EmitFormat f) { return f != EmitFormat::table; });
    if (std::find(formats.begin(), formats.end(), EmitFormat::table) != formats.end())
      emit_table(console, spec, result);
    if (spec.output.dir || wants_files) {
      const fs::path dir = spec.output.dir.value_or(fs::path("out") / spec.name);
      for (auto f : formats)
        for (const auto& path : emit(spec, result, f, dir)) console << "wrote " << path.string() << '\n';
    }
    if (!result.match) err << spec.name << ": annealed partition differs from every oracle argmin\n";
    return result.match ? kMatch : kMismatch;
  } catch (const SizeLimitError& e) {
    err << "size guard: " << e.what() << '\n';
    return kSizeGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int guarded(const std::function<ProblemSpec()>& make, const Overrides& o) {
  ProblemSpec spec;
  try {
    spec = make();
    apply(o, spec);
  } catch (const SizeLimitError& e) {
    std::cerr << "size guard: " << e.what() << '\n';
    return kSizeGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return execute(spec, std::cout, std::cerr);
}

int sweep(const std::vector<std::string>& paths, const Overrides& o, unsigned jobs) {
  struct Job {
    std::string path;
    std::ostringstream out, err;
    int code = kInputError;
  };
  std::vector<Job> work(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) work[i].path = paths[i];

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < work.size();) {
      auto& job = work[i];
      try {
        auto spec = load_spec(job.path);
        apply(o, spec);
        // Each spec gets its own directory so concurrent runs never share files.
        const fs::path base = spec.output.dir.value_or(fs::path("out"));
        spec.output.dir = base / (std::to_string(i) + "-" + spec.name);
        job.code = execute(spec, job.out, job.err);
      } catch (const std::exception& e) {
        job.err << "error: " << e.what() << '\n';
        job.code = kInputError;
      }
    }
  };
  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(work.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  int worst = kMatch;
  for (const auto& job : work) {
    std::cout << "== " << job.path << " (exit " << job.code << ")\n" << job.out.str();
    std::cerr << job.err.str();
    worst = std::max(worst, job.code);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qutrit adiabatic annealing for 2-D clustering"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--emit", o.emit, "Comma-separated outputs: table, csv, svg");
  app.add_option("--pinned", o.pinned, "Pin point 0 to projection 1 (one-hot K=3 and K=2 only)");
  app.add_option("--mode", o.mode, "Propagation: exact or split")->check(CLI::IsMember({"exact", "split"}));
  app.add_option("--out", o.out, "Output directory for emitted files");
  app.add_option("--steps", o.steps, "Schedule steps M")->check(CLI::PositiveNumber);
  app.add_option("--dt", o.dt, "Time step")->check(CLI::PositiveNumber);
  app.add_option("--field", o.field, "Driver field h")->check(CLI::PositiveNumber);

  std::string spec_path;
  auto* run_cmd = app.add_subcommand("run", "Run a JSON problem spec");
  run_cmd->add_option("spec", spec_path, "Spec file")->required();

  std::string preset_name;
  auto* preset_cmd = app.add_subcommand("preset", "Run a figure preset");
  preset_cmd->add_option("name", preset_name, "fig1, fig2, fig3 or fig4")->required();

  int n_points = 0;
  std::uint64_t seed = 0;
  std::string method = "one-hot-K3-pinned";
  std::string write_spec;
  int clusters = 0;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a seeded random instance and run it");
  gen_cmd->add_option("--n", n_points, "Number of points")->required();
  gen_cmd->add_option("--seed", seed, "Generator seed")->required();
  gen_cmd->add_option("--method", method, "Encoding method for the generated instance");
  gen_cmd->add_option("--clusters", clusters, "Cluster count K (one-hot-multispin)");
  gen_cmd->add_option("--write-spec", write_spec, "Also save the generated spec as JSON");

  std::vector<std::string> sweep_paths;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep_cmd = app.add_subcommand("sweep", "Run several spec files concurrently");
  sweep_cmd->add_option("specs", sweep_paths, "Spec files")->required();
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (*run_cmd) return guarded([&] { return load_spec(spec_path); }, o);
  if (*preset_cmd) return guarded([&] { return preset(preset_name); }, o);
  if (*gen_cmd) {
    return guarded(
        [&] {
          if (n_points < 2) throw SpecError("--n: need at least 2 points");
          nlohmann::json j{{"name", "generated-n" + std::to_string(n_points) + "-s" + std::to_string(seed)},
                           {"n_points", n_points},
                           {"seed", seed},
                           {"method", method}};
          if (clusters > 0) j["clusters"] = clusters;
          auto spec = parse_spec(j.dump(), "generate");
          if (!write_spec.empty()) {
            std::ofstream f(write_spec);
            if (!f) throw SpecError("cannot write " + write_spec);
            f << spec_to_json(spec) << '\n';
          }
          return spec;
        },
        o);
  }
  if (*sweep_cmd) return sweep(sweep_paths, o, jobs);
  return kInputError;
}
