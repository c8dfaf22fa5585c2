#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "graphbgs/dataset.hpp"
#include "graphbgs/errors.hpp"
#include "graphbgs/experiment.hpp"
#include "graphbgs/features.hpp"
#include "graphbgs/graph.hpp"
#include "graphbgs/labeling.hpp"
#include "graphbgs/sampling.hpp"
#include "graphbgs/sobolev.hpp"
#include "graphbgs/spectral.hpp"
#include "graphbgs/verify.hpp"

namespace {

using namespace graphbgs;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct LabelsCsv {
  LabelMatrix labels;
};

// node_id (0-based index), class, sampled flag
LabelsCsv read_labels_csv(const std::string& path, Eigen::Index n_nodes) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open labels: " + path);
  LabelsCsv out;
  out.labels.matrix = Eigen::MatrixXd::Zero(n_nodes, 2);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("node", 0) == 0) continue;
    std::stringstream ss(line);
    std::string id, cls, flag;
    if (!std::getline(ss, id, ',') || !std::getline(ss, cls, ',') ||
        !std::getline(ss, flag, ','))
      throw DataError("bad labels line: " + line);
    const int node = std::stoi(id);
    if (node < 0 || node >= n_nodes)
      throw DataError("label node index out of range: " + id);
    const int c = std::stoi(cls);
    if (c != 0 && c != 1) throw DataError("class must be 0 or 1: " + cls);
    out.labels.matrix(node, c) = 1.0;
    if (std::stoi(flag) != 0) out.labels.sampled.indices.push_back(node);
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Graph-signal background/foreground classification toolchain"};
  app.require_subcommand(1);

  // ---- features ----
  auto* cmd_features = app.add_subcommand(
      "features", "Extract per-instance feature vectors from a sequence");
  std::string frames_dir, masks_path, out_path;
  FeatureLayout layout;
  int stride = 1, frame_base = 0;
  std::string seq_name = "sequence";
  cmd_features->add_option("--frames", frames_dir, "frame directory")
      ->required();
  cmd_features->add_option("--masks", masks_path,
                           "mask directory or JSON index")
      ->required();
  cmd_features->add_option("--out", out_path, "output feature file")
      ->required();
  cmd_features->add_option("--name", seq_name, "sequence id");
  cmd_features->add_option("--stride", stride, "median filter frame stride");
  cmd_features->add_option("--frame-base", frame_base,
                           "first frame number in filenames");
  cmd_features->add_option("--of-bins", layout.of_hist_bins);
  cmd_features->add_option("--intensity-bins", layout.intensity_bins);
  cmd_features->add_option("--of-range", layout.of_range);

  // ---- graph ----
  auto* cmd_graph =
      app.add_subcommand("graph", "Build the k-NN instance graph");
  std::string features_path, graph_out;
  int k = 30;
  std::string policy = "connect";
  bool features_csv = false;
  cmd_graph->add_option("--features", features_path, "feature file")
      ->required();
  cmd_graph->add_option("--out", graph_out, "output graph file")->required();
  cmd_graph->add_option("--k", k, "neighbors per node (default 30)");
  cmd_graph->add_option("--policy", policy, "connect|error")
      ->check(CLI::IsMember({"connect", "error"}));
  cmd_graph->add_flag("--csv", features_csv, "input is CSV, not binary");

  // ---- solve ----
  auto* cmd_solve =
      app.add_subcommand("solve", "Interpolate labels over the graph");
  std::string graph_path, labels_path, solve_out;
  SobolevParams params;
  std::string method = "auto";
  double tol = 1e-10;
  int max_iter = 10000;
  cmd_solve->add_option("--graph", graph_path, "graph file")->required();
  cmd_solve->add_option("--labels", labels_path,
                        "CSV: node_id,class,sampled-flag")
      ->required();
  cmd_solve->add_option("--out", solve_out, "output decisions CSV")
      ->required();
  cmd_solve->add_option("--epsilon", params.epsilon, "regularizer (0.2)");
  cmd_solve->add_option("--beta", params.beta, "norm power (1)");
  cmd_solve->add_option("--method", method, "closed|iterative|auto")
      ->check(CLI::IsMember({"closed", "iterative", "auto"}));
  cmd_solve->add_option("--tol", tol, "iterative tolerance");
  cmd_solve->add_option("--max-iter", max_iter, "iteration cap");

  // ---- spectral ----
  auto* cmd_spectral =
      app.add_subcommand("spectral", "Dump Laplacian eigenvalues");
  std::string spectral_graph, spectral_out, vectors_out;
  cmd_spectral->add_option("--graph", spectral_graph, "graph file")
      ->required();
  cmd_spectral->add_option("--out", spectral_out, "eigenvalue CSV")
      ->required();
  cmd_spectral->add_option("--vectors", vectors_out,
                           "optional eigenvector CSV");

  // ---- sample ----
  auto* cmd_sample =
      app.add_subcommand("sample", "Draw a uniform sampling set");
  Eigen::Index sample_n = 0;
  double density = 0.1;
  std::uint64_t seed = 0;
  std::string sample_out;
  cmd_sample->add_option("--n", sample_n, "node count")->required();
  cmd_sample->add_option("--density", density, "fraction in (0,1]")
      ->required();
  cmd_sample->add_option("--seed", seed, "RNG seed");
  cmd_sample->add_option("--out", sample_out, "output CSV")->required();

  // ---- recover ----
  auto* cmd_recover = app.add_subcommand(
      "recover", "Recover a graph signal from sampled values");
  std::string recover_graph, samples_path, recover_out;
  std::string recover_method = "chen";
  Eigen::Index rho = 1;
  double eta = 0.2;
  cmd_recover->add_option("--graph", recover_graph, "graph file")->required();
  cmd_recover->add_option("--samples", samples_path, "CSV: node_id,value")
      ->required();
  cmd_recover->add_option("--out", recover_out, "output CSV")->required();
  cmd_recover->add_option("--method", recover_method, "chen|puy")
      ->check(CLI::IsMember({"chen", "puy"}));
  cmd_recover->add_option("--rho", rho, "bandwidth for chen");
  cmd_recover->add_option("--eta", eta, "regularization for puy");

  // ---- experiment ----
  auto* cmd_experiment = app.add_subcommand(
      "experiment", "Monte Carlo cross-validation over sequences");
  auto* cmd_exp_run = cmd_experiment->add_subcommand("run");
  std::string config_path, out_dir = ".";
  std::uint64_t exp_seed = 0;
  bool seed_given = false;
  cmd_exp_run->add_option("--config", config_path, "JSON config")->required();
  cmd_exp_run
      ->add_option("--seed", exp_seed, "master seed (overrides config)")
      ->each([&seed_given](const std::string&) { seed_given = true; });
  cmd_exp_run->add_option("--out-dir", out_dir, "output directory");

  // ---- verify ----
  auto* cmd_verify =
      app.add_subcommand("verify", "Run the theorem property suites");
  std::uint64_t verify_seed = 12345;
  bool inject_violation = false;
  cmd_verify->add_option("--seed", verify_seed, "RNG seed");
  cmd_verify->add_flag("--inject-violation", inject_violation,
                       "feed an asymmetric perturbation (self-test)");

  CLI11_PARSE(app, argc, argv);

  if (*cmd_features) {
    const FrameSequence seq = load_frame_directory(frames_dir, seq_name);
    const Image& first = seq.frames.front();
    const std::vector<InstanceMask> masks =
        load_masks(masks_path, frame_base, first.rows, first.cols);
    const BackgroundModel bg = median_background(seq, stride);
    FeatureBuildReport report;
    const FeatureMatrix fm =
        build_node_features(seq, masks, bg, layout, &report);
    for (const auto& id : report.skipped)
      std::cerr << "skipped (no predecessor frame): " << id << "\n";
    save_features(fm, out_path);
    std::cout << "wrote " << fm.n() << " x " << fm.dim() << " features to "
              << out_path << "\n";
    return kExitOk;
  }

  if (*cmd_graph) {
    const FeatureMatrix fm = features_csv ? load_features_csv(features_path)
                                          : load_features(features_path);
    BuildReport report;
    const Graph g = build_knn_graph(
        fm, k,
        policy == "connect" ? ConnectPolicy::connect : ConnectPolicy::error,
        &report);
    save_graph(g, graph_out);
    std::cout << "nodes=" << g.n_nodes << " edges=" << g.edges.size()
              << " sigma=" << report.bandwidth.sigma
              << " components=" << report.components_before_connect << "\n";
    for (const auto& e : report.added_edges)
      std::cout << "connected components via edge " << e.i << "-" << e.j
                << " (w=" << e.weight << ")\n";
    return kExitOk;
  }

  if (*cmd_solve) {
    const Graph g = load_graph(graph_path);
    const Laplacian lap = build_laplacian(g);
    LabelsCsv parsed = read_labels_csv(labels_path, g.n_nodes);
    const bool closed =
        method == "closed" || (method == "auto" && g.n_nodes <= 2000);
    const RecoveredSignal solved =
        closed ? solve_closed_form(lap, parsed.labels, params)
               : solve_iterative(lap, parsed.labels, params, tol, max_iter);
    std::ofstream os(solve_out);
    if (!os) throw DataError("cannot open for writing: " + solve_out);
    os << "node_id,z_background,z_foreground,class\n";
    os.precision(17);
    for (Eigen::Index i = 0; i < solved.scores.rows(); ++i)
      os << i << "," << solved.scores(i, 0) << "," << solved.scores(i, 1)
         << "," << solved.labels[static_cast<std::size_t>(i)] << "\n";
    return kExitOk;
  }

  if (*cmd_spectral) {
    const Graph g = load_graph(spectral_graph);
    const SpectralBasis basis = eigendecompose(build_laplacian(g));
    std::ofstream os(spectral_out);
    if (!os) throw DataError("cannot open for writing: " + spectral_out);
    os << "index,eigenvalue\n";
    os.precision(17);
    for (Eigen::Index i = 0; i < basis.n(); ++i)
      os << i << "," << basis.eigenvalues(i) << "\n";
    if (!vectors_out.empty()) {
      std::ofstream vs(vectors_out);
      if (!vs) throw DataError("cannot open for writing: " + vectors_out);
      vs.precision(17);
      for (Eigen::Index r = 0; r < basis.n(); ++r) {
        for (Eigen::Index c = 0; c < basis.n(); ++c)
          vs << (c ? "," : "") << basis.eigenvectors(r, c);
        vs << "\n";
      }
    }
    return kExitOk;
  }

  if (*cmd_sample) {
    const SamplingSet set = sample_uniform(sample_n, density, seed);
    std::ofstream os(sample_out);
    if (!os) throw DataError("cannot open for writing: " + sample_out);
    os << "# n=" << sample_n << " density=" << density << " seed=" << seed
       << "\n";
    for (int s : set.indices) os << s << "\n";
    return kExitOk;
  }

  if (*cmd_recover) {
    const Graph g = load_graph(recover_graph);
    const Laplacian lap = build_laplacian(g);
    std::ifstream is(samples_path);
    if (!is) throw DataError("cannot open samples: " + samples_path);
    SamplingSet set;
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("node", 0) == 0)
        continue;
      std::stringstream ss(line);
      std::string id, value;
      if (!std::getline(ss, id, ',') || !std::getline(ss, value, ','))
        throw DataError("bad sample line: " + line);
      set.indices.push_back(std::stoi(id));
      values.push_back(std::stod(value));
    }
    Eigen::VectorXd y_s =
        Eigen::Map<Eigen::VectorXd>(values.data(),
                                    static_cast<Eigen::Index>(values.size()));
    Eigen::VectorXd recovered;
    if (recover_method == "chen") {
      const SpectralBasis basis = eigendecompose(lap);
      recovered = chen_recover(basis, set, y_s, rho);
    } else {
      recovered = puy_recover(lap, set, y_s, eta);
    }
    std::ofstream os(recover_out);
    if (!os) throw DataError("cannot open for writing: " + recover_out);
    os << "node_id,value\n";
    os.precision(17);
    for (Eigen::Index i = 0; i < recovered.size(); ++i)
      os << i << "," << recovered(i) << "\n";
    return kExitOk;
  }

  if (*cmd_exp_run) {
    std::vector<SequenceData> sequences;
    ExperimentConfig config = load_experiment_config(config_path, &sequences);
    if (seed_given) config.master_seed = exp_seed;
    const ExperimentResult result = run_experiment(sequences, config);
    std::filesystem::create_directories(out_dir);
    write_results_csv(result, out_dir + "/results.csv");
    write_summary_csv(result, out_dir + "/summary.csv");
    for (const auto& s : result.summaries)
      std::cout << s.sequence << ": best F=" << s.best_f
                << " at density=" << s.best_density << "\n";
    return kExitOk;
  }

  if (*cmd_verify) {
    if (inject_violation) {
      // deliberate contract breach: asymmetric perturbation must be refused
      Eigen::MatrixXd psi(3, 3);
      psi << 1, 2, 0, 0, 1, 0, 0, 0, 1;
      FeatureMatrix fm;
      fm.data = Eigen::MatrixXd::Random(3, 2);
      fm.node_ids = {"a", "b", "c"};
      const Graph g = build_knn_graph(fm, 1);
      try {
        weyl_check(build_laplacian(g), psi);
        std::cout << "FAIL injected-violation (accepted asymmetric Psi)\n";
      } catch (const DataError&) {
        std::cout << "PASS injected-violation (asymmetric Psi rejected)\n";
      }
      return kExitVerification;  // self-test path always signals nonzero
    }
    bool all_ok = true;
    for (const SuiteResult& suite : verify_all(verify_seed)) {
      const bool ok = suite.ok();
      all_ok = all_ok && ok;
      std::cout << (ok ? "PASS " : "FAIL ") << suite.name << " ("
                << suite.instances - suite.failures << "/" << suite.instances
                << " instances)";
      if (!suite.detail.empty()) std::cout << " " << suite.detail;
      std::cout << "\n";
    }
    return all_ok ? kExitOk : kExitVerification;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const graphbgs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const graphbgs::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const graphbgs::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
