#include "graphbgs/experiment.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "graphbgs/errors.hpp"
#include "graphbgs/sampling.hpp"

namespace graphbgs {

void ExperimentPlan::validate() const {
  if (densities.empty()) throw ConfigError("experiment plan has no densities");
  for (double d : densities)
    if (!(d > 0.0) || d > 1.0)
      throw ConfigError("sampling density must be in (0, 1]");
  if (trials_per_density < 1)
    throw ConfigError("trials_per_density must be >= 1");
}

std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& sequence,
                         std::size_t density_index, int trial) {
  // FNV-1a over the trial coordinates
  std::uint64_t h = 14695981039346656037ull ^ master_seed;
  const auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (char c : sequence) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ull;
  }
  mix(density_index);
  mix(static_cast<std::uint64_t>(trial));
  return h;
}

namespace {

struct NodeInfo {
  std::size_t sequence = 0;    // index into sequences
  std::size_t mask_index = 0;  // index into that sequence's kept masks
  int frame_index = 0;
};

}  // namespace

ExperimentResult run_experiment(const std::vector<SequenceData>& sequences,
                                const ExperimentConfig& config) {
  config.plan.validate();
  config.solver.validate();
  if (sequences.size() < 2)
    throw ConfigError("unseen-sequence evaluation needs at least 2 sequences");

  // Per-sequence features and labels, then one global graph.
  std::vector<Eigen::MatrixXd> feature_blocks;
  std::vector<std::string> all_ids;
  std::vector<NodeInfo> nodes;
  std::vector<bool> labeled;
  std::vector<Eigen::RowVector2d> label_rows;
  std::vector<std::vector<InstanceMask>> kept_masks(sequences.size());

  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const SequenceData& seq = sequences[s];
    const BackgroundModel bg =
        median_background(seq.frames, config.median_stride);
    FeatureBuildReport report;
    const FeatureMatrix fm = build_node_features(seq.frames, seq.masks, bg,
                                                 config.layout, &report);
    // keep the masks that produced rows, in row order
    std::vector<InstanceMask> kept;
    for (const auto& m : seq.masks)
      if (m.frame_index > 0) kept.push_back(m);
    if (static_cast<Eigen::Index>(kept.size()) != fm.n())
      throw DataError("mask/feature row mismatch in sequence " + seq.name);
    const GroundTruthSignal signal = build_graph_signal(kept, seq.gt);
    for (std::size_t v = 0; v < kept.size(); ++v) {
      nodes.push_back({s, v, kept[v].frame_index});
      labeled.push_back(signal.labeled[v]);
      label_rows.emplace_back(signal.matrix.row(static_cast<Eigen::Index>(v)));
      all_ids.push_back(seq.name + "/" + kept[v].instance_id);
    }
    feature_blocks.push_back(fm.data);
    kept_masks[s] = std::move(kept);
  }

  FeatureMatrix features;
  features.node_ids = std::move(all_ids);
  const auto n = static_cast<Eigen::Index>(nodes.size());
  features.data.resize(n, config.layout.total_dim());
  Eigen::Index row = 0;
  for (const auto& block : feature_blocks) {
    features.data.middleRows(row, block.rows()) = block;
    row += block.rows();
  }

  Eigen::MatrixXd label_matrix(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    label_matrix.row(i) = label_rows[static_cast<std::size_t>(i)];

  const Graph graph = build_knn_graph(
      features, std::min<int>(config.k, static_cast<int>(n) - 1));
  const Laplacian laplacian = build_laplacian(graph);

  const bool use_closed =
      config.method == SolveMethod::closed ||
      (config.method == SolveMethod::automatic && n <= 2000);

  ExperimentResult result;
  for (std::size_t target = 0; target < sequences.size(); ++target) {
    // candidate training frames: GT-annotated frames of other sequences
    std::vector<std::pair<std::size_t, int>> candidate_frames;
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      if (s == target) continue;
      for (const auto& gt : sequences[s].gt)
        if (gt.frame_index > 0)
          candidate_frames.emplace_back(s, gt.frame_index);
    }
    std::sort(candidate_frames.begin(), candidate_frames.end());

    SequenceSummary summary;
    summary.sequence = sequences[target].name;
    for (std::size_t di = 0; di < config.plan.densities.size(); ++di) {
      const double density = config.plan.densities[di];
      double f_sum = 0.0;
      int f_count = 0;
      for (int trial = 0; trial < config.plan.trials_per_density; ++trial) {
        TrialResult tr;
        tr.sequence = sequences[target].name;
        tr.density = density;
        tr.trial = trial;

        const auto want = static_cast<std::size_t>(std::ceil(
            density * static_cast<double>(candidate_frames.size())));
        std::vector<std::pair<std::size_t, int>> pool = candidate_frames;
        std::mt19937_64 rng(
            trial_seed(config.master_seed, tr.sequence, di, trial));
        for (std::size_t i = 0; i < want && i < pool.size(); ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
          std::swap(pool[i], pool[pick(rng)]);
        }
        std::set<std::pair<std::size_t, int>> chosen(
            pool.begin(), pool.begin() + std::min(want, pool.size()));

        SamplingSet sampled;
        for (std::size_t v = 0; v < nodes.size(); ++v)
          if (labeled[v] && nodes[v].sequence != target &&
              chosen.count({nodes[v].sequence, nodes[v].frame_index}))
            sampled.indices.push_back(static_cast<int>(v));

        if (sampled.indices.empty()) {
          tr.skipped = true;
          result.trials.push_back(tr);
          continue;
        }
        for (int v : sampled.indices)
          assert(nodes[static_cast<std::size_t>(v)].sequence != target);
        tr.sampled_nodes = sampled.size();

        LabelMatrix labels;
        labels.matrix = label_matrix;
        labels.sampled = sampled;
        const RecoveredSignal solved =
            use_closed ? solve_closed_form(laplacian, labels, config.solver)
                       : solve_iterative(laplacian, labels, config.solver);

        // score on the target sequence's annotated frames
        for (const auto& gt : sequences[target].gt) {
          std::vector<const InstanceMask*> fg;
          for (std::size_t v = 0; v < nodes.size(); ++v)
            if (nodes[v].sequence == target &&
                nodes[v].frame_index == gt.frame_index &&
                solved.labels[v] == 1)
              fg.push_back(&kept_masks[target][nodes[v].mask_index]);
          tr.confusion += pixel_confusion(fg, gt);
        }
        tr.metrics = f_measure(tr.confusion);
        f_sum += tr.metrics.f_measure;
        ++f_count;
        result.trials.push_back(tr);
      }
      if (f_count > 0) {
        const double mean_f = f_sum / f_count;
        const bool first = summary.mean_f_per_density.empty();
        summary.mean_f_per_density[density] = mean_f;
        if (first || mean_f > summary.best_f) {
          summary.best_f = mean_f;
          summary.best_density = density;
        }
      }
    }
    result.summaries.push_back(std::move(summary));
  }
  return result;
}

void write_results_csv(const ExperimentResult& result,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "sequence,density,trial,sampled_nodes,skipped,tp,fp,fn,precision,"
        "recall,f_measure\n";
  os.precision(12);
  for (const auto& t : result.trials)
    os << t.sequence << "," << t.density << "," << t.trial << ","
       << t.sampled_nodes << "," << (t.skipped ? 1 : 0) << "," << t.confusion.tp
       << "," << t.confusion.fp << "," << t.confusion.fn << ","
       << t.metrics.precision << "," << t.metrics.recall << ","
       << t.metrics.f_measure << "\n";
  if (!os) throw DataError("write failed: " + path);
}

void write_summary_csv(const ExperimentResult& result,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "sequence,density,mean_f_measure,best_f_measure,best_density\n";
  os.precision(12);
  for (const auto& s : result.summaries)
    for (const auto& [density, mean_f] : s.mean_f_per_density)
      os << s.sequence << "," << density << "," << mean_f << "," << s.best_f
         << "," << s.best_density << "\n";
  if (!os) throw DataError("write failed: " + path);
}

}  // namespace graphbgs
