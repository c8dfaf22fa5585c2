#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graphbgs/features.hpp"
#include "graphbgs/graph.hpp"
#include "graphbgs/labeling.hpp"
#include "graphbgs/sobolev.hpp"

namespace graphbgs {

/// One video sequence with its frames, externally produced instance masks,
/// and ground-truth annotations.
struct SequenceData {
  std::string name;
  FrameSequence frames;
  std::vector<InstanceMask> masks;
  std::vector<GroundTruthFrame> gt;
};

struct ExperimentPlan {
  std::vector<double> densities = {0.001, 0.005, 0.01, 0.02,
                                   0.04,  0.06,  0.08, 0.10};
  int trials_per_density = 5;

  void validate() const;
};

enum class SolveMethod { closed, iterative, automatic };

struct ExperimentConfig {
  FeatureLayout layout;
  int k = 30;
  SobolevParams solver;
  SolveMethod method = SolveMethod::automatic;
  int median_stride = 1;
  ExperimentPlan plan;
  std::uint64_t master_seed = 0;
};

struct TrialResult {
  std::string sequence;
  double density = 0.0;
  int trial = 0;
  std::size_t sampled_nodes = 0;
  bool skipped = false;  // no labeled node fell into the sampled frames
  Confusion confusion;
  Metrics metrics;
};

struct SequenceSummary {
  std::string sequence;
  std::map<double, double> mean_f_per_density;  // over non-skipped trials
  double best_f = 0.0;
  double best_density = 0.0;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  std::vector<SequenceSummary> summaries;
};

// Deterministic per-trial RNG stream derived from the master seed and the
// trial coordinates; trials are order-independent.
std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& sequence,
                         std::size_t density_index, int trial);

// Monte Carlo cross-validation over unseen sequences: one shared graph,
// frame-level label sampling from the non-target sequences, pixel-level
// scoring on the target sequence's ground truth.
ExperimentResult run_experiment(const std::vector<SequenceData>& sequences,
                                const ExperimentConfig& config);

void write_results_csv(const ExperimentResult& result, const std::string& path);
void write_summary_csv(const ExperimentResult& result, const std::string& path);

}  // namespace graphbgs
