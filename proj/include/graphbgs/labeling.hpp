#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "graphbgs/features.hpp"
#include "graphbgs/sobolev.hpp"

namespace graphbgs {

/// Ground-truth annotation for one frame: foreground pixel set, its
/// 8-connected regions, and the pixels excluded from evaluation.
struct GroundTruthFrame {
  int frame_index = 0;
  int rows = 0;
  int cols = 0;
  std::vector<int> fg_pixels;               // sorted linear indices
  std::vector<std::vector<int>> regions;    // 8-connected components
  std::vector<int> excluded;                // sorted, outside-ROI / unknown

  // CDNet encoding: 255 foreground; 0 and 50 background; 85 and 170
  // excluded from labeling and scoring.
  static GroundTruthFrame from_cdnet_image(const Image& gt, int frame_index);
};

struct ThresholdRule {
  double mu_strong = 0.25;
  double xi_mid = 0.45;
  double mu_mid = 0.05;
  double xi_high = 0.9;
  double mu_low = 0.02;
};

enum class NodeClass : int { background = 0, foreground = 1 };

struct NodeLabelDecision {
  double xi = 0.0;  // intersection over node
  double mu = 0.0;  // max intersection over union
  NodeClass label = NodeClass::background;
};

double intersection_over_node(const std::vector<int>& mask_pixels,
                              const std::vector<int>& gt_pixels);

// Per-region IoU values; mu is their max (0 for an empty region list).
std::vector<double> region_iou(const std::vector<int>& mask_pixels,
                               const std::vector<std::vector<int>>& regions);

NodeClass decide_label(double xi, double mu, bool regions_empty,
                       const ThresholdRule& rule = {});

/// Ground-truth label signal plus which nodes have usable labels.
struct GroundTruthSignal {
  Eigen::MatrixXd matrix;           // N x 2 one-hot rows where labeled
  std::vector<bool> labeled;        // false where no GT frame exists
  std::vector<NodeLabelDecision> decisions;
};

// One row per mask, ordered as given. Masks whose frame has no GT entry
// stay unlabeled (eligible as prediction targets only).
GroundTruthSignal build_graph_signal(
    const std::vector<InstanceMask>& masks,
    const std::vector<GroundTruthFrame>& gt_frames,
    const ThresholdRule& rule = {});

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  Confusion& operator+=(const Confusion& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

// Pixel confusion for one frame: predicted foreground is the union of the
// given masks' pixels; GT excluded pixels are removed from both sides.
Confusion pixel_confusion(const std::vector<const InstanceMask*>& fg_masks,
                          const GroundTruthFrame& gt);

// Precision/recall/F with the empty-side convention: a ratio with zero
// denominator is 1 when both prediction and GT are empty, else 0.
Metrics f_measure(std::int64_t tp, std::int64_t fp, std::int64_t fn);
inline Metrics f_measure(const Confusion& c) {
  return f_measure(c.tp, c.fp, c.fn);
}

}  // namespace graphbgs
