#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "graphbgs/errors.hpp"
#include "graphbgs/graph.hpp"

namespace graphbgs {

/// 8-bit grayscale image, row-major.
struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int r, int c, std::uint8_t fill = 0)
      : rows(r), cols(c), pixels(static_cast<std::size_t>(r) * c, fill) {}

  std::uint8_t& at(int r, int c) {
    return pixels[static_cast<std::size_t>(r) * cols + c];
  }
  std::uint8_t at(int r, int c) const {
    return pixels[static_cast<std::size_t>(r) * cols + c];
  }
  // Clamped access for border handling.
  std::uint8_t at_clamped(int r, int c) const;
  bool same_size(const Image& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

struct FrameSequence {
  std::string sequence_id;
  std::vector<Image> frames;  // all same size, >= 2

  void validate() const;
};

struct BoundingBox {
  int row0 = 0, col0 = 0, row1 = 0, col1 = 0;  // inclusive
};

/// One segmented instance: pixel set within its frame (sorted linear
/// indices row*cols + col) plus the tight bounding box.
struct InstanceMask {
  int frame_index = 0;
  std::vector<int> pixels;  // sorted, unique linear indices
  BoundingBox bbox;
  std::string instance_id;

  static InstanceMask from_binary_image(const Image& mask, int frame_index,
                                        std::string instance_id);
};

struct BackgroundModel {
  Image image;
  int frames_used = 0;
  int stride = 1;
};

struct FlowField {
  Eigen::MatrixXd vx;
  Eigen::MatrixXd vy;
};

/// Histogram bin counts for each feature block; total_dim is derived.
struct FeatureLayout {
  int of_hist_bins = 64;
  int intensity_bins = 32;
  int lbp_bins = 59;  // uniform LBP, 8 neighbors radius 1
  double of_range = 10.0;  // flow histograms span [-of_range, of_range]

  int total_dim() const {
    return 2 * (of_hist_bins + 6) + 4 * intensity_bins + 4 * lbp_bins;
  }
};

// Per-pixel temporal median over frames {0, stride, 2*stride, ...}; even
// count takes the lower of the two middle values.
BackgroundModel median_background(const FrameSequence& seq, int stride = 1);

// Single-scale Lucas-Kanade with central-difference gradients; windows with
// near-singular normal matrix (det < 1e-6) get zero flow.
FlowField lucas_kanade(const Image& prev, const Image& curr, int window = 5);

// Uniform LBP (8 neighbors, radius 1) histogram over the region,
// L1-normalized; 58 uniform-pattern bins plus one catch-all.
Eigen::VectorXd lbp_histogram(const Image& img, const std::vector<int>& region);

// Equal-width bins over [0, 255], value 255 in the last bin, L1-normalized.
Eigen::VectorXd intensity_histogram(const Image& img,
                                    const std::vector<int>& region, int bins);

// Histogram of real values over [lo, hi] with clamping, L1-normalized.
Eigen::VectorXd value_histogram(const std::vector<double>& values, int bins,
                                double lo, double hi);

// min, max, mean, population std, mean absolute deviation, range.
std::array<double, 6> flow_statistics(const std::vector<double>& values);

struct FeatureBuildReport {
  std::vector<std::string> skipped;  // instance ids without a previous frame
};

// Concatenated per-instance descriptor: flow histograms and statistics,
// four intensity histograms over the mask pixels, four LBP histograms over
// the bounding-box crops. Masks on frame 0 are skipped.
FeatureMatrix build_node_features(const FrameSequence& seq,
                                  const std::vector<InstanceMask>& masks,
                                  const BackgroundModel& background,
                                  const FeatureLayout& layout,
                                  FeatureBuildReport* report = nullptr);

// ITU-R 601 luma conversion helper for RGB inputs.
std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace graphbgs
