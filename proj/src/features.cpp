#include "graphbgs/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace graphbgs {

std::uint8_t Image::at_clamped(int r, int c) const {
  r = std::clamp(r, 0, rows - 1);
  c = std::clamp(c, 0, cols - 1);
  return at(r, c);
}

void FrameSequence::validate() const {
  if (frames.size() < 2)
    throw DataError("sequence '" + sequence_id + "' needs at least 2 frames");
  for (const auto& f : frames)
    if (!f.same_size(frames.front()))
      throw DataError("sequence '" + sequence_id + "' has mixed frame sizes");
}

InstanceMask InstanceMask::from_binary_image(const Image& mask, int frame_index,
                                             std::string instance_id) {
  InstanceMask out;
  out.frame_index = frame_index;
  out.instance_id = std::move(instance_id);
  out.bbox = {mask.rows, mask.cols, -1, -1};
  for (int r = 0; r < mask.rows; ++r)
    for (int c = 0; c < mask.cols; ++c)
      if (mask.at(r, c) != 0) {
        out.pixels.push_back(r * mask.cols + c);
        out.bbox.row0 = std::min(out.bbox.row0, r);
        out.bbox.col0 = std::min(out.bbox.col0, c);
        out.bbox.row1 = std::max(out.bbox.row1, r);
        out.bbox.col1 = std::max(out.bbox.col1, c);
      }
  if (out.pixels.empty())
    throw DataError("empty instance mask '" + out.instance_id + "'");
  return out;
}

BackgroundModel median_background(const FrameSequence& seq, int stride) {
  seq.validate();
  if (stride < 1) throw ConfigError("median stride must be >= 1");
  std::vector<const Image*> sampled;
  for (std::size_t t = 0; t < seq.frames.size(); t += stride)
    sampled.push_back(&seq.frames[t]);

  BackgroundModel bg;
  bg.stride = stride;
  bg.frames_used = static_cast<int>(sampled.size());
  const Image& first = seq.frames.front();
  bg.image = Image(first.rows, first.cols);
  std::vector<std::uint8_t> series(sampled.size());
  for (int r = 0; r < first.rows; ++r)
    for (int c = 0; c < first.cols; ++c) {
      for (std::size_t k = 0; k < sampled.size(); ++k)
        series[k] = sampled[k]->at(r, c);
      // lower-middle median keeps integer values
      const std::size_t mid = (series.size() - 1) / 2;
      std::nth_element(series.begin(), series.begin() + mid, series.end());
      bg.image.at(r, c) = series[mid];
    }
  return bg;
}

FlowField lucas_kanade(const Image& prev, const Image& curr, int window) {
  if (!prev.same_size(curr))
    throw DataError("lucas_kanade: frame size mismatch");
  if (window < 1 || window % 2 == 0)
    throw ConfigError("lucas_kanade: window must be odd and positive");
  const int rows = prev.rows, cols = prev.cols;
  Eigen::MatrixXd ix(rows, cols), iy(rows, cols), it(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      ix(r, c) = 0.5 * (static_cast<double>(prev.at_clamped(r, c + 1)) -
                        prev.at_clamped(r, c - 1));
      iy(r, c) = 0.5 * (static_cast<double>(prev.at_clamped(r + 1, c)) -
                        prev.at_clamped(r - 1, c));
      it(r, c) = static_cast<double>(curr.at(r, c)) - prev.at(r, c);
    }
  FlowField flow;
  flow.vx = Eigen::MatrixXd::Zero(rows, cols);
  flow.vy = Eigen::MatrixXd::Zero(rows, cols);
  const int half = window / 2;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double sxx = 0, sxy = 0, syy = 0, sxt = 0, syt = 0;
      for (int dr = -half; dr <= half; ++dr)
        for (int dc = -half; dc <= half; ++dc) {
          const int rr = std::clamp(r + dr, 0, rows - 1);
          const int cc = std::clamp(c + dc, 0, cols - 1);
          const double gx = ix(rr, cc), gy = iy(rr, cc), gt = it(rr, cc);
          sxx += gx * gx;
          sxy += gx * gy;
          syy += gy * gy;
          sxt += gx * gt;
          syt += gy * gt;
        }
      const double det = sxx * syy - sxy * sxy;
      if (det < 1e-6) continue;  // degenerate window, leave zero
      flow.vx(r, c) = (-syy * sxt + sxy * syt) / det;
      flow.vy(r, c) = (sxy * sxt - sxx * syt) / det;
    }
  return flow;
}

namespace {

// Circular neighbor order for radius-1 LBP.
constexpr int kLbpOffsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, 1},
                                   {1, 1},   {1, 0},  {1, -1}, {0, -1}};

// Codes with at most 2 circular transitions get their own bin; the rest
// share the final catch-all bin.
const std::array<int, 256>& uniform_lbp_table() {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    int next = 0;
    for (int code = 0; code < 256; ++code) {
      int transitions = 0;
      for (int b = 0; b < 8; ++b)
        transitions += ((code >> b) & 1) != ((code >> ((b + 1) % 8)) & 1);
      t[code] = transitions <= 2 ? next++ : 58;
    }
    return t;
  }();
  return table;
}

}  // namespace

Eigen::VectorXd lbp_histogram(const Image& img,
                              const std::vector<int>& region) {
  if (region.empty()) throw DataError("lbp_histogram: empty region");
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(59);
  const auto& table = uniform_lbp_table();
  for (int lin : region) {
    const int r = lin / img.cols;
    const int c = lin % img.cols;
    const std::uint8_t center = img.at(r, c);
    int code = 0;
    for (int b = 0; b < 8; ++b)
      if (img.at_clamped(r + kLbpOffsets[b][0], c + kLbpOffsets[b][1]) >
          center)
        code |= 1 << b;
    hist(table[code]) += 1.0;
  }
  return hist / hist.sum();
}

Eigen::VectorXd intensity_histogram(const Image& img,
                                    const std::vector<int>& region, int bins) {
  if (region.empty()) throw DataError("intensity_histogram: empty region");
  if (bins < 1) throw ConfigError("intensity_histogram: bins must be >= 1");
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(bins);
  for (int lin : region) {
    const int v = img.pixels[static_cast<std::size_t>(lin)];
    hist(std::min(v * bins / 256, bins - 1)) += 1.0;
  }
  return hist / hist.sum();
}

Eigen::VectorXd value_histogram(const std::vector<double>& values, int bins,
                                double lo, double hi) {
  if (values.empty()) throw DataError("value_histogram: empty input");
  if (bins < 1 || !(hi > lo)) throw ConfigError("value_histogram: bad bins/range");
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(bins);
  for (double v : values) {
    auto bin = static_cast<Eigen::Index>((v - lo) / (hi - lo) * bins);
    bin = std::clamp<Eigen::Index>(bin, 0, bins - 1);
    hist(bin) += 1.0;
  }
  return hist / hist.sum();
}

std::array<double, 6> flow_statistics(const std::vector<double>& values) {
  if (values.empty()) throw DataError("flow_statistics: empty input");
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double mn = *mn_it, mx = *mx_it;
  const double n = static_cast<double>(values.size());
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0, mad = 0.0;
  for (double v : values) {
    var += (v - mean) * (v - mean);
    mad += std::abs(v - mean);
  }
  return {mn, mx, mean, std::sqrt(var / n), mad / n, mx - mn};
}

namespace {

Image abs_diff(const Image& a, const Image& b) {
  Image out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    out.pixels[i] = static_cast<std::uint8_t>(
        std::abs(static_cast<int>(a.pixels[i]) - static_cast<int>(b.pixels[i])));
  return out;
}

std::vector<int> bbox_region(const BoundingBox& box, int cols) {
  std::vector<int> region;
  region.reserve(static_cast<std::size_t>(box.row1 - box.row0 + 1) *
                 (box.col1 - box.col0 + 1));
  for (int r = box.row0; r <= box.row1; ++r)
    for (int c = box.col0; c <= box.col1; ++c) region.push_back(r * cols + c);
  return region;
}

}  // namespace

FeatureMatrix build_node_features(const FrameSequence& seq,
                                  const std::vector<InstanceMask>& masks,
                                  const BackgroundModel& background,
                                  const FeatureLayout& layout,
                                  FeatureBuildReport* report) {
  seq.validate();
  if (!background.image.same_size(seq.frames.front()))
    throw DataError("background model size does not match sequence");
  if (layout.lbp_bins != 59)
    throw ConfigError("uniform P8R1 LBP has exactly 59 bins");

  std::map<int, FlowField> flow_cache;
  std::vector<Eigen::VectorXd> rows;
  std::vector<std::string> ids;
  if (report) report->skipped.clear();

  for (const auto& mask : masks) {
    if (mask.frame_index >= static_cast<int>(seq.frames.size()))
      throw DataError("mask '" + mask.instance_id +
                      "' references a frame past the sequence end");
    if (mask.frame_index <= 0) {
      // no predecessor frame for optical flow
      if (report) report->skipped.push_back(mask.instance_id);
      continue;
    }
    const Image& curr = seq.frames[static_cast<std::size_t>(mask.frame_index)];
    const Image& prev =
        seq.frames[static_cast<std::size_t>(mask.frame_index) - 1];
    auto it = flow_cache.find(mask.frame_index);
    if (it == flow_cache.end())
      it = flow_cache.emplace(mask.frame_index, lucas_kanade(prev, curr))
               .first;
    const FlowField& flow = it->second;

    std::vector<double> vx, vy;
    vx.reserve(mask.pixels.size());
    vy.reserve(mask.pixels.size());
    for (int lin : mask.pixels) {
      const int r = lin / curr.cols, c = lin % curr.cols;
      vx.push_back(flow.vx(r, c));
      vy.push_back(flow.vy(r, c));
    }

    const Image diff = abs_diff(curr, background.image);
    const std::vector<int> crop = bbox_region(mask.bbox, curr.cols);

    Eigen::VectorXd row(layout.total_dim());
    Eigen::Index pos = 0;
    const auto append = [&](const Eigen::VectorXd& block) {
      row.segment(pos, block.size()) = block;
      pos += block.size();
    };
    const auto append_stats = [&](const std::array<double, 6>& s) {
      for (double v : s) row(pos++) = v;
    };
    append(value_histogram(vx, layout.of_hist_bins, -layout.of_range,
                           layout.of_range));
    append_stats(flow_statistics(vx));
    append(value_histogram(vy, layout.of_hist_bins, -layout.of_range,
                           layout.of_range));
    append_stats(flow_statistics(vy));
    append(intensity_histogram(curr, mask.pixels, layout.intensity_bins));
    append(intensity_histogram(prev, mask.pixels, layout.intensity_bins));
    append(intensity_histogram(background.image, mask.pixels,
                               layout.intensity_bins));
    append(intensity_histogram(diff, mask.pixels, layout.intensity_bins));
    append(lbp_histogram(curr, crop));
    append(lbp_histogram(prev, crop));
    append(lbp_histogram(background.image, crop));
    append(lbp_histogram(diff, crop));
    rows.push_back(std::move(row));
    ids.push_back(mask.instance_id);
  }

  FeatureMatrix fm;
  fm.node_ids = std::move(ids);
  fm.data.resize(static_cast<Eigen::Index>(rows.size()), layout.total_dim());
  for (std::size_t i = 0; i < rows.size(); ++i)
    fm.data.row(static_cast<Eigen::Index>(i)) = rows[i];
  return fm;
}

std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>(
      std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

}  // namespace graphbgs
