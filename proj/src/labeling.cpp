#include "graphbgs/labeling.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <queue>
#include <set>

namespace graphbgs {

namespace {

std::size_t intersection_size(const std::vector<int>& a,
                              const std::vector<int>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

GroundTruthFrame GroundTruthFrame::from_cdnet_image(const Image& gt,
                                                    int frame_index) {
  GroundTruthFrame out;
  out.frame_index = frame_index;
  out.rows = gt.rows;
  out.cols = gt.cols;
  std::vector<char> is_fg(gt.pixels.size(), 0);
  for (int r = 0; r < gt.rows; ++r)
    for (int c = 0; c < gt.cols; ++c) {
      const int lin = r * gt.cols + c;
      switch (gt.at(r, c)) {
        case 255:
          out.fg_pixels.push_back(lin);
          is_fg[static_cast<std::size_t>(lin)] = 1;
          break;
        case 85:   // outside region of interest
        case 170:  // unknown motion
          out.excluded.push_back(lin);
          break;
        default:
          break;  // background (incl. 50, shadow)
      }
    }
  // 8-connected foreground regions
  std::vector<char> seen(gt.pixels.size(), 0);
  for (int start : out.fg_pixels) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> region;
    std::queue<int> q;
    q.push(start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!q.empty()) {
      const int lin = q.front();
      q.pop();
      region.push_back(lin);
      const int r = lin / gt.cols, c = lin % gt.cols;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= gt.rows || cc < 0 || cc >= gt.cols) continue;
          const int nl = rr * gt.cols + cc;
          if (is_fg[static_cast<std::size_t>(nl)] &&
              !seen[static_cast<std::size_t>(nl)]) {
            seen[static_cast<std::size_t>(nl)] = 1;
            q.push(nl);
          }
        }
    }
    std::sort(region.begin(), region.end());
    out.regions.push_back(std::move(region));
  }
  return out;
}

double intersection_over_node(const std::vector<int>& mask_pixels,
                              const std::vector<int>& gt_pixels) {
  if (mask_pixels.empty())
    throw DataError("intersection_over_node: empty mask");
  return static_cast<double>(intersection_size(mask_pixels, gt_pixels)) /
         static_cast<double>(mask_pixels.size());
}

std::vector<double> region_iou(const std::vector<int>& mask_pixels,
                               const std::vector<std::vector<int>>& regions) {
  std::vector<double> iou;
  iou.reserve(regions.size());
  for (const auto& region : regions) {
    const auto inter = intersection_size(mask_pixels, region);
    const auto uni = mask_pixels.size() + region.size() - inter;
    iou.push_back(uni == 0 ? 0.0
                           : static_cast<double>(inter) /
                                 static_cast<double>(uni));
  }
  return iou;
}

NodeClass decide_label(double xi, double mu, bool regions_empty,
                       const ThresholdRule& rule) {
  if (regions_empty || mu == 0.0 || xi == 0.0) return NodeClass::background;
  if (mu > rule.mu_strong) return NodeClass::foreground;
  if (xi > rule.xi_mid && mu > rule.mu_mid) return NodeClass::foreground;
  if (xi > rule.xi_high && mu > rule.mu_low) return NodeClass::foreground;
  return NodeClass::background;
}

GroundTruthSignal build_graph_signal(
    const std::vector<InstanceMask>& masks,
    const std::vector<GroundTruthFrame>& gt_frames, const ThresholdRule& rule) {
  std::map<int, const GroundTruthFrame*> by_frame;
  for (const auto& gt : gt_frames) by_frame[gt.frame_index] = &gt;

  GroundTruthSignal signal;
  const auto n = static_cast<Eigen::Index>(masks.size());
  signal.matrix = Eigen::MatrixXd::Zero(n, 2);
  signal.labeled.assign(masks.size(), false);
  signal.decisions.resize(masks.size());

  for (std::size_t v = 0; v < masks.size(); ++v) {
    const auto it = by_frame.find(masks[v].frame_index);
    if (it == by_frame.end()) continue;
    const GroundTruthFrame& gt = *it->second;
    NodeLabelDecision d;
    d.xi = intersection_over_node(masks[v].pixels, gt.fg_pixels);
    const std::vector<double> iou = region_iou(masks[v].pixels, gt.regions);
    d.mu = iou.empty() ? 0.0 : *std::max_element(iou.begin(), iou.end());
    d.label = decide_label(d.xi, d.mu, gt.regions.empty(), rule);
    signal.decisions[v] = d;
    signal.labeled[v] = true;
    signal.matrix(static_cast<Eigen::Index>(v),
                  d.label == NodeClass::foreground ? 1 : 0) = 1.0;
  }
  return signal;
}

Confusion pixel_confusion(const std::vector<const InstanceMask*>& fg_masks,
                          const GroundTruthFrame& gt) {
  std::set<int> predicted;
  for (const auto* mask : fg_masks)
    predicted.insert(mask->pixels.begin(), mask->pixels.end());
  for (int lin : gt.excluded) predicted.erase(lin);
  std::vector<int> pred(predicted.begin(), predicted.end());
  std::vector<int> truth;
  std::set_difference(gt.fg_pixels.begin(), gt.fg_pixels.end(),
                      gt.excluded.begin(), gt.excluded.end(),
                      std::back_inserter(truth));
  Confusion c;
  c.tp = static_cast<std::int64_t>(intersection_size(pred, truth));
  c.fp = static_cast<std::int64_t>(pred.size()) - c.tp;
  c.fn = static_cast<std::int64_t>(truth.size()) - c.tp;
  return c;
}

Metrics f_measure(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw DataError("negative confusion count");
  Metrics m;
  const bool pred_empty = tp + fp == 0;
  const bool gt_empty = tp + fn == 0;
  m.precision = pred_empty
                    ? (gt_empty ? 1.0 : 0.0)
                    : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = gt_empty
                 ? (pred_empty ? 1.0 : 0.0)
                 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double pr = m.precision + m.recall;
  m.f_measure = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  return m;
}

}  // namespace graphbgs
