#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "graphbgs/features.hpp"

using namespace graphbgs;

namespace {

Image column_texture(int rows, int cols, int shift = 0) {
  // intensity depends only on the column, shifted by `shift`
  Image img(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      img.at(r, c) = static_cast<std::uint8_t>((31 * (c - shift) % 97 + 97) % 97 + 60);
  return img;
}

InstanceMask rect_mask(int rows, int cols, int r0, int c0, int r1, int c1,
                       int frame, std::string id) {
  Image m(rows, cols);
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) m.at(r, c) = 255;
  return InstanceMask::from_binary_image(m, frame, std::move(id));
}

}  // namespace

TEST_CASE("temporal median background") {
  FrameSequence seq;
  seq.sequence_id = "s";
  for (std::uint8_t v : {30, 10, 20}) seq.frames.emplace_back(2, 2, v);
  const BackgroundModel bg = median_background(seq);
  CHECK(bg.frames_used == 3);
  CHECK(bg.image.at(0, 0) == 20);
  CHECK(bg.image.at(1, 1) == 20);

  // even count takes the lower middle value
  FrameSequence even;
  even.sequence_id = "e";
  for (std::uint8_t v : {40, 10, 30, 20}) even.frames.emplace_back(1, 1, v);
  CHECK(median_background(even).image.at(0, 0) == 20);

  // stride 2 keeps frames 0 and 2 only
  const BackgroundModel strided = median_background(seq, 2);
  CHECK(strided.frames_used == 2);
  CHECK(strided.image.at(0, 0) == 20);  // lower of {30, 20}

  CHECK_THROWS_AS(median_background(seq, 0), ConfigError);
  FrameSequence single;
  single.sequence_id = "one";
  single.frames.emplace_back(2, 2);
  CHECK_THROWS_AS(median_background(single), DataError);
}

TEST_CASE("median is per pixel") {
  FrameSequence seq;
  seq.sequence_id = "px";
  for (int t = 0; t < 3; ++t) {
    Image f(1, 2);
    f.at(0, 0) = static_cast<std::uint8_t>(10 * (t + 1));      // 10, 20, 30
    f.at(0, 1) = static_cast<std::uint8_t>(100 - 10 * t);      // 100, 90, 80
    seq.frames.push_back(f);
  }
  const BackgroundModel bg = median_background(seq);
  CHECK(bg.image.at(0, 0) == 20);
  CHECK(bg.image.at(0, 1) == 90);
}

TEST_CASE("lucas-kanade on identical frames is zero") {
  const Image img = column_texture(12, 12);
  const FlowField flow = lucas_kanade(img, img);
  CHECK(flow.vx.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(flow.vy.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("lucas-kanade recovers a one-pixel horizontal shift") {
  // smooth texture with varying gradient directions so the normal matrix
  // stays well conditioned; curr is prev moved one pixel to the right
  const auto texture = [](int r, int c) {
    return static_cast<std::uint8_t>(
        128 + 55.0 * std::sin(0.3 * c) + 55.0 * std::sin(0.3 * r));
  };
  Image prev(24, 32), curr(24, 32);
  for (int r = 0; r < 24; ++r)
    for (int c = 0; c < 32; ++c) {
      prev.at(r, c) = texture(r, c);
      curr.at(r, c) = texture(r, c - 1);
    }
  const FlowField flow = lucas_kanade(prev, curr);
  // pointwise, discretization keeps interior estimates near (1, 0)
  double sum_vx = 0.0, sum_vy = 0.0;
  int count = 0;
  for (int r = 8; r < 16; ++r)
    for (int c = 8; c < 24; ++c) {
      CHECK(std::abs(flow.vx(r, c) - 1.0) < 0.35);
      CHECK(std::abs(flow.vy(r, c)) < 0.35);
      sum_vx += flow.vx(r, c);
      sum_vy += flow.vy(r, c);
      ++count;
    }
  // averaged over the interior the estimate is much tighter
  CHECK(std::abs(sum_vx / count - 1.0) < 0.05);
  CHECK(std::abs(sum_vy / count) < 0.05);
}

TEST_CASE("lucas-kanade leaves degenerate windows at zero") {
  const Image flat_a(10, 10, 100);
  const Image flat_b(10, 10, 120);
  const FlowField flow = lucas_kanade(flat_a, flat_b);
  CHECK(flow.vx.cwiseAbs().maxCoeff() == 0.0);
  CHECK(flow.vy.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(lucas_kanade(flat_a, Image(5, 5)), DataError);
  CHECK_THROWS_AS(lucas_kanade(flat_a, flat_b, 4), ConfigError);
}

TEST_CASE("lbp histogram of a constant image concentrates in bin 0") {
  const Image flat(8, 8, 77);
  std::vector<int> region;
  for (int i = 0; i < 64; ++i) region.push_back(i);
  const Eigen::VectorXd hist = lbp_histogram(flat, region);
  CHECK(hist(0) == doctest::Approx(1.0));
  CHECK(hist.sum() == doctest::Approx(1.0));
  CHECK(hist.tail(58).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lbp checkerboard dark interior pixels land in the catch-all bin") {
  Image board(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) board.at(r, c) = ((r + c) % 2) ? 255 : 0;
  // interior dark pixels: the 4 edge neighbors are brighter, the 4
  // diagonals equal, giving code 10101010 with 8 transitions
  std::vector<int> region;
  for (int r = 1; r < 7; ++r)
    for (int c = 1; c < 7; ++c)
      if ((r + c) % 2 == 0) region.push_back(r * 8 + c);
  const Eigen::VectorXd hist = lbp_histogram(board, region);
  CHECK(hist(58) == doctest::Approx(1.0));
}

TEST_CASE("lbp histogram properties") {
  const Image img = column_texture(10, 10);
  std::vector<int> region;
  for (int i = 0; i < 100; ++i) region.push_back(i);
  const Eigen::VectorXd hist = lbp_histogram(img, region);
  CHECK(hist.size() == 59);
  CHECK(hist.sum() == doctest::Approx(1.0));
  CHECK(hist.minCoeff() >= 0.0);
  CHECK_THROWS_AS(lbp_histogram(img, {}), DataError);
}

TEST_CASE("intensity histogram") {
  Image img(1, 4);
  img.pixels = {0, 255, 255, 128};
  const std::vector<int> all{0, 1, 2, 3};

  const Eigen::VectorXd h4 = intensity_histogram(img, all, 4);
  CHECK(h4(0) == doctest::Approx(0.25));   // value 0
  CHECK(h4(2) == doctest::Approx(0.25));   // value 128
  CHECK(h4(3) == doctest::Approx(0.5));    // the two 255s
  CHECK(h4.sum() == doctest::Approx(1.0));

  // 255 maps into the last bin for any bin count
  for (int bins : {1, 2, 32, 256})
    CHECK(intensity_histogram(img, {1}, bins)(bins - 1) ==
          doctest::Approx(1.0));

  CHECK_THROWS_AS(intensity_histogram(img, {}, 4), DataError);
  CHECK_THROWS_AS(intensity_histogram(img, all, 0), ConfigError);
}

TEST_CASE("value histogram clamps out-of-range samples") {
  const Eigen::VectorXd hist =
      value_histogram({-100.0, -1.0, 0.0, 0.9, 100.0}, 2, -1.0, 1.0);
  CHECK(hist(0) == doctest::Approx(0.4));
  CHECK(hist(1) == doctest::Approx(0.6));
  CHECK_THROWS_AS(value_histogram({}, 2, 0.0, 1.0), DataError);
  CHECK_THROWS_AS(value_histogram({1.0}, 2, 1.0, 1.0), ConfigError);
}

TEST_CASE("flow statistics") {
  const auto constant = flow_statistics({1.0, 1.0, 1.0});
  CHECK(constant == std::array<double, 6>{1, 1, 1, 0, 0, 0});

  const auto pair = flow_statistics({0.0, 2.0});
  CHECK(pair == std::array<double, 6>{0, 2, 1, 1, 1, 2});

  const auto trio = flow_statistics({-1.0, 0.0, 1.0});
  CHECK(trio[0] == -1.0);
  CHECK(trio[1] == 1.0);
  CHECK(trio[2] == doctest::Approx(0.0));
  CHECK(trio[3] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(trio[4] == doctest::Approx(2.0 / 3.0));
  CHECK(trio[5] == 2.0);

  CHECK_THROWS_AS(flow_statistics({}), DataError);
}

TEST_CASE("instance mask from binary image") {
  Image m(4, 5);
  m.at(1, 2) = 255;
  m.at(2, 3) = 1;
  const InstanceMask mask = InstanceMask::from_binary_image(m, 3, "a");
  CHECK(mask.frame_index == 3);
  CHECK(mask.pixels == std::vector<int>{1 * 5 + 2, 2 * 5 + 3});
  CHECK(mask.bbox.row0 == 1);
  CHECK(mask.bbox.col0 == 2);
  CHECK(mask.bbox.row1 == 2);
  CHECK(mask.bbox.col1 == 3);
  CHECK_THROWS_AS(InstanceMask::from_binary_image(Image(4, 5), 0, "b"),
                  DataError);
}

TEST_CASE("node features have the declared layout") {
  FrameSequence seq;
  seq.sequence_id = "layout";
  for (int t = 0; t < 3; ++t) seq.frames.push_back(column_texture(20, 30, t));
  const BackgroundModel bg = median_background(seq);

  const FeatureLayout layout;
  CHECK(layout.total_dim() == 504);

  std::vector<InstanceMask> masks{rect_mask(20, 30, 4, 6, 10, 14, 1, "m0"),
                                  rect_mask(20, 30, 2, 2, 8, 9, 2, "m1")};
  const FeatureMatrix fm = build_node_features(seq, masks, bg, layout);
  CHECK(fm.n() == 2);
  CHECK(fm.dim() == 504);
  CHECK(fm.node_ids == std::vector<std::string>{"m0", "m1"});
  CHECK(fm.data.allFinite());

  // every histogram block is a probability vector
  for (Eigen::Index i = 0; i < 2; ++i) {
    Eigen::Index pos = 0;
    for (int block : {64, -6, 64, -6, 32, 32, 32, 32, 59, 59, 59, 59}) {
      if (block < 0) {
        pos += -block;  // statistics block, not normalized
        continue;
      }
      CHECK(fm.data.row(i).segment(pos, block).sum() == doctest::Approx(1.0));
      CHECK(fm.data.row(i).segment(pos, block).minCoeff() >= 0.0);
      pos += block;
    }
    CHECK(pos == 504);
  }
}

TEST_CASE("identical texture at two locations gives identical features") {
  // texture depends only on the column, so two masks with the same column
  // span and shape must produce the same descriptor
  FrameSequence seq;
  seq.sequence_id = "shift";
  for (int t = 0; t < 3; ++t) seq.frames.push_back(column_texture(32, 32, t));
  const BackgroundModel bg = median_background(seq);
  std::vector<InstanceMask> masks{rect_mask(32, 32, 5, 10, 10, 20, 2, "top"),
                                  rect_mask(32, 32, 20, 10, 25, 20, 2, "bot")};
  const FeatureMatrix fm =
      build_node_features(seq, masks, bg, FeatureLayout{});
  CHECK((fm.data.row(0) - fm.data.row(1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("frame-zero masks are skipped with a report entry") {
  FrameSequence seq;
  seq.sequence_id = "skip";
  for (int t = 0; t < 2; ++t) seq.frames.push_back(column_texture(10, 10, t));
  const BackgroundModel bg = median_background(seq);
  std::vector<InstanceMask> masks{rect_mask(10, 10, 1, 1, 4, 4, 0, "first"),
                                  rect_mask(10, 10, 1, 1, 4, 4, 1, "second")};
  FeatureBuildReport report;
  const FeatureMatrix fm =
      build_node_features(seq, masks, bg, FeatureLayout{}, &report);
  CHECK(fm.n() == 1);
  CHECK(fm.node_ids == std::vector<std::string>{"second"});
  CHECK(report.skipped == std::vector<std::string>{"first"});
}

TEST_CASE("feature builder input validation") {
  FrameSequence seq;
  seq.sequence_id = "bad";
  for (int t = 0; t < 2; ++t) seq.frames.push_back(column_texture(10, 10, t));
  const BackgroundModel bg = median_background(seq);
  std::vector<InstanceMask> past{rect_mask(10, 10, 1, 1, 2, 2, 5, "late")};
  CHECK_THROWS_AS(build_node_features(seq, past, bg, FeatureLayout{}),
                  DataError);

  FeatureLayout bad_lbp;
  bad_lbp.lbp_bins = 16;
  std::vector<InstanceMask> ok{rect_mask(10, 10, 1, 1, 2, 2, 1, "m")};
  CHECK_THROWS_AS(build_node_features(seq, ok, bg, bad_lbp), ConfigError);

  BackgroundModel wrong;
  wrong.image = Image(5, 5);
  CHECK_THROWS_AS(build_node_features(seq, ok, wrong, FeatureLayout{}),
                  DataError);
}

TEST_CASE("luma conversion") {
  CHECK(luma601(0, 0, 0) == 0);
  CHECK(luma601(255, 255, 255) == 255);
  CHECK(luma601(255, 0, 0) == 76);
  CHECK(luma601(0, 255, 0) == 150);
  CHECK(luma601(0, 0, 255) == 29);
}
