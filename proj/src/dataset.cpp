#include "graphbgs/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <limits>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <nlohmann/json.hpp>

#include "graphbgs/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace graphbgs {

Image load_image(const std::string& path) {
  cv::Mat mat = cv::imread(path, cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw DataError("cannot read image: " + path);
  cv::Mat gray;
  if (mat.channels() == 1) {
    gray = mat;
  } else if (mat.channels() == 3) {
    cv::cvtColor(mat, gray, cv::COLOR_BGR2GRAY);  // ITU-R 601 weights
  } else if (mat.channels() == 4) {
    cv::cvtColor(mat, gray, cv::COLOR_BGRA2GRAY);
  } else {
    throw DataError("unsupported channel count in " + path);
  }
  if (gray.depth() != CV_8U) gray.convertTo(gray, CV_8U);
  Image img(gray.rows, gray.cols);
  for (int r = 0; r < gray.rows; ++r)
    for (int c = 0; c < gray.cols; ++c)
      img.at(r, c) = gray.at<std::uint8_t>(r, c);
  return img;
}

void save_image(const Image& image, const std::string& path) {
  cv::Mat mat(image.rows, image.cols, CV_8UC1);
  for (int r = 0; r < image.rows; ++r)
    for (int c = 0; c < image.cols; ++c)
      mat.at<std::uint8_t>(r, c) = image.at(r, c);
  if (!cv::imwrite(path, mat)) throw DataError("cannot write image: " + path);
}

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm" || ext == ".jpg" || ext == ".jpeg" ||
         ext == ".bmp";
}

std::vector<fs::path> sorted_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_image_file(entry.path()))
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

// First run of digits in the filename, or -1.
int filename_number(const fs::path& p) {
  const std::string stem = p.stem().string();
  std::size_t i = 0;
  while (i < stem.size() && !std::isdigit(static_cast<unsigned char>(stem[i])))
    ++i;
  if (i == stem.size()) return -1;
  std::size_t end = i;
  while (end < stem.size() &&
         std::isdigit(static_cast<unsigned char>(stem[end])))
    ++end;
  return std::stoi(stem.substr(i, end - i));
}

}  // namespace

FrameSequence load_frame_directory(const std::string& dir,
                                   const std::string& sequence_id) {
  FrameSequence seq;
  seq.sequence_id = sequence_id;
  for (const auto& path : sorted_images(dir))
    seq.frames.push_back(load_image(path.string()));
  seq.validate();
  return seq;
}

std::vector<InstanceMask> load_masks(const std::string& path, int frame_base,
                                     int rows, int cols) {
  std::vector<InstanceMask> masks;
  if (fs::is_directory(path)) {
    for (const auto& file : sorted_images(path)) {
      const int number = filename_number(file);
      if (number < 0)
        throw DataError("mask filename has no frame number: " +
                        file.string());
      masks.push_back(InstanceMask::from_binary_image(
          load_image(file.string()), number - frame_base,
          file.stem().string()));
    }
  } else {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    json doc;
    try {
      is >> doc;
    } catch (const json::exception& e) {
      throw DataError("bad mask index JSON: " + std::string(e.what()));
    }
    for (const auto& inst : doc.at("instances")) {
      InstanceMask mask;
      mask.instance_id = inst.at("id").get<std::string>();
      mask.frame_index = inst.at("frame").get<int>() - frame_base;
      mask.bbox = {std::numeric_limits<int>::max(),
                   std::numeric_limits<int>::max(), -1, -1};
      for (const auto& run : inst.at("runs")) {
        const int start = run.at(0).get<int>();
        const int len = run.at(1).get<int>();
        for (int lin = start; lin < start + len; ++lin) {
          if (lin < 0 || lin >= rows * cols)
            throw DataError("mask run out of bounds in '" + mask.instance_id +
                            "'");
          mask.pixels.push_back(lin);
          const int r = lin / cols, c = lin % cols;
          mask.bbox.row0 = std::min(mask.bbox.row0, r);
          mask.bbox.col0 = std::min(mask.bbox.col0, c);
          mask.bbox.row1 = std::max(mask.bbox.row1, r);
          mask.bbox.col1 = std::max(mask.bbox.col1, c);
        }
      }
      if (mask.pixels.empty())
        throw DataError("empty instance '" + mask.instance_id + "' in " +
                        path);
      std::sort(mask.pixels.begin(), mask.pixels.end());
      masks.push_back(std::move(mask));
    }
  }
  return masks;
}

std::vector<GroundTruthFrame> load_gt_directory(const std::string& dir,
                                                int frame_base) {
  std::vector<GroundTruthFrame> gts;
  for (const auto& file : sorted_images(dir)) {
    const int number = filename_number(file);
    if (number < 0)
      throw DataError("GT filename has no frame number: " + file.string());
    gts.push_back(GroundTruthFrame::from_cdnet_image(load_image(file.string()),
                                                     number - frame_base));
  }
  return gts;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        std::vector<SequenceData>* sequences) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  json doc;
  try {
    is >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("bad config JSON: " + std::string(e.what()));
  }

  ExperimentConfig config;
  try {
    if (doc.contains("layout")) {
      const auto& l = doc["layout"];
      config.layout.of_hist_bins =
          l.value("of_hist_bins", config.layout.of_hist_bins);
      config.layout.intensity_bins =
          l.value("intensity_bins", config.layout.intensity_bins);
      config.layout.of_range = l.value("of_range", config.layout.of_range);
    }
    config.k = doc.value("k", config.k);
    config.solver.epsilon = doc.value("epsilon", config.solver.epsilon);
    config.solver.beta = doc.value("beta", config.solver.beta);
    config.median_stride = doc.value("median_stride", config.median_stride);
    config.master_seed = doc.value("master_seed", config.master_seed);
    const std::string method = doc.value("method", std::string("auto"));
    if (method == "closed")
      config.method = SolveMethod::closed;
    else if (method == "iterative")
      config.method = SolveMethod::iterative;
    else if (method == "auto")
      config.method = SolveMethod::automatic;
    else
      throw ConfigError("unknown solve method: " + method);
    if (doc.contains("plan")) {
      const auto& p = doc["plan"];
      if (p.contains("densities"))
        config.plan.densities = p["densities"].get<std::vector<double>>();
      config.plan.trials_per_density =
          p.value("trials_per_density", config.plan.trials_per_density);
    }
    config.plan.validate();

    if (sequences) {
      sequences->clear();
      for (const auto& s : doc.at("sequences")) {
        SequenceData data;
        data.name = s.at("name").get<std::string>();
        data.frames = load_frame_directory(s.at("frames_dir").get<std::string>(),
                                           data.name);
        const int frame_base = s.value("frame_base", 0);
        const Image& first = data.frames.frames.front();
        data.masks = load_masks(s.at("masks").get<std::string>(), frame_base,
                                first.rows, first.cols);
        if (s.contains("gt_dir"))
          data.gt =
              load_gt_directory(s.at("gt_dir").get<std::string>(), frame_base);
        sequences->push_back(std::move(data));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("config error: " + std::string(e.what()));
  }
  return config;
}

}  // namespace graphbgs
