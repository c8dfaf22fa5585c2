#pragma once

#include <string>
#include <vector>

#include "graphbgs/experiment.hpp"
#include "graphbgs/features.hpp"

namespace graphbgs {

// Grayscale decode (PNG/PGM/JPG); color inputs are reduced by the ITU-R 601
// luma transform.
Image load_image(const std::string& path);
void save_image(const Image& image, const std::string& path);

// All images in a directory ordered by filename (zero-padded convention).
FrameSequence load_frame_directory(const std::string& dir,
                                   const std::string& sequence_id);

// Masks from a directory of per-instance binary images named
// "<frame>_<tag>.png" (first integer is the frame number), or from a JSON
// index {"instances": [{"id", "frame", "runs": [[start, len], ...]}]}.
// frame_base is subtracted from file frame numbers (CDNet counts from 1).
std::vector<InstanceMask> load_masks(const std::string& path, int frame_base,
                                     int rows, int cols);

// CDNet-encoded ground-truth images from a directory; the frame number is
// the first integer in each filename, offset by frame_base.
std::vector<GroundTruthFrame> load_gt_directory(const std::string& dir,
                                                int frame_base);

// Experiment configuration from a JSON document (paths, layout, solver
// parameters, plan, seed).
ExperimentConfig load_experiment_config(const std::string& path,
                                        std::vector<SequenceData>* sequences);

}  // namespace graphbgs
