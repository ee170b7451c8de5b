#pragma once

#include "splatseg/label_mask.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace splatseg {

struct MaskScore {
    int view_id = 0;
    double iou = 0.0;      // percent, mean over foreground labels present in either mask
    double accuracy = 0.0; // percent of pixels with matching labels
};

/// IoU is averaged over labels >= 1 that appear in pred or gt; a view where
/// both masks are all background scores 100.
MaskScore score_mask(const LabelMask& pred, const LabelMask& gt);

struct EvalReport {
    std::vector<MaskScore> views;
    double mean_iou = 0.0;
    double mean_accuracy = 0.0;
};

/// Scores every `{id}.png` in gt_dir against the same file name in pred_dir.
/// Throws LookupError when a prediction is missing.
EvalReport evaluate_mask_dirs(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir);
EvalReport summarize(std::vector<MaskScore> scores);

std::string format_report(const EvalReport& report);

} // namespace splatseg
