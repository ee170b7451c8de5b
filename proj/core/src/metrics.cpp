#include "splatseg/metrics.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace splatseg {

MaskScore score_mask(const LabelMask& pred, const LabelMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw InputError(fmt::format("view {}: prediction is {}x{} but ground truth is {}x{}", gt.view_id, pred.width,
                                     pred.height, gt.width, gt.height));
    }
    std::map<std::uint16_t, std::pair<std::size_t, std::size_t>> counts; // label -> (intersection, union)
    std::size_t correct = 0;
    for (std::size_t k = 0; k < gt.labels.size(); ++k) {
        const std::uint16_t p = pred.labels[k];
        const std::uint16_t g = gt.labels[k];
        if (p == g) ++correct;
        if (g != 0) {
            ++counts[g].second;
            if (p == g) ++counts[g].first;
        }
        if (p != 0 && p != g) ++counts[p].second;
    }
    MaskScore s;
    s.view_id = gt.view_id;
    s.accuracy = gt.labels.empty() ? 100.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(gt.labels.size());
    if (counts.empty()) {
        s.iou = 100.0;
    } else {
        double sum = 0.0;
        for (const auto& [label, iu] : counts) sum += static_cast<double>(iu.first) / static_cast<double>(iu.second);
        s.iou = 100.0 * sum / static_cast<double>(counts.size());
    }
    return s;
}

EvalReport summarize(std::vector<MaskScore> scores) {
    EvalReport r;
    r.views = std::move(scores);
    std::sort(r.views.begin(), r.views.end(), [](const MaskScore& a, const MaskScore& b) { return a.view_id < b.view_id; });
    if (r.views.empty()) return r;
    for (const MaskScore& s : r.views) {
        r.mean_iou += s.iou;
        r.mean_accuracy += s.accuracy;
    }
    r.mean_iou /= static_cast<double>(r.views.size());
    r.mean_accuracy /= static_cast<double>(r.views.size());
    return r;
}

EvalReport evaluate_mask_dirs(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir) {
    if (!std::filesystem::is_directory(gt_dir)) throw IoError(fmt::format("'{}' is not a directory", gt_dir.string()));
    std::vector<MaskScore> scores;
    for (const auto& entry : std::filesystem::directory_iterator(gt_dir)) {
        if (entry.path().extension() != ".png") continue;
        const std::string stem = entry.path().stem().string();
        int view_id = 0;
        try {
            std::size_t used = 0;
            view_id = std::stoi(stem, &used);
            if (used != stem.size()) continue;
        } catch (const std::exception&) {
            continue;
        }
        const auto pred_path = pred_dir / entry.path().filename();
        if (!std::filesystem::exists(pred_path)) {
            throw LookupError(fmt::format("missing prediction '{}'", pred_path.string()));
        }
        scores.push_back(score_mask(load_label_mask(pred_path, view_id), load_label_mask(entry.path(), view_id)));
    }
    if (scores.empty()) throw LookupError(fmt::format("no ground-truth masks in '{}'", gt_dir.string()));
    return summarize(std::move(scores));
}

std::string format_report(const EvalReport& report) {
    std::string out = fmt::format("{:>8} {:>9} {:>9}\n", "view", "IoU", "Acc");
    for (const MaskScore& s : report.views) out += fmt::format("{:>8} {:>9.3f} {:>9.3f}\n", s.view_id, s.iou, s.accuracy);
    out += fmt::format("mIoU={:.3f} mAcc={:.3f}\n", report.mean_iou, report.mean_accuracy);
    return out;
}

} // namespace splatseg
