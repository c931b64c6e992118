#pragma once

#include <string>
#include <vector>

#include "vmag/magnify.hpp"
#include "vmag/metrics.hpp"
#include "vmag/synth.hpp"

namespace vmag {

// Scene specs are JSON objects with keys mirroring SceneSpec; unknown keys
// are rejected so typos fail loudly.
SceneSpec parse_scene_spec(const std::string& json_text);
SceneSpec load_scene_spec(const std::string& path);

// Ground-truth sidecar for a synthesized scene: per-frame disk displacement
// plus scenario events and the scene's parameters.
void write_ground_truth(const std::string& path, const SceneSpec& spec, const GroundTruth& truth);

// Magnification run log, one JSON object per line: a config record first,
// then a record per frame, with a warning record inserted when the tracked
// mask collapses.
void write_magnify_log(const std::string& path, const MagnifyConfig& config,
                       const std::vector<FrameRecord>& records);

// Recover the clip length recorded in a magnify log's config line.
int read_clip_length_from_log(const std::string& path);

// Metric report serializations. Infinite values (PSNR of identical frames)
// appear as the string "inf".
std::string metric_report_json_text(const MetricReport& report);
std::string metric_report_csv_text(const MetricReport& report);
void write_metric_report(const std::string& json_path, const std::string& csv_path,
                         const MetricReport& report);

}  // namespace vmag
