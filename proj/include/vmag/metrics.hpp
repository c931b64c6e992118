#pragma once

#include <vector>

#include "vmag/flow.hpp"
#include "vmag/types.hpp"

namespace vmag {

// Mean over pixels of the L1 difference between alpha-scaled original flow
// and the flow observed in the magnified sequence (sum of |du| + |dv| per
// pixel, averaged over the field).
double motion_error(const FlowField& flow_orig, const FlowField& flow_mag, double alpha);

// Deviation of the realized magnification factor from alpha, where the
// factor is the ratio of whole-field L2 norms of the two flows.
double magnification_error(const FlowField& flow_orig, const FlowField& flow_mag, double alpha,
                           double epsilon = 1e-7);

// Mean structural similarity over valid 11x11 Gaussian windows (sigma 1.5)
// of the grayscale images, with the usual stabilizers for unit dynamic
// range. Frames must be at least 11x11.
double ssim(const Frame& a, const Frame& b);

// Peak signal-to-noise ratio in dB against unit dynamic range, averaged over
// planes; identical frames yield +infinity.
double psnr(const Frame& a, const Frame& b);

struct MetricRow {
    int frame = 0;
    int reference = 0;
    bool is_reference = false;  // frame serves as its own reference
    double e_motion = 0.0;
    double e_mag = 0.0;
    double e_mag_masked = 0.0;  // diagnostic: flow norms restricted to the region mask
    double ssim = 0.0;
    double psnr = 0.0;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
};

struct MetricReport {
    double alpha = 1.0;
    int clip_length = 2;
    FlowParams flow_params;
    bool has_masked = false;  // masked diagnostic was computed
    std::vector<MetricRow> rows;
    // Flow-based aggregates skip self-reference rows (their flows are zero by
    // construction and carry no motion information); image-quality aggregates
    // cover every row.
    Aggregate e_motion_agg, e_mag_agg, e_mag_masked_agg, ssim_agg, psnr_agg;
};

// Re-estimate per-frame flows of both sequences against the schedule's
// references and score the magnified sequence. The region mask feeds the
// masked diagnostic only; pass an all-false mask to disable it.
MetricReport evaluate_sequence(const std::vector<Frame>& original,
                               const std::vector<Frame>& magnified, const Mask& region,
                               double alpha, int clip_length, const FlowParams& params = {});

}  // namespace vmag
