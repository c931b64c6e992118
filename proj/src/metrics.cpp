#include "vmag/metrics.hpp"

#include "vmag/core.hpp"
#include "vmag/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace vmag {

namespace {

using PlaneD = PlaneT<double>;

void require_same_shape(const FlowField& a, const FlowField& b, const char* what) {
    require(a.height() == b.height() && a.width() == b.width(), what);
    require(a.height() > 0 && a.width() > 0, what);
}

double squared_norm(const FlowField& f) {
    return f.u.cast<double>().square().sum() + f.v.cast<double>().square().sum();
}

double squared_norm_masked(const FlowField& f, const Mask& region) {
    double acc = 0.0;
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            if (region(y, x)) {
                acc += static_cast<double>(f.u(y, x)) * f.u(y, x) +
                       static_cast<double>(f.v(y, x)) * f.v(y, x);
            }
        }
    }
    return acc;
}

// 11-tap Gaussian window, sigma 1.5, normalized in double.
std::vector<double> ssim_kernel() {
    std::vector<double> k(11);
    double total = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5;
        k[i] = std::exp(-0.5 * d * d / (1.5 * 1.5));
        total += k[i];
    }
    for (double& v : k) v /= total;
    return k;
}

// Valid-region separable filtering: output is (h-10) x (w-10).
PlaneD filter_valid(const PlaneD& img, const std::vector<double>& k) {
    const int h = static_cast<int>(img.rows());
    const int w = static_cast<int>(img.cols());
    const int vw = w - 10;
    const int vh = h - 10;
    PlaneD horiz(h, vw);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int i = 0; i < 11; ++i) acc += k[i] * img(y, x + i);
            horiz(y, x) = acc;
        }
    }
    PlaneD out(vh, vw);
    for (int y = 0; y < vh; ++y) {
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int i = 0; i < 11; ++i) acc += k[i] * horiz(y + i, x);
            out(y, x) = acc;
        }
    }
    return out;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate agg;
    if (values.empty()) {
        return agg;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / values.size();
    if (std::isinf(agg.mean)) {
        agg.stddev = 0.0;  // degenerate but well-defined output
        return agg;
    }
    double var = 0.0;
    for (double v : values) var += (v - agg.mean) * (v - agg.mean);
    agg.stddev = std::sqrt(var / values.size());
    return agg;
}

}  // namespace

double motion_error(const FlowField& flow_orig, const FlowField& flow_mag, double alpha) {
    require_same_shape(flow_orig, flow_mag, "motion_error: fields must share dimensions");
    double acc = 0.0;
    for (int y = 0; y < flow_orig.height(); ++y) {
        for (int x = 0; x < flow_orig.width(); ++x) {
            acc += std::abs(alpha * flow_orig.u(y, x) - static_cast<double>(flow_mag.u(y, x))) +
                   std::abs(alpha * flow_orig.v(y, x) - static_cast<double>(flow_mag.v(y, x)));
        }
    }
    return acc / (static_cast<double>(flow_orig.height()) * flow_orig.width());
}

double magnification_error(const FlowField& flow_orig, const FlowField& flow_mag, double alpha,
                           double epsilon) {
    require_same_shape(flow_orig, flow_mag, "magnification_error: fields must share dimensions");
    const double norm_orig = std::sqrt(squared_norm(flow_orig));
    const double norm_mag = std::sqrt(squared_norm(flow_mag));
    return std::abs(norm_mag / (norm_orig + epsilon) - alpha);
}

double ssim(const Frame& a, const Frame& b) {
    require(a.same_size(b), "ssim: frames must share dimensions");
    require(a.height() >= 11 && a.width() >= 11, "ssim: frames must be at least 11x11");

    const PlaneD pa = to_grayscale(a).planes[0].cast<double>();
    const PlaneD pb = to_grayscale(b).planes[0].cast<double>();
    const std::vector<double> k = ssim_kernel();

    const PlaneD mu_a = filter_valid(pa, k);
    const PlaneD mu_b = filter_valid(pb, k);
    const PlaneD raw_aa = filter_valid(pa * pa, k);
    const PlaneD raw_bb = filter_valid(pb * pb, k);
    const PlaneD raw_ab = filter_valid(pa * pb, k);

    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;

    double acc = 0.0;
    for (int y = 0; y < mu_a.rows(); ++y) {
        for (int x = 0; x < mu_a.cols(); ++x) {
            const double ma = mu_a(y, x);
            const double mb = mu_b(y, x);
            const double va = raw_aa(y, x) - ma * ma;
            const double vb = raw_bb(y, x) - mb * mb;
            const double cov = raw_ab(y, x) - ma * mb;
            const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
            const double den = (ma * ma + mb * mb + c1) * (va + vb + c2);
            acc += num / den;
        }
    }
    return acc / (static_cast<double>(mu_a.rows()) * mu_a.cols());
}

double psnr(const Frame& a, const Frame& b) {
    require(a.same_size(b), "psnr: frames must share dimensions");
    require(a.channels() == b.channels(), "psnr: frames must share channel count");
    require(a.height() > 0 && a.width() > 0, "psnr: empty frames");

    double acc = 0.0;
    for (size_t p = 0; p < a.planes.size(); ++p) {
        acc += (a.planes[p].cast<double>() - b.planes[p].cast<double>()).square().sum();
    }
    const double mse =
        acc / (static_cast<double>(a.height()) * a.width() * a.channels());
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(1.0 / mse);
}

MetricReport evaluate_sequence(const std::vector<Frame>& original,
                               const std::vector<Frame>& magnified, const Mask& region,
                               double alpha, int clip_length, const FlowParams& params) {
    require(!original.empty(), "evaluate_sequence: empty sequence");
    require(original.size() == magnified.size(),
            "evaluate_sequence: sequences must have the same length");
    require(alpha >= 1.0, "evaluate_sequence: alpha must be >= 1");
    for (size_t t = 0; t < original.size(); ++t) {
        require(original[t].same_size(original[0]) && magnified[t].same_size(original[0]),
                "evaluate_sequence: all frames must share dimensions");
    }
    require(region.rows() == original[0].height() && region.cols() == original[0].width(),
            "evaluate_sequence: region mask must match frame dimensions");

    const ClipSchedule schedule =
        build_schedule(static_cast<int>(original.size()), clip_length);
    const bool use_region = region.any();

    MetricReport report;
    report.alpha = alpha;
    report.clip_length = clip_length;
    report.flow_params = params;
    report.has_masked = use_region;

    std::vector<double> em, eg, egm, sm, pm;
    for (int t = 0; t < static_cast<int>(original.size()); ++t) {
        const int r = reference_of(schedule, t);
        MetricRow row;
        row.frame = t;
        row.reference = r;
        row.is_reference = (r == t);

        const FlowField flow_orig = estimate_flow(original[r], original[t], params);
        const FlowField flow_mag = estimate_flow(magnified[r], magnified[t], params);
        row.e_motion = motion_error(flow_orig, flow_mag, alpha);
        row.e_mag = magnification_error(flow_orig, flow_mag, alpha);
        if (use_region) {
            const double no = std::sqrt(squared_norm_masked(flow_orig, region));
            const double nm = std::sqrt(squared_norm_masked(flow_mag, region));
            row.e_mag_masked = std::abs(nm / (no + 1e-7) - alpha);
        }
        row.ssim = ssim(original[t], magnified[t]);
        row.psnr = psnr(original[t], magnified[t]);

        if (!row.is_reference) {
            em.push_back(row.e_motion);
            eg.push_back(row.e_mag);
            if (use_region) egm.push_back(row.e_mag_masked);
        }
        sm.push_back(row.ssim);
        pm.push_back(row.psnr);
        report.rows.push_back(row);
    }

    report.e_motion_agg = aggregate(em);
    report.e_mag_agg = aggregate(eg);
    report.e_mag_masked_agg = aggregate(egm);
    report.ssim_agg = aggregate(sm);
    report.psnr_agg = aggregate(pm);
    return report;
}

}  // namespace vmag
