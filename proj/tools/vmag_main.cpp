// Command-line front end: synthesize test scenes, magnify frame sequences,
// and score the results. All subcommands exit 0 on success, 2 on invalid
// input or arguments, and 1 on internal failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vmag/core.hpp"
#include "vmag/magnify.hpp"
#include "vmag/metrics.hpp"
#include "vmag/png_io.hpp"
#include "vmag/report_io.hpp"
#include "vmag/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    vmag::require(in.good(), "cannot open config " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw vmag::InvalidInput("config " + path + ": " + e.what());
    }
}

// Layered option lookup: explicit flag beats config file beats default.
// extra_allowed lists keys that are legal without having a default value.
class Options {
public:
    Options(json defaults, json file, json flags, std::set<std::string> extra_allowed)
        : defaults_(std::move(defaults)), file_(std::move(file)), flags_(std::move(flags)) {
        for (const auto& [key, value] : file_.items()) {
            (void)value;
            vmag::require(defaults_.contains(key) || extra_allowed.count(key) > 0,
                          "config: unknown key '" + key + "'");
        }
    }

    bool has(const std::string& key) const {
        return flags_.contains(key) || file_.contains(key) || defaults_.contains(key);
    }

    template <typename T>
    T get(const std::string& key) const {
        try {
            if (flags_.contains(key)) return flags_.at(key).get<T>();
            if (file_.contains(key)) return file_.at(key).get<T>();
            return defaults_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw vmag::InvalidInput("config: bad value for '" + key + "': " + e.what());
        }
    }

private:
    json defaults_, file_, flags_;
};

std::vector<std::string> list_frame_files(const std::string& dir) {
    vmag::require(fs::is_directory(dir), "not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            const std::string name = entry.path().filename().string();
            if (name != "mask.png") {
                names.push_back(name);
            }
        }
    }
    std::sort(names.begin(), names.end());
    vmag::require(!names.empty(), "no .png frames in " + dir);
    return names;
}

std::vector<vmag::Frame> read_frames(const std::string& dir,
                                     const std::vector<std::string>& names) {
    std::vector<vmag::Frame> frames;
    frames.reserve(names.size());
    for (const std::string& name : names) {
        frames.push_back(vmag::read_frame_png((fs::path(dir) / name).string()));
    }
    return frames;
}

vmag::SofteningMode softening_from_name(const std::string& name) {
    if (name == "motion") return vmag::SofteningMode::motion;
    if (name == "distance") return vmag::SofteningMode::distance;
    if (name == "none") return vmag::SofteningMode::none;
    throw vmag::InvalidInput("soften must be one of motion|distance|none, got '" + name + "'");
}

vmag::FlowParams flow_params_from(const Options& opt) {
    vmag::FlowParams p;
    p.pyramid_levels = opt.get<int>("flow_levels");
    p.window_radius = opt.get<int>("flow_window");
    p.refinement_iterations = opt.get<int>("flow_iterations");
    p.presmooth_sigma = opt.get<double>("presmooth_sigma");
    return p;
}

int run_synth(const std::string& spec_path, const std::string& output, bool seed_set,
              std::uint32_t seed) {
    vmag::SceneSpec spec = vmag::load_scene_spec(spec_path);
    if (seed_set) {
        spec.seed = seed;
    }
    const vmag::Scene scene = vmag::make_scene(spec);  // validates before any file exists

    fs::create_directories(output);
    char name[32];
    for (size_t t = 0; t < scene.frames.size(); ++t) {
        std::snprintf(name, sizeof(name), "frame_%06zu.png", t);
        vmag::write_frame_png((fs::path(output) / name).string(), scene.frames[t]);
    }
    vmag::write_mask_png((fs::path(output) / "mask.png").string(), scene.initial_mask);
    vmag::write_ground_truth((fs::path(output) / "truth.json").string(), spec, scene.truth);
    return 0;
}

int run_magnify(const Options& opt) {
    const std::string input = opt.get<std::string>("input");
    const std::string output = opt.get<std::string>("output");
    const std::string mask_path = opt.get<std::string>("mask");

    vmag::MagnifyConfig config;
    config.alpha = opt.get<double>("alpha");
    config.clip_length = opt.get<int>("clip_len");
    config.softening.mode = softening_from_name(opt.get<std::string>("soften"));
    config.dilation.gamma = opt.get<double>("gamma");
    config.dilation.min_radius = opt.get<int>("min_radius");
    config.softening.beta = opt.get<double>("beta");
    config.softening.flow_epsilon = opt.get<double>("flow_epsilon");
    config.flow = flow_params_from(opt);
    config.threads = opt.get<int>("threads");
    const bool emit_maps = opt.get<bool>("emit_maps");
    config.keep_maps = emit_maps;

    const std::vector<std::string> names = list_frame_files(input);
    const std::vector<vmag::Frame> frames = read_frames(input, names);
    const vmag::Mask mask = vmag::read_mask_png(mask_path);

    const vmag::MagnifiedSequence result = vmag::magnify_sequence(frames, mask, config);

    fs::create_directories(output);
    for (size_t t = 0; t < result.frames.size(); ++t) {
        vmag::write_frame_png((fs::path(output) / names[t]).string(), result.frames[t]);
    }
    if (emit_maps) {
        fs::create_directories(fs::path(output) / "maps");
        for (size_t t = 0; t < result.maps.size(); ++t) {
            vmag::write_weights_png((fs::path(output) / "maps" / names[t]).string(),
                                    result.maps[t]);
        }
    }
    vmag::write_magnify_log((fs::path(output) / "log.jsonl").string(), config, result.log);
    return 0;
}

int run_evaluate(const Options& opt) {
    const std::string input = opt.get<std::string>("input");
    const std::string magnified = opt.get<std::string>("magnified");
    const std::string mask_path = opt.get<std::string>("mask");
    vmag::require(opt.has("alpha"), "evaluate: alpha is required");
    const double alpha = opt.get<double>("alpha");

    const std::vector<std::string> orig_names = list_frame_files(input);
    const std::vector<std::string> mag_names = list_frame_files(magnified);
    vmag::require(orig_names == mag_names,
                  "evaluate: original and magnified directories must hold the same frame files");

    int clip_length = 0;
    if (opt.has("clip_len")) {
        clip_length = opt.get<int>("clip_len");
    } else {
        clip_length =
            vmag::read_clip_length_from_log((fs::path(magnified) / "log.jsonl").string());
    }

    const std::vector<vmag::Frame> original = read_frames(input, orig_names);
    const std::vector<vmag::Frame> mag_frames = read_frames(magnified, mag_names);
    const vmag::Mask mask = vmag::read_mask_png(mask_path);

    const vmag::MetricReport report = vmag::evaluate_sequence(
        original, mag_frames, mask, alpha, clip_length, flow_params_from(opt));

    const std::string report_path = opt.get<std::string>("report");
    fs::path csv_path(report_path);
    csv_path.replace_extension(".csv");
    if (const fs::path parent = fs::path(report_path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    vmag::write_metric_report(report_path, csv_path.string(), report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mask-guided motion magnification for frame sequences"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Render a synthetic test scene");
    std::string synth_spec, synth_output;
    std::uint32_t synth_seed = 0;
    synth->add_option("--spec", synth_spec, "Scene spec JSON file")->required();
    synth->add_option("--output", synth_output, "Output directory")->required();
    auto* seed_opt = synth->add_option("--seed", synth_seed, "Override the spec's RNG seed");

    // magnify
    auto* magnify = app.add_subcommand("magnify", "Magnify motion in a frame sequence");
    std::string m_input, m_output, m_mask, m_config, m_soften;
    double m_alpha = 0, m_gamma = 0, m_beta = 0;
    int m_clip = 0, m_levels = 0, m_window = 0, m_threads = 0;
    bool m_emit_maps = false;
    magnify->add_option("--input", m_input, "Input frame directory");
    magnify->add_option("--output", m_output, "Output directory");
    magnify->add_option("--mask", m_mask, "Initial region mask PNG");
    magnify->add_option("--alpha", m_alpha, "Magnification factor (>= 1)");
    magnify->add_option("--clip-len", m_clip, "Frames per reference clip (>= 2)");
    magnify->add_option("--soften", m_soften, "Ring softening: motion|distance|none");
    magnify->add_option("--gamma", m_gamma, "Dilation radius fraction of d_min");
    magnify->add_option("--beta", m_beta, "Distance-softening decay rate");
    magnify->add_option("--flow-levels", m_levels, "Flow pyramid levels");
    magnify->add_option("--flow-window", m_window, "Flow window radius");
    magnify->add_option("--threads", m_threads, "Worker threads for the per-frame stage");
    magnify->add_flag("--emit-maps", m_emit_maps, "Write per-frame weight maps");
    magnify->add_option("--config", m_config, "JSON config file (flags override it)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score a magnified sequence");
    std::string e_input, e_magnified, e_mask, e_config, e_report;
    double e_alpha = 0;
    int e_clip = 0, e_levels = 0, e_window = 0;
    evaluate->add_option("--input", e_input, "Original frame directory");
    evaluate->add_option("--magnified", e_magnified, "Magnified frame directory");
    evaluate->add_option("--mask", e_mask, "Region mask PNG for the masked diagnostic");
    evaluate->add_option("--alpha", e_alpha, "Magnification factor the run targeted");
    evaluate->add_option("--clip-len", e_clip,
                         "Clip length; defaults to the value in the magnify log");
    evaluate->add_option("--report", e_report, "Report JSON path (CSV lands beside it)");
    evaluate->add_option("--flow-levels", e_levels, "Flow pyramid levels");
    evaluate->add_option("--flow-window", e_window, "Flow window radius");
    evaluate->add_option("--config", e_config, "JSON config file (flags override it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) {
            return run_synth(synth_spec, synth_output, seed_opt->count() > 0, synth_seed);
        }

        if (magnify->parsed()) {
            json flags;
            if (magnify->count("--input")) flags["input"] = m_input;
            if (magnify->count("--output")) flags["output"] = m_output;
            if (magnify->count("--mask")) flags["mask"] = m_mask;
            if (magnify->count("--alpha")) flags["alpha"] = m_alpha;
            if (magnify->count("--clip-len")) flags["clip_len"] = m_clip;
            if (magnify->count("--soften")) flags["soften"] = m_soften;
            if (magnify->count("--gamma")) flags["gamma"] = m_gamma;
            if (magnify->count("--beta")) flags["beta"] = m_beta;
            if (magnify->count("--flow-levels")) flags["flow_levels"] = m_levels;
            if (magnify->count("--flow-window")) flags["flow_window"] = m_window;
            if (magnify->count("--threads")) flags["threads"] = m_threads;
            if (magnify->count("--emit-maps")) flags["emit_maps"] = true;

            json defaults{{"alpha", 2.0},
                          {"clip_len", 4},
                          {"soften", "distance"},
                          {"gamma", 1.0 / 15.0},
                          {"min_radius", 1},
                          {"beta", 1.0},
                          {"flow_epsilon", 1e-3},
                          {"flow_levels", 4},
                          {"flow_window", 7},
                          {"flow_iterations", 3},
                          {"presmooth_sigma", 1.0},
                          {"threads", 1},
                          {"emit_maps", false}};
            json file = m_config.empty() ? json::object() : load_json_file(m_config);
            Options opt(std::move(defaults), std::move(file), std::move(flags),
                        {"input", "output", "mask"});
            vmag::require(opt.has("input"), "magnify: input directory is required");
            vmag::require(opt.has("output"), "magnify: output directory is required");
            vmag::require(opt.has("mask"), "magnify: mask is required");
            return run_magnify(opt);
        }

        // evaluate
        json flags;
        if (evaluate->count("--input")) flags["input"] = e_input;
        if (evaluate->count("--magnified")) flags["magnified"] = e_magnified;
        if (evaluate->count("--mask")) flags["mask"] = e_mask;
        if (evaluate->count("--alpha")) flags["alpha"] = e_alpha;
        if (evaluate->count("--clip-len")) flags["clip_len"] = e_clip;
        if (evaluate->count("--report")) flags["report"] = e_report;
        if (evaluate->count("--flow-levels")) flags["flow_levels"] = e_levels;
        if (evaluate->count("--flow-window")) flags["flow_window"] = e_window;

        json defaults{{"report", "report.json"},
                      {"flow_levels", 4},
                      {"flow_window", 7},
                      {"flow_iterations", 3},
                      {"presmooth_sigma", 1.0}};
        json file = e_config.empty() ? json::object() : load_json_file(e_config);
        Options opt(std::move(defaults), std::move(file), std::move(flags),
                    {"input", "magnified", "mask", "alpha", "clip_len"});
        vmag::require(opt.has("input"), "evaluate: input directory is required");
        vmag::require(opt.has("magnified"), "evaluate: magnified directory is required");
        vmag::require(opt.has("mask"), "evaluate: mask is required");
        return run_evaluate(opt);
    } catch (const vmag::InvalidInput& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
}
