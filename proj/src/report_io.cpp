#include "vmag/report_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vmag {

namespace {

using nlohmann::json;

json finite_or_inf(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::easy: return "easy";
        case Scenario::occlusion: return "occlusion";
        case Scenario::view_change: return "view_change";
        case Scenario::deformation: return "deformation";
    }
    return "easy";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "easy") return Scenario::easy;
    if (name == "occlusion") return Scenario::occlusion;
    if (name == "view_change") return Scenario::view_change;
    if (name == "deformation") return Scenario::deformation;
    throw InvalidInput("scene: unknown scenario '" + name + "'");
}

const char* softening_name(SofteningMode m) {
    switch (m) {
        case SofteningMode::motion: return "motion";
        case SofteningMode::distance: return "distance";
        case SofteningMode::none: return "none";
    }
    return "none";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot create " + path);
    out << text;
    out.close();
    if (!out.good()) {
        throw std::runtime_error("failed while writing " + path);
    }
}

json flow_params_json(const FlowParams& p) {
    return json{{"pyramid_levels", p.pyramid_levels},
                {"window_radius", p.window_radius},
                {"refinement_iterations", p.refinement_iterations},
                {"presmooth_sigma", p.presmooth_sigma}};
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("scene: invalid JSON: ") + e.what());
    }
    require(j.is_object(), "scene: spec must be a JSON object");

    SceneSpec spec;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "width") spec.width = value.get<int>();
            else if (key == "height") spec.height = value.get<int>();
            else if (key == "frame_count") spec.frame_count = value.get<int>();
            else if (key == "fps") spec.fps = value.get<double>();
            else if (key == "disk_x") spec.disk_x = value.get<double>();
            else if (key == "disk_y") spec.disk_y = value.get<double>();
            else if (key == "disk_radius") spec.disk_radius = value.get<double>();
            else if (key == "amplitude") spec.amplitude = value.get<double>();
            else if (key == "frequency") spec.frequency = value.get<double>();
            else if (key == "dir_x") spec.dir_x = value.get<double>();
            else if (key == "dir_y") spec.dir_y = value.get<double>();
            else if (key == "seed") spec.seed = value.get<std::uint32_t>();
            else if (key == "scenario") spec.scenario = scenario_from_name(value.get<std::string>());
            else if (key == "drift_x") spec.drift_x = value.get<double>();
            else if (key == "drift_y") spec.drift_y = value.get<double>();
            else if (key == "radius_modulation") spec.radius_modulation = value.get<double>();
            else if (key == "occluder") {
                require(value.is_object(), "scene: occluder must be an object");
                for (const auto& [okey, ovalue] : value.items()) {
                    if (okey == "x") spec.occluder.x = ovalue.get<int>();
                    else if (okey == "y") spec.occluder.y = ovalue.get<int>();
                    else if (okey == "width") spec.occluder.width = ovalue.get<int>();
                    else if (okey == "height") spec.occluder.height = ovalue.get<int>();
                    else if (okey == "first_frame") spec.occluder.first_frame = ovalue.get<int>();
                    else if (okey == "last_frame") spec.occluder.last_frame = ovalue.get<int>();
                    else if (okey == "value") spec.occluder.value = ovalue.get<float>();
                    else throw InvalidInput("scene: unknown occluder key '" + okey + "'");
                }
            } else {
                throw InvalidInput("scene: unknown key '" + key + "'");
            }
        } catch (const json::exception& e) {
            throw InvalidInput("scene: bad value for '" + key + "': " + e.what());
        }
    }
    return spec;
}

SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "scene: cannot open spec " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scene_spec(buffer.str());
}

void write_ground_truth(const std::string& path, const SceneSpec& spec,
                        const GroundTruth& truth) {
    json j;
    j["scenario"] = scenario_name(spec.scenario);
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["frame_count"] = spec.frame_count;
    j["fps"] = spec.fps;
    j["disk"] = {{"x", spec.disk_x}, {"y", spec.disk_y}, {"radius", spec.disk_radius}};
    j["amplitude"] = spec.amplitude;
    j["frequency"] = spec.frequency;
    j["seed"] = spec.seed;

    json disp = json::array();
    for (const auto& d : truth.displacement) {
        disp.push_back({d.x(), d.y()});
    }
    j["displacement"] = std::move(disp);

    json events = json::array();
    for (const SceneEvent& e : truth.events) {
        events.push_back({{"kind", e.kind},
                          {"first_frame", e.first_frame},
                          {"last_frame", e.last_frame}});
    }
    j["events"] = std::move(events);

    write_text_file(path, j.dump(2) + "\n");
}

void write_magnify_log(const std::string& path, const MagnifyConfig& config,
                       const std::vector<FrameRecord>& records) {
    std::ostringstream out;
    json header{{"record", "config"},
                {"alpha", config.alpha},
                {"clip_length", config.clip_length},
                {"soften", softening_name(config.softening.mode)},
                {"gamma", config.dilation.gamma},
                {"min_radius", config.dilation.min_radius},
                {"beta", config.softening.beta},
                {"flow_epsilon", config.softening.flow_epsilon},
                {"flow", flow_params_json(config.flow)}};
    out << header.dump() << "\n";

    bool collapse_reported = false;
    for (const FrameRecord& rec : records) {
        if (rec.collapsed && !collapse_reported) {
            collapse_reported = true;
            json warning{{"record", "warning"},
                         {"frame", rec.frame},
                         {"message", "region mask collapsed; frames from here on pass through "
                                     "unmagnified"}};
            out << warning.dump() << "\n";
        }
        json line{{"record", "frame"},
                  {"frame", rec.frame},
                  {"reference", rec.reference},
                  {"mask_area", rec.mask_area}};
        if (rec.ring_max_flow >= 0.0) {
            line["ring_max_flow"] = rec.ring_max_flow;
        }
        if (rec.collapsed) {
            line["collapsed"] = true;
        }
        out << line.dump() << "\n";
    }
    write_text_file(path, out.str());
}

int read_clip_length_from_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "log: cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "log: empty file " + path);
    try {
        const json j = json::parse(line);
        require(j.value("record", "") == std::string("config"),
                "log: first line is not a config record in " + path);
        return j.at("clip_length").get<int>();
    } catch (const json::exception& e) {
        throw InvalidInput("log: cannot parse config line of " + path + ": " + e.what());
    }
}

std::string metric_report_json_text(const MetricReport& report) {
    json j;
    j["alpha"] = report.alpha;
    j["clip_length"] = report.clip_length;
    j["flow"] = flow_params_json(report.flow_params);
    j["flow_source"] = "built-in pyramidal least-squares estimator";
    j["aggregation"] = "flow-error aggregates exclude frames that serve as their own reference";

    auto agg = [](const Aggregate& a) {
        return json{{"mean", finite_or_inf(a.mean)}, {"stddev", finite_or_inf(a.stddev)}};
    };
    json aggregates{{"e_motion", agg(report.e_motion_agg)},
                    {"e_mag", agg(report.e_mag_agg)},
                    {"ssim", agg(report.ssim_agg)},
                    {"psnr", agg(report.psnr_agg)}};
    if (report.has_masked) {
        aggregates["e_mag_masked"] = agg(report.e_mag_masked_agg);
    }
    j["aggregates"] = std::move(aggregates);

    json rows = json::array();
    for (const MetricRow& row : report.rows) {
        json r{{"frame", row.frame},
               {"reference", row.reference},
               {"is_reference", row.is_reference},
               {"e_motion", row.e_motion},
               {"e_mag", row.e_mag},
               {"ssim", row.ssim},
               {"psnr", finite_or_inf(row.psnr)}};
        if (report.has_masked) {
            r["e_mag_masked"] = row.e_mag_masked;
        }
        rows.push_back(std::move(r));
    }
    j["frames"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string metric_report_csv_text(const MetricReport& report) {
    std::ostringstream out;
    out << "frame,e_motion,e_mag,ssim,psnr\n";
    char buf[64];
    auto fmt = [&buf](double v) -> std::string {
        if (std::isinf(v)) {
            return v > 0 ? "inf" : "-inf";
        }
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return buf;
    };
    for (const MetricRow& row : report.rows) {
        out << row.frame << ',' << fmt(row.e_motion) << ',' << fmt(row.e_mag) << ','
            << fmt(row.ssim) << ',' << fmt(row.psnr) << "\n";
    }
    return out.str();
}

void write_metric_report(const std::string& json_path, const std::string& csv_path,
                         const MetricReport& report) {
    write_text_file(json_path, metric_report_json_text(report));
    write_text_file(csv_path, metric_report_csv_text(report));
}

}  // namespace vmag
