#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
    if (const char* p = std::getenv("VMAG_CLI_PATH")) {
        return p;  // environment override, e.g. for installed binaries
    }
#ifdef VMAG_CLI_PATH
    return VMAG_CLI_PATH;
#else
    FAIL("VMAG_CLI_PATH must point at the vmag binary");
    return {};
#endif
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path() + "\" " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    REQUIRE(raw != -1);
    REQUIRE(WIFEXITED(raw));
    return WEXITSTATUS(raw);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "vmag_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("cannot open " + path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    return slurp(a) == slurp(b);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

json small_spec() {
    return json{{"width", 64},    {"height", 64},   {"frame_count", 6}, {"fps", 30},
                {"disk_x", 32},   {"disk_y", 32},   {"disk_radius", 12}, {"amplitude", 0.3},
                {"frequency", 1}, {"seed", 7}};
}

// Render one small scene into dir/scene and return that path.
fs::path make_scene_dir(const fs::path& dir, const json& spec) {
    const fs::path spec_path = dir / "spec.json";
    write_text(spec_path, spec.dump());
    const fs::path scene = dir / "scene";
    REQUIRE(run_cli("synth --spec " + spec_path.string() + " --output " + scene.string()) == 0);
    return scene;
}

std::vector<std::string> frame_names(int count) {
    std::vector<std::string> names;
    char buf[32];
    for (int t = 0; t < count; ++t) {
        std::snprintf(buf, sizeof(buf), "frame_%06d.png", t);
        names.emplace_back(buf);
    }
    return names;
}

// First line of a magnify log: the config record.
json log_config(const fs::path& output_dir) {
    std::istringstream in(slurp(output_dir / "log.jsonl"));
    std::string line;
    REQUIRE(static_cast<bool>(std::getline(in, line)));
    return json::parse(line);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth renders frames, mask, and ground truth") {
    const fs::path dir = fresh_dir("synth_basic");
    const fs::path scene = make_scene_dir(dir, small_spec());

    for (const std::string& name : frame_names(6)) {
        CHECK(fs::is_regular_file(scene / name));
    }
    CHECK(fs::is_regular_file(scene / "mask.png"));

    const json truth = json::parse(slurp(scene / "truth.json"));
    CHECK(truth.at("frame_count") == 6);
    CHECK(truth.at("scenario") == "easy");
    CHECK(truth.at("displacement").size() == 6);
    CHECK(truth.at("disk").at("radius") == 12);
    CHECK(truth.at("events").empty());
}

TEST_CASE("synth rejects bad input without touching the output") {
    const fs::path dir = fresh_dir("synth_bad");

    json spec = small_spec();
    spec["amplitude"] = -1.0;
    write_text(dir / "neg.json", spec.dump());
    CHECK(run_cli("synth --spec " + (dir / "neg.json").string() + " --output " +
                  (dir / "out1").string()) == 2);
    CHECK(!fs::exists(dir / "out1"));

    json unknown = small_spec();
    unknown["wobble"] = 3;
    write_text(dir / "unknown.json", unknown.dump());
    CHECK(run_cli("synth --spec " + (dir / "unknown.json").string() + " --output " +
                  (dir / "out2").string()) == 2);
    CHECK(!fs::exists(dir / "out2"));

    write_text(dir / "broken.json", "{not json");
    CHECK(run_cli("synth --spec " + (dir / "broken.json").string() + " --output " +
                  (dir / "out3").string()) == 2);

    // Missing required flags and unknown subcommands are argument errors.
    CHECK(run_cli("synth --output " + (dir / "out4").string()) == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("transmogrify") == 2);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("synth output is deterministic and the seed flag overrides") {
    const fs::path dir = fresh_dir("synth_seed");
    write_text(dir / "spec.json", small_spec().dump());

    REQUIRE(run_cli("synth --spec " + (dir / "spec.json").string() + " --output " +
                    (dir / "a").string()) == 0);
    REQUIRE(run_cli("synth --spec " + (dir / "spec.json").string() + " --output " +
                    (dir / "b").string()) == 0);
    for (const std::string& name : frame_names(6)) {
        CHECK(same_bytes(dir / "a" / name, dir / "b" / name));
    }
    CHECK(same_bytes(dir / "a" / "mask.png", dir / "b" / "mask.png"));
    CHECK(same_bytes(dir / "a" / "truth.json", dir / "b" / "truth.json"));

    REQUIRE(run_cli("synth --spec " + (dir / "spec.json").string() + " --seed 99 --output " +
                    (dir / "c").string()) == 0);
    CHECK(!same_bytes(dir / "a" / "frame_000000.png", dir / "c" / "frame_000000.png"));
    const json truth = json::parse(slurp(dir / "c" / "truth.json"));
    CHECK(truth.at("seed") == 99);
}

TEST_CASE("magnify with alpha 1 copies the input") {
    const fs::path dir = fresh_dir("magnify_bypass");
    const fs::path scene = make_scene_dir(dir, small_spec());
    const fs::path out = dir / "out";
    REQUIRE(run_cli("magnify --input " + scene.string() + " --output " + out.string() +
                    " --mask " + (scene / "mask.png").string() + " --alpha 1") == 0);
    for (const std::string& name : frame_names(6)) {
        CHECK(same_bytes(scene / name, out / name));
    }
    CHECK(log_config(out).at("alpha") == 1.0);
    CHECK(!fs::exists(out / "maps"));
    CHECK(!fs::exists(out / "mask.png"));  // the region mask is not a frame
}

TEST_CASE("magnify leaves a static scene untouched at any alpha") {
    const fs::path dir = fresh_dir("magnify_static");
    json spec = small_spec();
    spec["amplitude"] = 0.0;
    const fs::path scene = make_scene_dir(dir, spec);
    const fs::path out = dir / "out";
    REQUIRE(run_cli("magnify --input " + scene.string() + " --output " + out.string() +
                    " --mask " + (scene / "mask.png").string() + " --alpha 8") == 0);
    for (const std::string& name : frame_names(6)) {
        CHECK(same_bytes(scene / name, out / name));
    }
}

TEST_CASE("magnify writes frames, maps, and a log") {
    const fs::path dir = fresh_dir("magnify_full");
    const fs::path scene = make_scene_dir(dir, small_spec());
    const fs::path out = dir / "out";
    REQUIRE(run_cli("magnify --input " + scene.string() + " --output " + out.string() +
                    " --mask " + (scene / "mask.png").string() +
                    " --alpha 4 --clip-len 3 --emit-maps") == 0);

    int frame_records = 0;
    std::istringstream lines(slurp(out / "log.jsonl"));
    std::string line;
    bool first = true;
    while (std::getline(lines, line)) {
        const json j = json::parse(line);
        if (first) {
            CHECK(j.at("record") == "config");
            CHECK(j.at("alpha") == 4.0);
            CHECK(j.at("clip_length") == 3);
            CHECK(j.at("soften") == "distance");
            CHECK(!j.contains("threads"));  // logs stay identical across thread counts
            first = false;
            continue;
        }
        CHECK(j.at("record") == "frame");
        CHECK(j.at("mask_area").get<long>() > 0);
        ++frame_records;
    }
    CHECK(frame_records == 6);

    for (const std::string& name : frame_names(6)) {
        CHECK(fs::is_regular_file(out / name));
        CHECK(fs::is_regular_file(out / "maps" / name));
    }

    // Clip layout for 6 frames at length 3: references 0,0,2,2,4,4.
    const json cfg = log_config(out);
    (void)cfg;
    std::istringstream again(slurp(out / "log.jsonl"));
    std::getline(again, line);
    const int expected_refs[6] = {0, 0, 2, 2, 4, 4};
    for (int t = 0; t < 6; ++t) {
        REQUIRE(static_cast<bool>(std::getline(again, line)));
        const json j = json::parse(line);
        CHECK(j.at("frame") == t);
        CHECK(j.at("reference") == expected_refs[t]);
    }
}

TEST_CASE("magnify is byte-identical across runs and thread counts") {
    const fs::path dir = fresh_dir("magnify_threads");
    const fs::path scene = make_scene_dir(dir, small_spec());
    const std::string base = "magnify --input " + scene.string() + " --mask " +
                             (scene / "mask.png").string() + " --alpha 4 --emit-maps";
    REQUIRE(run_cli(base + " --threads 1 --output " + (dir / "t1").string()) == 0);
    REQUIRE(run_cli(base + " --threads 4 --output " + (dir / "t4").string()) == 0);
    REQUIRE(run_cli(base + " --threads 4 --output " + (dir / "t4b").string()) == 0);
    for (const std::string& name : frame_names(6)) {
        CHECK(same_bytes(dir / "t1" / name, dir / "t4" / name));
        CHECK(same_bytes(dir / "t1" / "maps" / name, dir / "t4" / "maps" / name));
        CHECK(same_bytes(dir / "t4" / name, dir / "t4b" / name));
    }
    CHECK(same_bytes(dir / "t1" / "log.jsonl", dir / "t4" / "log.jsonl"));
}

TEST_CASE("magnify layers config files under flags") {
    const fs::path dir = fresh_dir("magnify_config");
    const fs::path scene = make_scene_dir(dir, small_spec());

    write_text(dir / "config.json",
               json{{"alpha", 4.0}, {"clip_len", 3}, {"input", scene.string()},
                    {"mask", (scene / "mask.png").string()}}
                   .dump());
    const fs::path out = dir / "out";
    REQUIRE(run_cli("magnify --config " + (dir / "config.json").string() + " --output " +
                    out.string() + " --alpha 2") == 0);
    const json cfg = log_config(out);
    CHECK(cfg.at("alpha") == 2.0);        // flag wins
    CHECK(cfg.at("clip_length") == 3);    // config file fills the rest

    write_text(dir / "bad.json", json{{"alpa", 4.0}}.dump());
    CHECK(run_cli("magnify --config " + (dir / "bad.json").string() + " --input " +
                  scene.string() + " --mask " + (scene / "mask.png").string() + " --output " +
                  (dir / "out2").string()) == 2);

    CHECK(run_cli("magnify --input " + scene.string() + " --output " + (dir / "out3").string() +
                  " --mask " + (dir / "missing.png").string()) == 2);
    CHECK(run_cli("magnify --input " + scene.string() + " --output " + (dir / "out4").string() +
                  " --mask " + (scene / "mask.png").string() + " --alpha 0.5") == 2);
}

TEST_CASE("evaluate writes JSON and CSV reports") {
    const fs::path dir = fresh_dir("evaluate_basic");
    const fs::path scene = make_scene_dir(dir, small_spec());
    const fs::path out = dir / "out";
    REQUIRE(run_cli("magnify --input " + scene.string() + " --output " + out.string() +
                    " --mask " + (scene / "mask.png").string() + " --alpha 2 --clip-len 3") == 0);

    const fs::path report = dir / "reports" / "report.json";
    REQUIRE(run_cli("evaluate --input " + scene.string() + " --magnified " + out.string() +
                    " --mask " + (scene / "mask.png").string() + " --alpha 2 --report " +
                    report.string()) == 0);

    const json j = json::parse(slurp(report));
    CHECK(j.at("alpha") == 2.0);
    CHECK(j.at("clip_length") == 3);  // picked up from the magnify log
    CHECK(j.at("frames").size() == 6);
    CHECK(j.at("aggregates").contains("e_motion"));
    CHECK(j.at("aggregates").contains("e_mag_masked"));
    CHECK(j.at("frames")[0].at("is_reference") == true);
    CHECK(j.at("frames")[1].at("reference") == 0);

    const std::string csv = slurp(dir / "reports" / "report.csv");
    CHECK(csv.rfind("frame,e_motion,e_mag,ssim,psnr\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows

    SUBCASE("identical sequences serialize infinite PSNR as a sentinel") {
        const fs::path self_report = dir / "reports" / "self.json";
        REQUIRE(run_cli("evaluate --input " + scene.string() + " --magnified " + scene.string() +
                        " --mask " + (scene / "mask.png").string() +
                        " --alpha 1 --clip-len 3 --report " + self_report.string()) == 0);
        const json self = json::parse(slurp(self_report));
        CHECK(self.at("frames")[0].at("psnr") == "inf");
        CHECK(self.at("aggregates").at("psnr").at("mean") == "inf");
        const std::string self_csv = slurp(dir / "reports" / "self.csv");
        CHECK(self_csv.find(",inf") != std::string::npos);
    }
}

TEST_CASE("evaluate rejects mismatched directories and missing context") {
    const fs::path dir = fresh_dir("evaluate_bad");
    const fs::path scene = make_scene_dir(dir, small_spec());

    json other = small_spec();
    other["frame_count"] = 4;
    write_text(dir / "other.json", other.dump());
    const fs::path short_scene = dir / "short";
    REQUIRE(run_cli("synth --spec " + (dir / "other.json").string() + " --output " +
                    short_scene.string()) == 0);

    CHECK(run_cli("evaluate --input " + scene.string() + " --magnified " + short_scene.string() +
                  " --mask " + (scene / "mask.png").string() + " --alpha 2 --report " +
                  (dir / "r.json").string()) == 2);

    // No --clip-len and no log.jsonl in the magnified directory: no way to
    // know the clip layout.
    CHECK(run_cli("evaluate --input " + scene.string() + " --magnified " + scene.string() +
                  " --mask " + (scene / "mask.png").string() + " --alpha 1 --report " +
                  (dir / "r2.json").string()) == 2);

    CHECK(run_cli("evaluate --magnified " + scene.string() + " --mask " +
                  (scene / "mask.png").string() + " --alpha 1 --report " +
                  (dir / "r3.json").string()) == 2);
}

}  // TEST_SUITE
