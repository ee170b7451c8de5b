// splatseg: batch pipeline and local service entry point.

#include "splatseg/assignment.hpp"
#include "splatseg/camera_io.hpp"
#include "splatseg/contribution.hpp"
#include "splatseg/editing.hpp"
#include "splatseg/errors.hpp"
#include "splatseg/label_mask.hpp"
#include "splatseg/mask_render.hpp"
#include "splatseg/metrics.hpp"
#include "splatseg/ply_io.hpp"
#include "splatseg/prompts.hpp"
#include "splatseg/service.hpp"
#include "splatseg/synth.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace splatseg;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

void report_error(std::string_view kind, std::string_view message) {
    fmt::print(stderr, "error: kind={} message=\"{}\"\n", kind, escape(message));
}

void require_file(const fs::path& path, const char* what) {
    if (!fs::is_regular_file(path)) throw IoError(fmt::format("{} '{}' does not exist", what, path.string()));
}

void require_dir(const fs::path& path, const char* what) {
    if (!fs::is_directory(path)) throw IoError(fmt::format("{} '{}' is not a directory", what, path.string()));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct AccumulateArgs {
    fs::path scene, cameras, masks, out;
    std::uint32_t num_objects = 2;
    bool no_early_termination = false;
};

void run_accumulate(const AccumulateArgs& args) {
    require_file(args.scene, "scene");
    require_file(args.cameras, "camera file");
    require_dir(args.masks, "mask directory");
    const auto start = std::chrono::steady_clock::now();
    const GaussianScene scene = load_scene_ply(args.scene);
    const std::vector<CameraEntry> cameras = load_cameras(args.cameras);
    std::vector<MaskedView> views;
    int masked = 0;
    for (const CameraEntry& c : cameras) {
        std::optional<LabelMask> mask = find_view_mask(args.masks, c.view.view_id);
        masked += mask.has_value();
        views.push_back({c.view, std::move(mask)});
    }
    RenderOptions options;
    options.early_termination = !args.no_early_termination;
    const ContributionMatrix a = accumulate_contributions(scene, views, args.num_objects, options);
    save_contributions(a, args.out);
    fmt::print("accumulated E={} N={} views={} masked={} seconds={:.3f}\n", a.num_objects(), a.num_gaussians(),
               views.size(), masked, seconds_since(start));
}

struct AssignArgs {
    fs::path contributions, out;
    double gamma = 0.0;
    std::string mode = "binary";
};

void run_assign(const AssignArgs& args) {
    require_file(args.contributions, "contribution file");
    const AssignmentMode mode = parse_assignment_mode(args.mode);
    const ContributionMatrix a = load_contributions(args.contributions);
    const auto start = std::chrono::steady_clock::now();
    const Assignment assignment = mode == AssignmentMode::kBinary ? assign_binary(a, args.gamma) : assign_scene(a, args.gamma);
    const double elapsed = seconds_since(start);
    save_assignment(assignment, args.out);
    const auto counts = assignment.member_counts();
    for (std::size_t e = 0; e < counts.size(); ++e) fmt::print("object {} members {}\n", e, counts[e]);
    fmt::print("assigned mode={} gamma={} N={} milliseconds={:.3f}\n", to_string(mode), args.gamma,
               assignment.num_gaussians, elapsed * 1e3);
}

struct RenderMaskArgs {
    fs::path scene, assignment, cameras, out;
    std::vector<int> views;
    double tau = kDefaultTau;
    std::string selection = "depth";
};

void run_render_mask(const RenderMaskArgs& args) {
    require_file(args.scene, "scene");
    require_file(args.assignment, "assignment file");
    require_file(args.cameras, "camera file");
    MaskSelection selection;
    if (args.selection == "depth") {
        selection = MaskSelection::kDepthGuided;
    } else if (args.selection == "max-alpha") {
        selection = MaskSelection::kMaxAlpha;
    } else {
        throw InputError(fmt::format("unknown selection '{}' (expected depth or max-alpha)", args.selection));
    }
    const GaussianScene scene = load_scene_ply(args.scene);
    const Assignment assignment = load_assignment(args.assignment);
    if (assignment.num_gaussians != scene.size()) {
        throw InputError(fmt::format("assignment covers {} Gaussians but the scene has {}", assignment.num_gaussians,
                                     scene.size()));
    }
    const std::vector<CameraEntry> cameras = load_cameras(args.cameras);
    std::vector<const CameraView*> targets;
    if (args.views.empty()) {
        for (const CameraEntry& c : cameras) targets.push_back(&c.view);
    } else {
        for (int id : args.views) targets.push_back(&find_camera(cameras, id).view);
    }
    fs::create_directories(args.out);
    for (const CameraView* view : targets) {
        const RenderedMask m = assignment.mode == AssignmentMode::kBinary
                                   ? render_binary_mask(scene, assignment, *view, args.tau)
                                   : render_scene_mask(scene, assignment, *view, args.tau, selection);
        save_label_mask(m.mask, args.out / fmt::format("{}.png", view->view_id));
    }
    fmt::print("rendered {} masks tau={} into {}\n", targets.size(), args.tau, args.out.string());
}

struct RemoveArgs {
    fs::path scene, assignment, out;
    std::vector<std::uint32_t> objects;
};

void run_remove(const RemoveArgs& args) {
    require_file(args.scene, "scene");
    require_file(args.assignment, "assignment file");
    const GaussianScene scene = load_scene_ply(args.scene);
    const Assignment assignment = load_assignment(args.assignment);
    const SceneSubset kept = remove_objects(scene, assignment, args.objects);
    export_ply(kept.scene, args.out);
    fmt::print("removed {} of {} Gaussians, wrote {}\n", scene.size() - kept.scene.size(), scene.size(),
               args.out.string());
}

struct EvalArgs {
    fs::path pred, gt;
};

void run_eval(const EvalArgs& args) {
    require_dir(args.pred, "prediction directory");
    require_dir(args.gt, "ground-truth directory");
    fmt::print("{}", format_report(evaluate_mask_dirs(args.pred, args.gt)));
}

struct SynthArgs {
    SynthConfig config;
    std::string preset = "two-cluster";
    std::vector<int> mask_views;
    fs::path out;
};

void run_synth(SynthArgs args) {
    args.config.preset = parse_synth_preset(args.preset);
    if (args.config.num_gaussians == 0) throw InputError("--gaussians must be positive");
    if (args.config.num_views <= 0) throw InputError("--views must be positive");
    if (args.config.width <= 0 || args.config.height <= 0) throw InputError("--width and --height must be positive");
    if (args.config.foreground_objects == 0 || args.config.foreground_objects > 65534) {
        throw InputError("--objects must be in [1, 65534]");
    }
    if (args.config.label_noise < 0.0 || args.config.label_noise > 1.0) throw InputError("--noise must be in [0, 1]");
    for (int id : args.mask_views) {
        if (id < 0 || id >= args.config.num_views) throw InputError(fmt::format("--mask-views id {} out of range", id));
    }
    const SynthFixture fixture = generate_synthetic(args.config);
    write_fixture(fixture, args.config, args.out, args.mask_views);
    fmt::print("wrote N={} views={} E={} into {}\n", fixture.scene.size(), fixture.cameras.size(), fixture.num_objects,
               args.out.string());
}

struct PropagateArgs {
    fs::path scene, cameras, prompts, out;
};

void run_propagate(const PropagateArgs& args) {
    require_file(args.scene, "scene");
    require_file(args.cameras, "camera file");
    require_file(args.prompts, "prompt file");
    const GaussianScene scene = load_scene_ply(args.scene);
    const std::vector<CameraEntry> cameras = load_cameras(args.cameras);
    const std::vector<PointPrompt> prompts = load_prompts(args.prompts);
    const std::string doc = propagate_prompts_json(scene, cameras, prompts);
    if (args.out.empty()) {
        fmt::print("{}\n", doc);
    } else {
        std::ofstream file(args.out, std::ios::binary);
        file << doc << '\n';
        if (!file) throw IoError(fmt::format("cannot write '{}'", args.out.string()));
    }
}

struct ServeArgs {
    fs::path scene, cameras, contributions, out_dir = "edits";
    std::string host = "127.0.0.1";
    int port = 8080;
};

ServiceServer* g_server = nullptr;

void run_serve(const ServeArgs& args) {
    require_file(args.scene, "scene");
    require_file(args.cameras, "camera file");
    std::optional<ContributionMatrix> a;
    if (!args.contributions.empty()) {
        require_file(args.contributions, "contribution file");
        a = load_contributions(args.contributions);
    }
    SegmentationService service(load_scene_ply(args.scene), load_cameras(args.cameras), std::move(a), args.out_dir);
    ServiceServer server(service);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
    });
    int port = args.port;
    if (port == 0) {
        port = server.bind_to_any_port(args.host);
        if (port < 0) throw IoError(fmt::format("cannot bind {}", args.host));
    }
    fmt::print("listening on http://{}:{}\n", args.host, port);
    std::fflush(stdout);
    const bool ok = args.port == 0 ? server.listen_after_bind() : server.listen(args.host, port);
    g_server = nullptr;
    if (!ok) throw IoError(fmt::format("cannot listen on {}:{}", args.host, port));
}

void add_config(CLI::App* sub) {
    sub->add_option("--config", "key=value file mirroring this subcommand's flags");
}

std::string trim(std::string_view text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = text.find_last_not_of(" \t\r");
    return std::string(text.substr(begin, end - begin + 1));
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    for (const std::string& a : args) {
        if (a == flag || a.starts_with(flag + "=")) return true;
    }
    return false;
}

// Splices "key=value" lines from a --config file into the argument list as
// --key value pairs. Flags given on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
        else if (args[k].starts_with("--config=")) path = args[k].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open config file '{}'", path));
    std::vector<std::string> extra;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';' || text[0] == '[') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw InputError(fmt::format("{}:{}: expected key=value", path, line_no));
        }
        const std::string flag = "--" + trim(std::string_view(text).substr(0, eq));
        std::string value = trim(std::string_view(text).substr(eq + 1));
        if (flag == "--config" || has_flag(args, flag)) continue;
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            extra.push_back(flag);
            extra.push_back(value.substr(1, value.size() - 2));
            continue;
        }
        if (value == "false") continue;
        extra.push_back(flag);
        if (value == "true") continue;
        for (char& c : value) {
            if (c == ',') c = ' ';
        }
        std::istringstream tokens(value);
        for (std::string token; tokens >> token;) extra.push_back(token);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form object segmentation and removal for Gaussian splat scenes"};
    app.require_subcommand(1);

    AccumulateArgs acc;
    auto* accumulate = app.add_subcommand("accumulate", "Build the contribution matrix from labeled views");
    accumulate->add_option("scene", acc.scene, "Scene PLY")->required();
    accumulate->add_option("cameras", acc.cameras, "Camera JSON")->required();
    accumulate->add_option("masks", acc.masks, "Directory of {view_id}.png label masks")->required();
    accumulate->add_option("--num-objects", acc.num_objects, "Object count E, background included")
        ->required()
        ->check(CLI::Range(2u, 65535u));
    accumulate->add_option("--out", acc.out, "Output contribution file")->required();
    accumulate->add_flag("--no-early-termination", acc.no_early_termination,
                         "Blend every splat instead of stopping at low transmittance");
    add_config(accumulate);

    AssignArgs asg;
    auto* assign = app.add_subcommand("assign", "Assign Gaussians to objects");
    assign->add_option("contributions", asg.contributions, "Contribution file")->required();
    assign->add_option("--gamma", asg.gamma, "Background bias in [-1, 1]")->default_val(0.0);
    assign->add_option("--mode", asg.mode, "binary or scene")->default_val("binary");
    assign->add_option("--out", asg.out, "Output assignment file")->required();
    add_config(assign);

    RenderMaskArgs rm;
    auto* render = app.add_subcommand("render-mask", "Render 2D label masks from an assignment");
    render->add_option("scene", rm.scene, "Scene PLY")->required();
    render->add_option("assignment", rm.assignment, "Assignment file")->required();
    render->add_option("cameras", rm.cameras, "Camera JSON")->required();
    render->add_option("--views", rm.views, "Comma-separated view ids (default: all)")->delimiter(',');
    render->add_option("--tau", rm.tau, "Accumulated-alpha threshold")->default_val(kDefaultTau);
    render->add_option("--selection", rm.selection, "depth or max-alpha (scene mode)")->default_val("depth");
    render->add_option("--out", rm.out, "Output directory")->required();
    add_config(render);

    RemoveArgs rem;
    auto* remove = app.add_subcommand("remove", "Delete objects from the scene");
    remove->add_option("scene", rem.scene, "Scene PLY")->required();
    remove->add_option("assignment", rem.assignment, "Assignment file")->required();
    remove->add_option("--objects", rem.objects, "Comma-separated object ids")->required()->delimiter(',');
    remove->add_option("--out", rem.out, "Output PLY")->required();
    add_config(remove);

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Score predicted masks against ground truth");
    eval->add_option("pred", ev.pred, "Predicted mask directory")->required();
    eval->add_option("gt", ev.gt, "Ground-truth mask directory")->required();
    add_config(eval);

    SynthArgs syn;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic scene with cameras and masks");
    synth->add_option("--seed", syn.config.seed, "RNG seed")->default_val(0);
    synth->add_option("--gaussians", syn.config.num_gaussians, "Gaussian count")->default_val(2000);
    synth->add_option("--views", syn.config.num_views, "View count")->default_val(12);
    synth->add_option("--width", syn.config.width, "Image width")->default_val(128);
    synth->add_option("--height", syn.config.height, "Image height")->default_val(128);
    synth->add_option("--preset", syn.preset, "two-cluster or random")->default_val("two-cluster");
    synth->add_option("--objects", syn.config.foreground_objects, "Foreground objects (random preset)")
        ->default_val(2);
    synth->add_option("--noise", syn.config.label_noise, "Training-mask label noise probability")->default_val(0.0);
    synth->add_option("--mask-views", syn.mask_views, "Views that get training masks (default: all)")
        ->delimiter(',');
    synth->add_option("--out", syn.out, "Output directory")->required();
    add_config(synth);

    PropagateArgs prop;
    auto* propagate = app.add_subcommand("propagate", "Lift point prompts to Gaussians and project them to every view");
    propagate->add_option("scene", prop.scene, "Scene PLY")->required();
    propagate->add_option("cameras", prop.cameras, "Camera JSON")->required();
    propagate->add_option("prompts", prop.prompts, "Prompt JSON [{view_id, x, y}]")->required();
    propagate->add_option("--out", prop.out, "Output JSON (default: stdout)");
    add_config(propagate);

    ServeArgs srv;
    auto* serve = app.add_subcommand("serve", "Run the local HTTP service");
    serve->add_option("scene", srv.scene, "Scene PLY")->required();
    serve->add_option("cameras", srv.cameras, "Camera JSON")->required();
    serve->add_option("--contributions", srv.contributions, "Contribution file");
    serve->add_option("--host", srv.host, "Bind address")->default_val("127.0.0.1");
    serve->add_option("--port", srv.port, "Port (0 picks a free one)")->default_val(8080)->check(CLI::Range(0, 65535));
    serve->add_option("--out-dir", srv.out_dir, "Directory for exported PLYs")->default_val("edits");
    add_config(serve);

    std::vector<std::string> args;
    try {
        args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const Error& e) {
        report_error(to_string(e.kind()), e.what());
        return kExitFailure;
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return kExitUsage;
    }

    try {
        if (*accumulate) run_accumulate(acc);
        else if (*assign) run_assign(asg);
        else if (*render) run_render_mask(rm);
        else if (*remove) run_remove(rem);
        else if (*eval) run_eval(ev);
        else if (*synth) run_synth(syn);
        else if (*propagate) run_propagate(prop);
        else if (*serve) run_serve(srv);
    } catch (const Error& e) {
        report_error(to_string(e.kind()), e.what());
        return kExitFailure;
    } catch (const fs::filesystem_error& e) {
        report_error("io", e.what());
        return kExitFailure;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return kExitFailure;
    }
    return 0;
}
