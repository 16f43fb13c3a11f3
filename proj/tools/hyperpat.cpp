// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperpat/hyperpat.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace hyperpat;

struct Config {
    std::vector<std::string> inputs;
    std::string geometry;
    std::string out;
    std::string dump_tets;
    std::string svg;
    std::string framed_reading = "euler";
    double tol_grad = 1e-9;
    double tol_len = 1e-7;
    int max_iter = 200;
    std::uint64_t seed = 0;
    bool random_start = false;
    int workers = default_workers();
    int fan_rotation = 0;
    int chord_budget = 2;
    bool exhaustive = false;
    std::string demo;
    bool list = false;
};

void emit(const Config& cfg, const Json& j, const std::string& path_override = "") {
    std::string path = path_override.empty() ? cfg.out : path_override;
    if (path.empty())
        std::cout << json_text(j);
    else
        write_text_file(path, json_text(j));
}

Problem load_problem(const Config& cfg) {
    if (cfg.inputs.empty() || cfg.inputs.size() > 2) throw CLI::ValidationError("inputs", "expected an instance file and an optional angle file");
    if (cfg.inputs.size() == 2 && cfg.inputs[0] == cfg.inputs[1])
        throw CLI::ValidationError("inputs", "instance and angle paths must be distinct");
    Json inst = read_json_file(cfg.inputs[0]);
    Problem p;
    if (cfg.inputs.size() == 2) {
        Json ang = read_json_file(cfg.inputs[1]);
        if (!inst.contains("half_edges") && ang.contains("half_edges")) std::swap(inst, ang);
        p = problem_from_json(inst, &ang);
    } else {
        p = problem_from_json(inst);
    }
    if (!cfg.geometry.empty()) p.angles.geometry = parse_geometry(cfg.geometry);
    return p;
}

CheckOptions check_options(const Config& cfg, const Problem& p) {
    CheckOptions o;
    o.domains.chord_budget = cfg.chord_budget;
    if (cfg.exhaustive) {
        int deg = 3;
        for (const auto& f : p.complex.face_half_edges) deg = std::max(deg, static_cast<int>(f.size()));
        o.domains.chord_budget = std::max(cfg.chord_budget, 2 * deg);
        o.domains.prune = false;
    }
    o.framed_reading = cfg.framed_reading == "two-pi" ? FramedReading::two_pi : FramedReading::euler_characteristic;
    return o;
}

int cmd_validate(const Config& cfg) {
    Problem p = load_problem(cfg);
    ConditionInstance in = problem_instance(p);
    Verdict v = check_conditions(in, check_options(cfg, p));
    Json j = verdict_to_json(v);
    j["geometry"] = geometry_name(in.geometry);
    j["framed"] = in.framed;
    emit(cfg, j);
    return v.accepted ? kExitOk : kExitRejected;
}

int cmd_solve(const Config& cfg) {
    Problem p = load_problem(cfg);
    PipelineOptions opt;
    opt.check = check_options(cfg, p);
    opt.solver.tol_grad = cfg.tol_grad;
    opt.solver.tol_len = cfg.tol_len;
    opt.solver.max_iter = cfg.max_iter;
    opt.solver.seed = cfg.seed;
    opt.solver.workers = cfg.workers;
    opt.random_start = cfg.random_start;
    opt.fan_rotation = cfg.fan_rotation;
    PipelineResult r = run_solve(p, opt);
    if (!cfg.dump_tets.empty() && r.tets && r.solution) write_text_file(cfg.dump_tets, json_text(tets_to_json(*r.tets, *r.solution)));
    if (!cfg.svg.empty() && r.pattern) write_text_file(cfg.svg, render_svg(r.document));
    emit(cfg, r.document);
    if (!cfg.out.empty()) {
        Json summary = {{"exit_code", r.exit_code}, {"verdict", r.document.at("verdict").at("verdict")}};
        if (r.document.contains("solver")) summary["solver"] = {{"status", r.document["solver"]["status"]},
                                                                 {"iterations", r.document["solver"]["iterations"]}};
        if (r.document.contains("residuals")) summary["residuals"] = r.document["residuals"];
        if (r.document.contains("error")) summary["error"] = r.document["error"];
        std::cout << json_text(summary);
    }
    if (r.document.contains("error")) std::cerr << json_text(r.document["error"]);
    return r.exit_code;
}

int cmd_render(const Config& cfg) {
    if (cfg.inputs.size() != 1) throw CLI::ValidationError("inputs", "render takes one solution file");
    Json sol = read_json_file(cfg.inputs[0]);
    if (!sol.contains("charts"))
        throw Error("MissingPattern", "solution file has no developed pattern", {{"path", cfg.inputs[0]}});
    std::string svg = render_svg(sol);
    if (cfg.out.empty())
        std::cout << svg;
    else
        write_text_file(cfg.out, svg);
    return kExitOk;
}

int cmd_double(const Config& cfg) {
    Problem p = load_problem(cfg);
    emit(cfg, problem_to_json(doubled_problem(p)));
    return kExitOk;
}

int cmd_demo(const Config& cfg) {
    if (cfg.list || cfg.demo.empty()) {
        for (const auto& n : demo_names()) std::cout << n << "  " << make_demo(n).description << "\n";
        return cfg.demo.empty() && !cfg.list ? kExitUsage : kExitOk;
    }
    Demo d = make_demo(cfg.demo);
    Problem p = demo_problem(d);
    if (cfg.out.empty()) {
        std::cout << json_text(problem_to_json(p));
        return kExitOk;
    }
    std::filesystem::path dir(cfg.out);
    if (dir.extension() == ".json") {
        write_text_file(dir.string(), json_text(problem_to_json(p)));
        return kExitOk;
    }
    std::filesystem::create_directories(dir);
    write_text_file((dir / (d.name + ".instance.json")).string(), json_text(instance_to_json(p.complex)));
    write_text_file((dir / (d.name + ".angles.json")).string(), json_text(angles_to_json(p.angles)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    CLI::App app{"hyperideal circle patterns on cone surfaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hyperpat 0.1.0");

    auto inputs = [&](CLI::App* s, const std::string& what) {
        s->add_option("inputs", cfg.inputs, what)->required()->check(CLI::ExistingFile);
    };
    auto common = [&](CLI::App* s) {
        s->add_option("--geometry", cfg.geometry, "override geometry")->check(CLI::IsMember({"euclidean", "hyperbolic"}));
        s->add_option("--out", cfg.out, "output path");
    };
    auto checking = [&](CLI::App* s) {
        s->add_flag("--exhaustive-chords", cfg.exhaustive, "enumerate domains without pruning and with a chord budget of twice the largest face size");
        s->add_option("--chord-budget", cfg.chord_budget, "chords per domain")->check(CLI::NonNegativeNumber);
        s->add_option("--framed-reading", cfg.framed_reading, "curvature bound for framed problems")
            ->check(CLI::IsMember({"euler", "two-pi"}));
    };

    auto* validate = app.add_subcommand("validate", "check the feasibility conditions");
    inputs(validate, "instance file and optional angle file");
    common(validate);
    checking(validate);

    auto* solve = app.add_subcommand("solve", "validate, maximize volume, reconstruct and verify");
    inputs(solve, "instance file and optional angle file");
    common(solve);
    checking(solve);
    solve->add_option("--tol-grad", cfg.tol_grad, "projected gradient tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--tol-len", cfg.tol_len, "edge length tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--max-iter", cfg.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
    solve->add_option("--seed", cfg.seed, "seed for the random start");
    solve->add_flag("--random-start", cfg.random_start, "start from a random feasible point");
    solve->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    solve->add_option("--fan-rotation", cfg.fan_rotation, "shift of the fan base in every pyramid");
    solve->add_option("--dump-tets", cfg.dump_tets, "write the solved tetrahedra as JSON");
    solve->add_option("--svg", cfg.svg, "also render the pattern to this SVG file");

    auto* render = app.add_subcommand("render", "render a solution file to SVG");
    render->add_option("inputs", cfg.inputs, "solution file")->required()->check(CLI::ExistingFile);
    render->add_option("--out", cfg.out, "output path");

    auto* dbl = app.add_subcommand("double", "emit the doubled problem of a framed problem");
    inputs(dbl, "instance file and optional angle file");
    common(dbl);

    auto* demo = app.add_subcommand("demo", "write a bundled problem");
    demo->add_option("name", cfg.demo, "demo name");
    demo->add_option("--out", cfg.out, "output directory, or a .json path for a combined file");
    demo->add_flag("--list", cfg.list, "list the bundled problems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(cfg);
        if (*solve) return cmd_solve(cfg);
        if (*render) return cmd_render(cfg);
        if (*dbl) return cmd_double(cfg);
        if (*demo) return cmd_demo(cfg);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << json_text(error_to_json(e));
        bool solve_stage = *solve && e.kind() != "ParseError" && e.kind() != "IoError" && e.kind() != "MalformedAngles" &&
                           e.kind().rfind("Malformed", 0) != 0 && e.kind() != "NonOrientable" && e.kind() != "Disconnected";
        return solve_stage ? kExitSolverFailure : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << json_text(Json{{"error", "InternalError"}, {"message", e.what()}, {"witness", Json::object()}});
        return kExitUsage;
    }
    return kExitUsage;
}
