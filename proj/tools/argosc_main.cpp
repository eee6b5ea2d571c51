#include <cstdint>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "argosc/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"argosc: sparse identification of forced dynamical systems"};
    app.require_subcommand(1);

    std::string spec_path, dataset_path, model_path, out_path, trace_path;
    std::string method = "argosc";
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* sim = app.add_subcommand("simulate", "generate benchmark datasets from a spec");
    sim->add_option("--spec", spec_path, "experiment spec file")->required();
    sim->add_option("--out", out_path, "output dataset file (suffixed per SNR)")->required();

    auto* fit = app.add_subcommand("fit", "identify dynamics from a dataset");
    fit->add_option("--dataset", dataset_path, "input dataset file")->required();
    fit->add_option("--spec", spec_path, "experiment spec supplying pipeline settings");
    fit->add_option("--method", method, "argosc | argos | sindyc")
        ->check(CLI::IsMember({"argosc", "argos", "sindyc"}));
    fit->add_option("--seed", seed, "override the bootstrap seed")
        ->each([&](const std::string&) { seed_set = true; });
    fit->add_option("--out", out_path, "model output file");
    fit->add_option("--trace", trace_path, "selection trace output file (argosc/argos)");

    auto* ev = app.add_subcommand("evaluate", "score a fitted model against a dataset with truth");
    ev->add_option("--model", model_path, "model file")->required();
    ev->add_option("--dataset", dataset_path, "dataset file with noise-free truth")->required();
    ev->add_option("--out", out_path, "metrics output file");

    std::string table = "all";
    std::string specs_dir = "specs";
    std::string repro_out = "results";
    auto* rep = app.add_subcommand("reproduce", "rerun the benchmark tables and check tolerances");
    rep->add_option("table", table, "table1 | table2 | all")
        ->check(CLI::IsMember({"table1", "table2", "all"}));
    rep->add_option("--specs-dir", specs_dir, "directory holding the shipped spec files");
    rep->add_option("--out", repro_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            argosc::cmd_simulate(spec_path, out_path, std::cout);
        } else if (fit->parsed()) {
            argosc::cmd_fit(dataset_path, spec_path, method, seed, seed_set, out_path, trace_path,
                            std::cout);
        } else if (ev->parsed()) {
            argosc::cmd_evaluate(model_path, dataset_path, out_path, std::cout);
        } else if (rep->parsed()) {
            const argosc::ReproduceOutcome outcome =
                argosc::cmd_reproduce(table, specs_dir, repro_out, std::cout);
            if (!outcome.all_pass()) return 3;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
