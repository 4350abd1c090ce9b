/*
 * Copyright 2026 the dda authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dda/commands.hpp"
#include "dda/version.hpp"

namespace {

struct ConfigArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> variant;
};

void add_config_flags(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "override: run this single seed");
    cmd->add_option("--out", args.out, "override: output directory");
    cmd->add_option("--variant", args.variant,
                    "override: source_only, grl, d3a, or cd3a");
}

dda::cli::ExperimentConfig resolve(const ConfigArgs& args) {
    dda::cli::ExperimentConfig cfg = dda::cli::load_config(args.config_path);
    dda::cli::apply_overrides(cfg, {args.seed, args.out, args.variant});
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curriculum dropout-discriminator domain adaptation"};
    app.set_version_flag("--version", std::string(dda::kVersion));
    app.require_subcommand(1);

    ConfigArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen-data", "generate source/target CSV datasets");
    add_config_flags(gen, gen_args);

    ConfigArgs train_args;
    CLI::App* train = app.add_subcommand("train", "train one run per configured seed");
    add_config_flags(train, train_args);

    ConfigArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "ensemble-size sweep plus rank analysis");
    add_config_flags(sweep, sweep_args);

    dda::cli::EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on CSV datasets");
    eval->add_option("--checkpoint", eval_args.checkpoint, "checkpoint file")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--source", eval_args.source_csv, "labeled source CSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--target", eval_args.target_csv, "target CSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--metrics", eval_args.metrics, "accuracy and/or proxy_a")
        ->delimiter(',');
    eval->add_option("--out", eval_args.out_csv, "metrics CSV path");
    eval->add_option("--probe-steps", eval_args.probe.steps, "probe training steps");
    eval->add_option("--probe-lr", eval_args.probe.learning_rate, "probe learning rate");

    std::size_t gc_configs = 20;
    std::uint64_t gc_seed = 0;
    double gc_epsilon = 1e-5;
    CLI::App* gc = app.add_subcommand("grad-check", "finite-difference gradient audit");
    gc->add_option("--configs", gc_configs, "number of random configurations");
    gc->add_option("--seed", gc_seed, "configuration seed");
    gc->add_option("--epsilon", gc_epsilon, "finite-difference step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return dda::cli::cmd_gen_data(resolve(gen_args));
        if (train->parsed()) return dda::cli::cmd_train(resolve(train_args));
        if (sweep->parsed()) return dda::cli::cmd_sweep(resolve(sweep_args));
        if (eval->parsed()) return dda::cli::cmd_eval(eval_args);
        if (gc->parsed()) return dda::cli::cmd_grad_check(gc_configs, gc_seed, gc_epsilon);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
