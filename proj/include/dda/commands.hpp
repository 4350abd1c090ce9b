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

// Command implementations behind the CLI front end. Every command validates
// its whole configuration before touching the filesystem, writes artifacts
// under the configured output directory and is byte-reproducible per seed
// (wall-clock data is confined to the run manifest).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dda/data.hpp"
#include "dda/eval.hpp"
#include "dda/trainer.hpp"

namespace dda::cli {

struct DataSpec {
    std::string generator = "two_moons";  // or "blobs"
    std::size_t n = 500;                  // rows per domain
    double noise = 0.1;                   // two_moons
    std::size_t n_classes = 3;            // blobs
    std::vector<std::vector<double>> means;  // blobs; one vector per class
    double stddev = 0.5;                  // blobs
    data::ShiftSpec shift;
    std::string dir = "data";             // where the three CSV files live
    std::uint64_t seed = 0;
};

struct EvalSpec {
    std::vector<std::string> metrics{"accuracy", "proxy_a"};
    std::size_t probe_steps = 200;
    double probe_lr = 0.1;
};

struct SweepSpec {
    std::vector<std::size_t> k_values{1, 2, 4, 8, 16};
};

struct ExperimentConfig {
    std::string experiment = "experiment";
    std::string out = "runs";
    std::vector<std::uint64_t> seeds{0};
    DataSpec data;
    adapt::TrainConfig train;
    EvalSpec eval;
    SweepSpec sweep;

    void validate() const;
};

// Parses and fully validates the JSON config; unknown keys are rejected so
// typos fail loudly instead of silently using defaults.
ExperimentConfig load_config(const std::string& path);

struct Overrides {
    std::optional<std::uint64_t> seed;     // replaces the whole seed list
    std::optional<std::string> out;
    std::optional<std::string> variant;
};

void apply_overrides(ExperimentConfig& cfg, const Overrides& overrides);

// Writes source.csv, target_train.csv (labels stripped) and
// target_eval.csv (labels kept) into the data directory.
int cmd_gen_data(const ExperimentConfig& cfg);

// One run directory per seed: <out>/<experiment>/<variant>-seed<seed>/
// holding checkpoint.txt, history.csv and manifest.json.
int cmd_train(const ExperimentConfig& cfg);

struct EvalArgs {
    std::string checkpoint;
    std::string source_csv;
    std::string target_csv;
    std::vector<std::string> metrics{"accuracy", "proxy_a"};
    std::string out_csv = "metrics.csv";
    eval::ProbeConfig probe;
};

// Emits one `metric,dataset,value` row per metric per applicable dataset.
int cmd_eval(const EvalArgs& args);

// Baseline runs per seed plus the fixed-vs-curriculum ensemble sweep;
// resumes by skipping cells whose per-cell file already exists. Emits
// sweep.csv, summary.csv and cd_diagram.csv next to the cells directory.
int cmd_sweep(const ExperimentConfig& cfg);

// Runs the finite-difference suite; prints the worst relative error and
// fails (nonzero) when it reaches 1e-4.
int cmd_grad_check(std::size_t n_configs, std::uint64_t seed, double epsilon);

}  // namespace dda::cli
