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

#include "dda/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "dda/checkpoint.hpp"
#include "dda/errors.hpp"
#include "dda/gradcheck.hpp"
#include "dda/textio.hpp"
#include "dda/version.hpp"

namespace dda::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ValidationError(ctx + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
T get_as(const json& obj, const char* key, const std::string& ctx) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(ctx + "." + key + ": " + e.what());
    }
}

std::size_t get_count(const json& obj, const char* key, const std::string& ctx) {
    const long long v = get_as<long long>(obj, key, ctx);
    if (v < 0) throw ValidationError(ctx + "." + key + ": must be non-negative");
    return static_cast<std::size_t>(v);
}

data::ShiftSpec parse_shift(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx, {"kind", "angle", "offset"});
    data::ShiftSpec spec;
    const std::string kind = get_as<std::string>(obj, "kind", ctx);
    if (kind == "rotation") {
        if (obj.contains("offset")) {
            throw ValidationError(ctx + ": rotation shift takes 'angle', not 'offset'");
        }
        spec.kind = data::ShiftSpec::Kind::rotation;
        spec.angle_degrees = data::normalize_rotation_angle(get_as<double>(obj, "angle", ctx));
    } else if (kind == "translation") {
        if (obj.contains("angle")) {
            throw ValidationError(ctx + ": translation shift takes 'offset', not 'angle'");
        }
        spec.kind = data::ShiftSpec::Kind::translation;
        spec.offset = get_as<std::vector<double>>(obj, "offset", ctx);
    } else {
        throw ValidationError(ctx + ": shift kind must be 'rotation' or 'translation'");
    }
    return spec;
}

DataSpec parse_data(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx,
               {"generator", "n", "noise", "n_classes", "means", "std", "shift", "dir", "seed"});
    DataSpec spec;
    if (obj.contains("generator")) spec.generator = get_as<std::string>(obj, "generator", ctx);
    if (obj.contains("n")) spec.n = get_count(obj, "n", ctx);
    if (obj.contains("noise")) spec.noise = get_as<double>(obj, "noise", ctx);
    if (obj.contains("n_classes")) spec.n_classes = get_count(obj, "n_classes", ctx);
    if (obj.contains("means")) {
        spec.means = get_as<std::vector<std::vector<double>>>(obj, "means", ctx);
    }
    if (obj.contains("std")) spec.stddev = get_as<double>(obj, "std", ctx);
    if (obj.contains("shift")) spec.shift = parse_shift(obj.at("shift"), ctx + ".shift");
    if (obj.contains("dir")) spec.dir = get_as<std::string>(obj, "dir", ctx);
    if (obj.contains("seed")) spec.seed = get_as<std::uint64_t>(obj, "seed", ctx);
    return spec;
}

adapt::TrainConfig parse_train(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx,
               {"variant", "extractor_hidden", "classifier_hidden", "discriminator_hidden",
                "dropout", "learning_rate", "momentum", "batch_size", "epochs", "lambda_gamma",
                "lambda_max", "k_fixed", "k_min", "k_max", "eval_period"});
    adapt::TrainConfig cfg;
    if (obj.contains("variant")) {
        cfg.variant = adapt::parse_variant(get_as<std::string>(obj, "variant", ctx));
    }
    if (obj.contains("extractor_hidden")) {
        cfg.extractor_hidden = get_as<std::vector<std::size_t>>(obj, "extractor_hidden", ctx);
    }
    if (obj.contains("classifier_hidden")) {
        cfg.classifier_hidden = get_as<std::vector<std::size_t>>(obj, "classifier_hidden", ctx);
    }
    if (obj.contains("discriminator_hidden")) {
        cfg.discriminator_hidden =
            get_as<std::vector<std::size_t>>(obj, "discriminator_hidden", ctx);
    }
    if (obj.contains("dropout")) cfg.dropout = get_as<double>(obj, "dropout", ctx);
    if (obj.contains("learning_rate")) {
        cfg.learning_rate = get_as<double>(obj, "learning_rate", ctx);
    }
    if (obj.contains("momentum")) cfg.momentum = get_as<double>(obj, "momentum", ctx);
    if (obj.contains("batch_size")) cfg.batch_size = get_count(obj, "batch_size", ctx);
    if (obj.contains("epochs")) cfg.epochs = get_count(obj, "epochs", ctx);
    if (obj.contains("lambda_gamma")) {
        cfg.lambda_schedule.gamma = get_as<double>(obj, "lambda_gamma", ctx);
    }
    if (obj.contains("lambda_max")) {
        cfg.lambda_schedule.lambda_max = get_as<double>(obj, "lambda_max", ctx);
    }
    if (obj.contains("k_fixed")) cfg.k_fixed = get_count(obj, "k_fixed", ctx);
    if (obj.contains("k_min")) cfg.k_min = get_count(obj, "k_min", ctx);
    if (obj.contains("k_max")) cfg.k_max = get_count(obj, "k_max", ctx);
    if (obj.contains("eval_period")) cfg.eval_period = get_count(obj, "eval_period", ctx);
    return cfg;
}

EvalSpec parse_eval(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx, {"metrics", "probe_steps", "probe_lr"});
    EvalSpec spec;
    if (obj.contains("metrics")) {
        spec.metrics = get_as<std::vector<std::string>>(obj, "metrics", ctx);
    }
    if (obj.contains("probe_steps")) spec.probe_steps = get_count(obj, "probe_steps", ctx);
    if (obj.contains("probe_lr")) spec.probe_lr = get_as<double>(obj, "probe_lr", ctx);
    return spec;
}

void validate_metrics(const std::vector<std::string>& metrics) {
    if (metrics.empty()) throw ValidationError("metrics list must be non-empty");
    for (const std::string& m : metrics) {
        if (m != "accuracy" && m != "proxy_a") {
            throw ValidationError("unknown metric '" + m + "' (valid: accuracy, proxy_a)");
        }
    }
}

json shift_to_json(const data::ShiftSpec& spec) {
    json j;
    if (spec.kind == data::ShiftSpec::Kind::rotation) {
        j["kind"] = "rotation";
        j["angle"] = spec.angle_degrees;
    } else {
        j["kind"] = "translation";
        j["offset"] = spec.offset;
    }
    return j;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["out"] = cfg.out;
    j["seeds"] = cfg.seeds;
    json d;
    d["generator"] = cfg.data.generator;
    d["n"] = cfg.data.n;
    d["noise"] = cfg.data.noise;
    if (cfg.data.generator == "blobs") {
        d["n_classes"] = cfg.data.n_classes;
        d["means"] = cfg.data.means;
        d["std"] = cfg.data.stddev;
    }
    d["shift"] = shift_to_json(cfg.data.shift);
    d["dir"] = cfg.data.dir;
    d["seed"] = cfg.data.seed;
    j["data"] = d;
    json t;
    t["variant"] = adapt::variant_name(cfg.train.variant);
    t["extractor_hidden"] = cfg.train.extractor_hidden;
    t["classifier_hidden"] = cfg.train.classifier_hidden;
    t["discriminator_hidden"] = cfg.train.discriminator_hidden;
    t["dropout"] = cfg.train.dropout;
    t["learning_rate"] = cfg.train.learning_rate;
    t["momentum"] = cfg.train.momentum;
    t["batch_size"] = cfg.train.batch_size;
    t["epochs"] = cfg.train.epochs;
    t["lambda_gamma"] = cfg.train.lambda_schedule.gamma;
    t["lambda_max"] = cfg.train.lambda_schedule.lambda_max;
    t["k_fixed"] = cfg.train.k_fixed;
    t["k_min"] = cfg.train.k_min;
    t["k_max"] = cfg.train.k_max;
    t["eval_period"] = cfg.train.eval_period;
    j["train"] = t;
    json e;
    e["metrics"] = cfg.eval.metrics;
    e["probe_steps"] = cfg.eval.probe_steps;
    e["probe_lr"] = cfg.eval.probe_lr;
    j["eval"] = e;
    j["sweep"] = json{{"k_values", cfg.sweep.k_values}};
    return j;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (experiment.empty()) throw ValidationError("config: experiment name must be non-empty");
    if (experiment.find('/') != std::string::npos) {
        throw ValidationError("config: experiment name must not contain '/'");
    }
    if (out.empty()) throw ValidationError("config: output directory must be non-empty");
    if (seeds.empty()) throw ValidationError("config: seed list must be non-empty");
    if (data.dir.empty()) throw ValidationError("config: data.dir must be non-empty");
    if (data.generator == "two_moons") {
        if (data.n < 2) throw ValidationError("config: two_moons needs n >= 2");
        if (data.noise < 0.0) throw ValidationError("config: noise must be >= 0");
    } else if (data.generator == "blobs") {
        if (data.n_classes < 2) throw ValidationError("config: blobs needs n_classes >= 2");
        if (data.means.size() != data.n_classes) {
            throw ValidationError("config: blobs needs one mean per class (" +
                                  std::to_string(data.means.size()) + " means for " +
                                  std::to_string(data.n_classes) + " classes)");
        }
        if (data.n < data.n_classes) {
            throw ValidationError("config: blobs needs at least one point per class");
        }
        if (data.stddev < 0.0) throw ValidationError("config: std must be >= 0");
    } else {
        throw ValidationError("config: unknown generator '" + data.generator +
                              "' (valid: two_moons, blobs)");
    }
    train.validate();
    validate_metrics(eval.metrics);
    if (eval.probe_steps == 0) throw ValidationError("config: probe_steps must be >= 1");
    if (!(eval.probe_lr > 0.0)) throw ValidationError("config: probe_lr must be > 0");
    if (sweep.k_values.empty()) throw ValidationError("config: sweep.k_values must be non-empty");
    for (std::size_t k : sweep.k_values) {
        if (k == 0) throw ValidationError("config: sweep ensemble sizes must be >= 1");
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(path + ": config must be a JSON object");
    check_keys(j, path, {"experiment", "out", "seeds", "data", "train", "eval", "sweep"});
    ExperimentConfig cfg;
    if (j.contains("experiment")) cfg.experiment = get_as<std::string>(j, "experiment", path);
    if (j.contains("out")) cfg.out = get_as<std::string>(j, "out", path);
    if (j.contains("seeds")) cfg.seeds = get_as<std::vector<std::uint64_t>>(j, "seeds", path);
    if (j.contains("data")) cfg.data = parse_data(j.at("data"), path + ".data");
    if (j.contains("train")) cfg.train = parse_train(j.at("train"), path + ".train");
    if (j.contains("eval")) cfg.eval = parse_eval(j.at("eval"), path + ".eval");
    if (j.contains("sweep")) {
        check_keys(j.at("sweep"), path + ".sweep", {"k_values"});
        if (j.at("sweep").contains("k_values")) {
            cfg.sweep.k_values =
                get_as<std::vector<std::size_t>>(j.at("sweep"), "k_values", path + ".sweep");
        }
    }
    cfg.validate();
    return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& overrides) {
    if (overrides.seed) cfg.seeds = {*overrides.seed};
    if (overrides.out) cfg.out = *overrides.out;
    if (overrides.variant) cfg.train.variant = adapt::parse_variant(*overrides.variant);
    cfg.validate();
}

namespace {

data::Dataset generate_source(const DataSpec& spec, Rng& rng) {
    if (spec.generator == "two_moons") return data::make_two_moons(spec.n, spec.noise, rng);
    return data::make_blobs(spec.n, spec.n_classes, spec.means, spec.stddev, rng);
}

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_manifest(const fs::path& path, const ExperimentConfig& cfg,
                    const adapt::TrainConfig& resolved_train,
                    const std::vector<std::string>& artifacts, double duration_seconds) {
    json j;
    j["version"] = kVersion;
    j["experiment"] = cfg.experiment;
    j["variant"] = adapt::variant_name(resolved_train.variant);
    j["seed"] = resolved_train.seed;
    j["config"] = config_to_json(cfg);
    j["artifacts"] = artifacts;
    j["duration_seconds"] = duration_seconds;
    j["written_at"] = iso_utc_now();
    std::ofstream out(path);
    if (!out) throw IoError("cannot open manifest for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed while writing manifest: " + path.string());
}

struct LoadedData {
    data::Dataset source;
    data::Dataset target_train;
    std::optional<data::Dataset> target_eval;
};

LoadedData load_experiment_data(const DataSpec& spec, bool require_eval) {
    const fs::path dir(spec.dir);
    LoadedData loaded;
    loaded.source = data::load_csv((dir / "source.csv").string());
    loaded.target_train = data::load_csv((dir / "target_train.csv").string());
    const fs::path eval_path = dir / "target_eval.csv";
    if (fs::exists(eval_path)) {
        loaded.target_eval = data::load_csv(eval_path.string());
    } else if (require_eval) {
        throw IoError("missing " + eval_path.string() + " (run gen-data first)");
    }
    return loaded;
}

}  // namespace

int cmd_gen_data(const ExperimentConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.data.seed);
    const data::Dataset source = generate_source(cfg.data, rng);
    const data::Dataset target_eval = data::apply_shift(source, cfg.data.shift);
    const data::Dataset target_train = data::strip_labels(target_eval);
    const fs::path dir(cfg.data.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    data::save_csv(source, (dir / "source.csv").string());
    data::save_csv(target_train, (dir / "target_train.csv").string());
    data::save_csv(target_eval, (dir / "target_eval.csv").string());
    std::cout << "wrote " << (dir / "source.csv").string() << ", "
              << (dir / "target_train.csv").string() << ", "
              << (dir / "target_eval.csv").string() << "\n";
    return 0;
}

int cmd_train(const ExperimentConfig& cfg) {
    cfg.validate();
    const LoadedData loaded = load_experiment_data(cfg.data, false);
    for (std::uint64_t seed : cfg.seeds) {
        adapt::TrainConfig train_cfg = cfg.train;
        train_cfg.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        const adapt::TrainResult result =
            adapt::train(loaded.source, loaded.target_train, train_cfg,
                         loaded.target_eval ? &*loaded.target_eval : nullptr);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const fs::path run_dir = fs::path(cfg.out) / cfg.experiment /
                                 (adapt::variant_name(train_cfg.variant) + "-seed" +
                                  std::to_string(seed));
        std::error_code ec;
        fs::create_directories(run_dir, ec);
        if (ec) throw IoError("cannot create " + run_dir.string() + ": " + ec.message());
        net::save_checkpoint(result.network, (run_dir / "checkpoint.txt").string());
        adapt::write_history_csv(result.history, (run_dir / "history.csv").string());
        write_manifest(run_dir / "manifest.json", cfg, train_cfg,
                       {"checkpoint.txt", "history.csv"}, seconds);
        std::cout << "run " << run_dir.string() << " done in " << fmt_double(seconds) << " s\n";
    }
    return 0;
}

int cmd_eval(const EvalArgs& args) {
    validate_metrics(args.metrics);
    const net::Network network = net::load_checkpoint(args.checkpoint);
    const data::Dataset source = data::load_csv(args.source_csv);
    const data::Dataset target = data::load_csv(args.target_csv);
    for (const data::Dataset* ds : {&source, &target}) {
        if (ds->n_features() != network.topology.input_dim) {
            throw ValidationError("checkpoint expects " +
                                  std::to_string(network.topology.input_dim) +
                                  " features, data has " + std::to_string(ds->n_features()));
        }
    }

    std::ofstream out(args.out_csv);
    if (!out) throw IoError("cannot open for writing: " + args.out_csv);
    out << "metric,dataset,value\n";
    for (const std::string& metric : args.metrics) {
        if (metric == "accuracy") {
            out << "accuracy,source," << fmt_double(eval::accuracy(network, source)) << '\n';
            if (target.has_labels()) {
                out << "accuracy,target," << fmt_double(eval::accuracy(network, target)) << '\n';
            }
        } else {
            const Matrix fs_feat = eval::adapted_features(network, source);
            const Matrix ft_feat = eval::adapted_features(network, target);
            const eval::ProxyAResult proxy =
                eval::proxy_a_distance(fs_feat, ft_feat, args.probe);
            out << "proxy_a,source_target," << fmt_double(proxy.d_a) << '\n';
        }
    }
    if (!out) throw IoError("failed while writing: " + args.out_csv);
    std::cout << "wrote " << args.out_csv << "\n";
    return 0;
}

namespace {

fs::path cell_path(const fs::path& cells_dir, const std::string& variant, std::size_t k,
                   std::uint64_t seed) {
    return cells_dir /
           (variant + "-k" + std::to_string(k) + "-seed" + std::to_string(seed) + ".csv");
}

constexpr const char* kSweepHeader = "variant,k,seed,acc_tgt,acc_src,d_A";

void save_cell(const fs::path& path, const eval::SweepCell& cell) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << kSweepHeader << '\n'
        << cell.variant << ',' << cell.k << ',' << cell.seed << ',' << fmt_double(cell.acc_tgt)
        << ',' << fmt_double(cell.acc_src) << ',' << fmt_double(cell.d_a) << '\n';
    if (!out) throw IoError("failed while writing: " + path.string());
}

eval::SweepCell load_cell(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string header;
    std::string row;
    if (!std::getline(in, header) || trim(header) != kSweepHeader || !std::getline(in, row)) {
        throw ParseError(path.string() + ": malformed sweep cell file");
    }
    const std::vector<std::string> cells = split(trim(row), ',');
    if (cells.size() != 6) throw ParseError(path.string() + ": expected 6 cells");
    eval::SweepCell cell;
    cell.variant = cells[0];
    cell.k = static_cast<std::size_t>(parse_long(cells[1], path.string()));
    cell.seed = static_cast<std::uint64_t>(parse_long(cells[2], path.string()));
    cell.acc_tgt = parse_double(cells[3], path.string());
    cell.acc_src = parse_double(cells[4], path.string());
    cell.d_a = parse_double(cells[5], path.string());
    return cell;
}

}  // namespace

int cmd_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const LoadedData loaded = load_experiment_data(cfg.data, true);
    const fs::path sweep_dir = fs::path(cfg.out) / cfg.experiment / "sweep";
    const fs::path cells_dir = sweep_dir / "cells";
    std::error_code ec;
    fs::create_directories(cells_dir, ec);
    if (ec) throw IoError("cannot create " + cells_dir.string() + ": " + ec.message());

    const eval::ProbeConfig probe{cfg.eval.probe_steps, cfg.eval.probe_lr, 0};
    const auto lookup = [&](const std::string& variant, std::size_t k,
                            std::uint64_t seed) -> std::optional<eval::SweepCell> {
        const fs::path path = cell_path(cells_dir, variant, k, seed);
        if (!fs::exists(path)) return std::nullopt;
        return load_cell(path);
    };
    const auto flush = [&](const eval::SweepCell& cell) {
        save_cell(cell_path(cells_dir, cell.variant, cell.k, cell.seed), cell);
    };

    // The rank table compares the curriculum model against two non-ensemble
    // baselines; those baseline runs flush to cell files but stay out of the
    // sweep table, which holds only the d3a grid and the cd3a trace.
    std::vector<eval::SweepCell> baseline_cells;
    std::vector<eval::SweepFailure> failures;
    for (const adapt::Variant variant : {adapt::Variant::source_only, adapt::Variant::grl}) {
        const std::size_t k_label = variant == adapt::Variant::grl ? 1 : 0;
        for (std::uint64_t seed : cfg.seeds) {
            const std::string name = adapt::variant_name(variant);
            if (std::optional<eval::SweepCell> cached = lookup(name, k_label, seed)) {
                baseline_cells.push_back(*cached);
                continue;
            }
            adapt::TrainConfig cell_cfg = cfg.train;
            cell_cfg.variant = variant;
            cell_cfg.seed = seed;
            try {
                const eval::SweepCell cell = eval::run_sweep_cell(
                    loaded.source, loaded.target_train, *loaded.target_eval, cell_cfg, probe);
                flush(cell);
                baseline_cells.push_back(cell);
            } catch (const std::exception& e) {
                failures.push_back({name, k_label, seed, e.what()});
            }
        }
    }

    const eval::SweepResult swept =
        eval::sweep_k(loaded.source, loaded.target_train, *loaded.target_eval, cfg.train,
                      cfg.sweep.k_values, cfg.seeds, probe, flush, lookup);
    failures.insert(failures.end(), swept.failures.begin(), swept.failures.end());

    {
        std::ofstream out(sweep_dir / "sweep.csv");
        if (!out) throw IoError("cannot open for writing: " + (sweep_dir / "sweep.csv").string());
        out << kSweepHeader << '\n';
        for (const eval::SweepCell& cell : swept.cells) {
            out << cell.variant << ',' << cell.k << ',' << cell.seed << ','
                << fmt_double(cell.acc_tgt) << ',' << fmt_double(cell.acc_src) << ','
                << fmt_double(cell.d_a) << '\n';
        }
    }
    {
        std::ofstream out(sweep_dir / "summary.csv");
        if (!out) {
            throw IoError("cannot open for writing: " + (sweep_dir / "summary.csv").string());
        }
        out << "variant,k,mean_acc_tgt,std_acc_tgt\n";
        for (const eval::SweepSummaryRow& row : swept.summary) {
            out << row.variant << ',' << row.k << ',' << fmt_double(row.mean_acc_tgt) << ','
                << fmt_double(row.std_acc_tgt) << '\n';
        }
    }

    // Rank table over {source_only, grl, cd3a}, one dataset row per seed.
    std::vector<eval::SweepCell> rank_pool = baseline_cells;
    for (const eval::SweepCell& cell : swept.cells) {
        if (cell.variant == "cd3a") rank_pool.push_back(cell);
    }
    const std::vector<std::string> methods{"source_only", "grl", "cd3a"};
    std::vector<std::vector<double>> rank_rows;
    for (std::uint64_t seed : cfg.seeds) {
        std::vector<double> row;
        for (const std::string& method : methods) {
            for (const eval::SweepCell& cell : rank_pool) {
                if (cell.variant == method && cell.seed == seed) {
                    row.push_back(cell.acc_tgt);
                    break;
                }
            }
        }
        if (row.size() == methods.size()) rank_rows.push_back(row);
    }
    if (!rank_rows.empty()) {
        Matrix scores(rank_rows.size(), methods.size());
        for (std::size_t r = 0; r < rank_rows.size(); ++r) {
            for (std::size_t c = 0; c < methods.size(); ++c) scores(r, c) = rank_rows[r][c];
        }
        const eval::RankTable table = eval::average_ranks(scores, true);
        const double cd = eval::nemenyi_cd(methods.size(), rank_rows.size(), 0.05);
        std::ofstream out(sweep_dir / "cd_diagram.csv");
        if (!out) {
            throw IoError("cannot open for writing: " + (sweep_dir / "cd_diagram.csv").string());
        }
        out << "method,avg_rank\n";
        for (std::size_t c = 0; c < methods.size(); ++c) {
            out << methods[c] << ',' << fmt_double(table.avg_ranks[c]) << '\n';
        }
        out << "cd," << fmt_double(cd) << '\n';
    } else {
        std::cerr << "cd_diagram.csv skipped: no seed has all of source_only, grl, cd3a\n";
    }

    if (!failures.empty()) {
        std::cerr << "failed cells:\n";
        for (const eval::SweepFailure& f : failures) {
            std::cerr << "  " << f.variant << " k=" << f.k << " seed=" << f.seed << ": "
                      << f.message << '\n';
        }
        return 1;
    }
    std::cout << "wrote " << (sweep_dir / "sweep.csv").string() << ", "
              << (sweep_dir / "summary.csv").string() << ", "
              << (sweep_dir / "cd_diagram.csv").string() << "\n";
    return 0;
}

int cmd_grad_check(std::size_t n_configs, std::uint64_t seed, double epsilon) {
    const double worst = gradient_check_suite(n_configs, seed, epsilon);
    std::cout << "grad-check: worst relative error " << fmt_double(worst) << " over "
              << n_configs << " configurations\n";
    return worst < 1e-4 ? 0 : 1;
}

}  // namespace dda::cli
