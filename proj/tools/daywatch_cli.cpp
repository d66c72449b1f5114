// SPDX-License-Identifier: Apache-2.0
//
// daywatch command-line front end. Talks to the library exclusively through
// the C interface in daywatch.h.
#include <daywatch/daywatch.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(dw_status status, const std::string& context) {
    if (status != DW_OK)
        throw Failure(context + ": " + dw_last_error() + " (" + dw_status_name(status) + ")");
}

template <typename T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(ptr); }
    T** out() { return &ptr; }
    T* get() const { return ptr; }
};

using DatasetHandle = Handle<dw_dataset, dw_dataset_free>;
using HeatmapHandle = Handle<dw_heatmap, dw_heatmap_free>;
using FootmapHandle = Handle<dw_footmap, dw_footmap_free>;
using ClustersHandle = Handle<dw_clusters, dw_clusters_free>;
using TrajHandle = Handle<dw_traj_report, dw_traj_report_free>;
using TsHandle = Handle<dw_ts_report, dw_ts_report_free>;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Failure("cannot write '" + tmp.string() + "'");
        out << text;
        if (!out.flush()) throw Failure("cannot write '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", dw_round2(v));
    return buf;
}

ordered_json metrics_json(const dw_confusion& cm) {
    dw_metrics m{};
    check(dw_metrics_compute(&cm, &m), "metrics");
    return {{"tp", cm.tp},
            {"fp", cm.fp},
            {"fn", cm.fn},
            {"tn", cm.tn},
            {"precision", dw_round2(m.precision)},
            {"recall", dw_round2(m.recall)},
            {"f1", dw_round2(m.f1)}};
}

void print_metrics(const dw_confusion& cm) {
    dw_metrics m{};
    check(dw_metrics_compute(&cm, &m), "metrics");
    std::cout << "tp " << cm.tp << " fp " << cm.fp << " fn " << cm.fn << " tn " << cm.tn << "\n"
              << "precision " << fixed2(m.precision) << "\n"
              << "recall " << fixed2(m.recall) << "\n"
              << "f1 " << fixed2(m.f1) << "\n";
}

// Options shared by the subcommands that read a dataset.
struct DataOptions {
    std::string data;
    std::string labels;
    std::string exclude;
};

struct Context {
    std::string out = ".";
    DataOptions input;

    std::string synth_spec;
    std::uint64_t seed = 42;
    std::uint32_t days = 0;

    struct {
        std::string csv, ppm;
    } heat;
    struct {
        std::string csv, ppm, dates;
    } foot;
    struct {
        std::string csv, membership;
    } clu;
    struct {
        std::string csv, tracks;
    } trj;
    struct {
        std::string csv, series;
    } tsr;
    std::string sweep_csv;
    std::string cluster_days;

    dw_traj_params traj{};
    dw_ts_params ts{};
    bool no_mdl = false;
    bool no_prune = false;
    bool verbose = false;

    std::string pred, truth;
};

void add_data_options(CLI::App* sub, DataOptions& opt) {
    sub->add_option("--data", opt.data, "Dataset directory (scene.toml + YYYY-MM-DD.csv)")->required();
    sub->add_option("--labels", opt.labels, "Day annotations; defaults to <data>/labels.csv when present");
    sub->add_option("--exclude", opt.exclude, "File listing dates to leave out");
}

void add_out_option(CLI::App* sub, Context& ctx) {
    sub->add_option("--out", ctx.out, "Output directory")->capture_default_str();
}

void add_cluster_options(CLI::App* sub, Context& ctx) {
    auto& c = ctx.traj.clustering;
    sub->add_option("--eps", c.eps, "Segment neighborhood radius (px)")->capture_default_str();
    sub->add_option("--min-lines", c.min_lines, "Minimum segments per neighborhood")->capture_default_str();
    sub->add_option("--gamma", c.gamma, "Representative sweep spacing; negative means eps/2")
        ->capture_default_str();
    sub->add_flag("--no-mdl", ctx.no_mdl, "Cluster raw point-to-point segments");
}

void add_ts_options(CLI::App* sub, Context& ctx) {
    sub->add_option("--theta", ctx.ts.theta, "Seconds per count interval")->capture_default_str();
    sub->add_option("--k", ctx.ts.k, "Neighbors")->capture_default_str();
    sub->add_flag("--no-prune", ctx.no_prune, "Disable lower-bound pruning");
}

struct Loaded {
    DatasetHandle dataset;
    ordered_json inputs;
    ordered_json counts;
};

void load(const Context& ctx, Loaded& l) {
    std::string labels = ctx.input.labels;
    if (labels.empty()) {
        const auto fallback = fs::path(ctx.input.data) / "labels.csv";
        if (fs::exists(fallback)) labels = fallback.string();
    }
    dw_load_info info{};
    check(dw_dataset_load(ctx.input.data.c_str(), labels.empty() ? nullptr : labels.c_str(), l.dataset.out(), &info),
          "dataset '" + ctx.input.data + "'");
    if (!ctx.input.exclude.empty())
        check(dw_dataset_exclude_file(l.dataset.get(), ctx.input.exclude.c_str()),
              "exclusion list '" + ctx.input.exclude + "'");
    l.inputs = {{"data", ctx.input.data}, {"labels", labels}, {"exclude", ctx.input.exclude}};
    l.counts = {{"day_files", info.day_files},
                {"days", dw_dataset_day_count(l.dataset.get())},
                {"tracks", dw_dataset_track_count(l.dataset.get())},
                {"points", dw_dataset_point_count(l.dataset.get())},
                {"dropped_tracks", info.dropped_tracks},
                {"out_of_bounds_points", info.out_of_bounds_points}};
}

fs::path prepare_out(const Context& ctx) {
    fs::path dir(ctx.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Failure("cannot create output directory '" + ctx.out + "': " + ec.message());
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& command, ordered_json parameters, ordered_json inputs,
                    ordered_json counts, const std::vector<std::string>& outputs, ordered_json results = nullptr) {
    ordered_json m;
    m["tool"] = "daywatch";
    m["version"] = dw_version();
    m["command"] = command;
    m["parameters"] = std::move(parameters);
    m["inputs"] = std::move(inputs);
    m["counts"] = std::move(counts);
    m["outputs"] = outputs;
    if (!results.is_null()) m["results"] = std::move(results);
    write_text_atomic(dir / (command + ".manifest.json"), m.dump(2) + "\n");
}

ordered_json cluster_params_json(const dw_cluster_params& c) {
    return {{"eps", c.eps},
            {"min_lines", c.min_lines},
            {"mdl_partition", c.mdl_partition != 0},
            {"gamma", c.gamma < 0 ? c.eps / 2 : c.gamma}};
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---- subcommands ----

void run_synth(Context& ctx) {
    std::string spec;
    if (!ctx.synth_spec.empty()) spec = read_text(ctx.synth_spec);
    DatasetHandle ds;
    check(dw_dataset_synthesize(spec.empty() ? nullptr : spec.c_str(), ctx.seed, ctx.days, ds.out()),
          ctx.synth_spec.empty() ? std::string("synthesis") : "spec '" + ctx.synth_spec + "'");
    const auto dir = prepare_out(ctx);
    check(dw_dataset_save(ds.get(), dir.string().c_str()), "output '" + ctx.out + "'");

    std::uint64_t anomalous = 0;
    const auto n = dw_dataset_day_count(ds.get());
    for (size_t i = 0; i < n; ++i) anomalous += dw_dataset_day_label(ds.get(), i) == 1;
    write_manifest(dir, "synth", {{"seed", ctx.seed}, {"days", ctx.days}, {"spec", ctx.synth_spec}},
                   ordered_json::object(),
                   {{"days", n},
                    {"tracks", dw_dataset_track_count(ds.get())},
                    {"points", dw_dataset_point_count(ds.get())},
                    {"anomalous_days", anomalous}},
                   {"scene.toml", "labels.csv"});
    std::cout << "wrote " << n << " days to " << ctx.out << "\n";
}

void run_heatmap(Context& ctx) {
    Loaded l;
    load(ctx, l);
    HeatmapHandle h;
    check(dw_heatmap_compute(l.dataset.get(), h.out()), "heatmap");
    const auto dir = prepare_out(ctx);
    check(dw_heatmap_write_csv(h.get(), (dir / ctx.heat.csv).string().c_str()), "output '" + ctx.heat.csv + "'");
    check(dw_heatmap_write_ppm(h.get(), (dir / ctx.heat.ppm).string().c_str()), "output '" + ctx.heat.ppm + "'");
    l.counts["heatmap_total"] = dw_heatmap_total(h.get());
    l.counts["heatmap_out_of_bounds"] = dw_heatmap_out_of_bounds(h.get());
    write_manifest(dir, "heatmap", ordered_json::object(), l.inputs, l.counts, {ctx.heat.csv, ctx.heat.ppm});
    std::cout << "heatmap " << dw_heatmap_width(h.get()) << "x" << dw_heatmap_height(h.get()) << ", "
              << dw_heatmap_total(h.get()) << " points\n";
}

void run_footmap(Context& ctx) {
    Loaded l;
    load(ctx, l);
    FootmapHandle f;
    check(dw_footmap_compute(l.dataset.get(), f.out()), "footmap");
    const auto dir = prepare_out(ctx);
    check(dw_footmap_write_csv(f.get(), (dir / ctx.foot.csv).string().c_str()), "output '" + ctx.foot.csv + "'");
    check(dw_footmap_write_ppm(f.get(), (dir / ctx.foot.ppm).string().c_str()), "output '" + ctx.foot.ppm + "'");
    check(dw_footmap_write_dates(f.get(), (dir / ctx.foot.dates).string().c_str()), "output '" + ctx.foot.dates + "'");
    l.counts["footmap_total"] = dw_footmap_total(f.get());
    write_manifest(dir, "footmap", ordered_json::object(), l.inputs, l.counts, {ctx.foot.csv, ctx.foot.ppm, ctx.foot.dates});
    std::cout << "footmap " << dw_footmap_pools(f.get()) << " pools x " << dw_footmap_days(f.get()) << " days\n";
}

void run_cluster(Context& ctx) {
    Loaded l;
    load(ctx, l);
    std::vector<std::string> dates = split_list(ctx.cluster_days);
    if (dates.empty()) {
        const auto n = dw_dataset_day_count(l.dataset.get());
        for (size_t i = 0; i < n; ++i) {
            char buf[11];
            check(dw_dataset_day_date(l.dataset.get(), i, buf), "dataset");
            dates.emplace_back(buf);
        }
    }
    std::vector<const char*> ptrs;
    for (const auto& d : dates) ptrs.push_back(d.c_str());
    ctx.traj.clustering.mdl_partition = ctx.no_mdl ? 0 : 1;
    ClustersHandle c;
    check(dw_clusters_compute(l.dataset.get(), ptrs.data(), ptrs.size(), &ctx.traj.clustering, c.out()),
          "clustering");
    const auto dir = prepare_out(ctx);
    check(dw_clusters_write_representatives(c.get(), (dir / ctx.clu.csv).string().c_str()), "output '" + ctx.clu.csv + "'");
    check(dw_clusters_write_membership(c.get(), (dir / ctx.clu.membership).string().c_str()), "output '" + ctx.clu.membership + "'");
    l.counts["clusters"] = dw_clusters_count(c.get());
    l.counts["noise_segments"] = dw_clusters_noise(c.get());
    write_manifest(dir, "cluster", cluster_params_json(ctx.traj.clustering), l.inputs, l.counts, {ctx.clu.csv, ctx.clu.membership});
    std::cout << dw_clusters_count(c.get()) << " clusters, " << dw_clusters_noise(c.get()) << " noise segments\n";
}

void run_predict_traj(Context& ctx) {
    Loaded l;
    load(ctx, l);
    ctx.traj.clustering.mdl_partition = ctx.no_mdl ? 0 : 1;
    TrajHandle r;
    check(dw_predict_trajectory(l.dataset.get(), &ctx.traj, ctx.verbose ? 1 : 0, r.out()), "trajectory prediction");
    const auto dir = prepare_out(ctx);
    std::vector<std::string> outputs{ctx.trj.csv};
    check(dw_traj_report_write_csv(r.get(), (dir / ctx.trj.csv).string().c_str()), "output '" + ctx.trj.csv + "'");
    if (ctx.verbose) {
        check(dw_traj_report_write_tracks(r.get(), (dir / ctx.trj.tracks).string().c_str()), "output '" + ctx.trj.tracks + "'");
        outputs.push_back(ctx.trj.tracks);
    }
    l.counts["windows"] = dw_traj_report_rows(r.get());
    l.counts["undecidable_days"] = dw_traj_report_undecidable(r.get());

    ordered_json params = cluster_params_json(ctx.traj.clustering);
    params["delta"] = ctx.traj.delta;
    params["lambda"] = ctx.traj.lambda;
    params["omega"] = ctx.traj.omega;
    params["epsilon"] = ctx.traj.epsilon;

    ordered_json results = nullptr;
    dw_confusion cm{};
    const bool scored = dw_traj_report_confusion(r.get(), &cm) == DW_OK;
    if (scored) results = metrics_json(cm);
    write_manifest(dir, "predict-traj", params, l.inputs, l.counts, outputs, results);
    std::cout << dw_traj_report_rows(r.get()) << " days predicted, " << dw_traj_report_undecidable(r.get())
              << " undecidable\n";
    if (scored) print_metrics(cm);
}

void run_predict_ts(Context& ctx) {
    Loaded l;
    load(ctx, l);
    ctx.ts.prune = ctx.no_prune ? 0 : 1;
    TsHandle r;
    check(dw_predict_timeseries(l.dataset.get(), &ctx.ts, r.out()), "time-series prediction");
    const auto dir = prepare_out(ctx);
    check(dw_ts_report_write_csv(r.get(), (dir / ctx.tsr.csv).string().c_str()), "output '" + ctx.tsr.csv + "'");
    check(dw_ts_report_write_series(r.get(), (dir / ctx.tsr.series).string().c_str()), "output '" + ctx.tsr.series + "'");
    l.counts["training_days"] = dw_ts_report_training_size(r.get());
    l.counts["test_days"] = dw_ts_report_rows(r.get());

    ordered_json params{{"theta", ctx.ts.theta},
                        {"k", ctx.ts.k},
                        {"band_radius", ctx.ts.band_radius},
                        {"prune", ctx.ts.prune != 0}};
    ordered_json results = nullptr;
    dw_confusion cm{};
    const bool scored = dw_ts_report_confusion(r.get(), &cm) == DW_OK;
    if (scored) results = metrics_json(cm);
    write_manifest(dir, "predict-ts", params, l.inputs, l.counts, {ctx.tsr.csv, ctx.tsr.series}, results);
    std::cout << dw_ts_report_rows(r.get()) << " test days, " << dw_ts_report_training_size(r.get())
              << " training days\n";
    if (scored) print_metrics(cm);
}

void run_sweep_ts(Context& ctx) {
    Loaded l;
    load(ctx, l);
    ctx.ts.prune = ctx.no_prune ? 0 : 1;
    std::string csv = "radius,tp,fp,fn,tn,precision,recall,f1\n";
    ordered_json results = ordered_json::array();
    for (std::uint32_t radius = 0; radius <= 10; ++radius) {
        dw_ts_params p = ctx.ts;
        p.band_radius = radius;
        TsHandle r;
        check(dw_predict_timeseries(l.dataset.get(), &p, r.out()), "time-series prediction (r=" +
                                                                        std::to_string(radius) + ")");
        dw_confusion cm{};
        check(dw_ts_report_confusion(r.get(), &cm), "evaluation (r=" + std::to_string(radius) + ")");
        dw_metrics m{};
        check(dw_metrics_compute(&cm, &m), "metrics");
        csv += std::to_string(radius) + "," + std::to_string(cm.tp) + "," + std::to_string(cm.fp) + "," +
               std::to_string(cm.fn) + "," + std::to_string(cm.tn) + "," + fixed2(m.precision) + "," +
               fixed2(m.recall) + "," + fixed2(m.f1) + "\n";
        auto entry = metrics_json(cm);
        entry["radius"] = radius;
        results.push_back(entry);
        std::cout << "r=" << radius << " precision " << fixed2(m.precision) << " recall " << fixed2(m.recall)
                  << " f1 " << fixed2(m.f1) << "\n";
    }
    const auto dir = prepare_out(ctx);
    write_text_atomic(dir / ctx.sweep_csv, csv);
    write_manifest(dir, "sweep-ts",
                   {{"theta", ctx.ts.theta}, {"k", ctx.ts.k}, {"radii", "0..10"}, {"prune", ctx.ts.prune != 0}},
                   l.inputs, l.counts, {ctx.sweep_csv}, results);
}

void run_eval(Context& ctx) {
    dw_confusion cm{};
    check(dw_evaluate_files(ctx.pred.c_str(), ctx.truth.empty() ? nullptr : ctx.truth.c_str(), &cm),
          "evaluation of '" + ctx.pred + "'" + (ctx.truth.empty() ? "" : " against '" + ctx.truth + "'"));
    print_metrics(cm);
    const auto dir = prepare_out(ctx);
    write_manifest(dir, "eval", ordered_json::object(), {{"pred", ctx.pred}, {"truth", ctx.truth}},
                   {{"days", cm.tp + cm.fp + cm.fn + cm.tn}}, {}, metrics_json(cm));
}

}  // namespace

int main(int argc, char** argv) {
    Context ctx;
    dw_traj_params_default(&ctx.traj);
    dw_ts_params_default(&ctx.ts);

    CLI::App app{"Temporal analytics over day-partitioned trajectory archives", "daywatch"};
    app.set_config("--config", "", "TOML file supplying option values");
    app.set_version_flag("--version", std::string(dw_version()));
    app.require_subcommand(0, 1);

    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
    add_out_option(synth, ctx);
    synth->add_option("--seed", ctx.seed, "Random seed")->capture_default_str();
    synth->add_option("--days", ctx.days, "Number of days (overrides the spec)");
    synth->add_option("--spec", ctx.synth_spec, "JSON scene specification")->check(CLI::ExistingFile);
    synth->callback([&] { run_synth(ctx); });

    auto* heatmap = app.add_subcommand("heatmap", "Per-pixel point counts");
    add_data_options(heatmap, ctx.input);
    add_out_option(heatmap, ctx);
    heatmap->add_option("--csv", ctx.heat.csv, "Count matrix file name")->default_val("heatmap.csv");
    heatmap->add_option("--ppm", ctx.heat.ppm, "Image file name")->default_val("heatmap.ppm");
    heatmap->callback([&] { run_heatmap(ctx); });

    auto* footmap = app.add_subcommand("footmap", "Per-pool, per-day point counts");
    add_data_options(footmap, ctx.input);
    add_out_option(footmap, ctx);
    footmap->add_option("--csv", ctx.foot.csv, "Count matrix file name")->default_val("footmap.csv");
    footmap->add_option("--ppm", ctx.foot.ppm, "Image file name")->default_val("footmap.ppm");
    footmap->add_option("--dates", ctx.foot.dates, "Column date file name")->default_val("footmap_dates.csv");
    footmap->callback([&] { run_footmap(ctx); });

    auto* cluster = app.add_subcommand("cluster", "Cluster the tracks of selected days");
    add_data_options(cluster, ctx.input);
    add_out_option(cluster, ctx);
    add_cluster_options(cluster, ctx);
    cluster->add_option("--days", ctx.cluster_days, "Comma-separated dates (default: all days)");
    cluster->add_option("--csv", ctx.clu.csv, "Representative file name")->default_val("representatives.csv");
    cluster->add_option("--membership", ctx.clu.membership, "Membership file name")->default_val("membership.csv");
    cluster->callback([&] { run_cluster(ctx); });

    auto* traj = app.add_subcommand("predict-traj", "Cluster-statistical day anomaly prediction");
    add_data_options(traj, ctx.input);
    add_out_option(traj, ctx);
    add_cluster_options(traj, ctx);
    traj->add_option("--lambda", ctx.traj.lambda, "Day threshold on the anomalous-track ratio")
        ->capture_default_str();
    traj->add_option("--delta", ctx.traj.delta, "Distance guard (px^2)")->capture_default_str();
    traj->add_option("--omega", ctx.traj.omega, "Window span in days")->capture_default_str();
    traj->add_option("--epsilon", ctx.traj.epsilon, "Window stride in days")->capture_default_str();
    traj->add_flag("--verbose", ctx.verbose, "Also write per-track diagnostics");
    traj->add_option("--csv", ctx.trj.csv, "Per-day prediction file name")->default_val("predictions_traj.csv");
    traj->add_option("--tracks-csv", ctx.trj.tracks, "Per-track diagnostics file name")->default_val("tracks_traj.csv");
    traj->callback([&] { run_predict_traj(ctx); });

    auto* ts = app.add_subcommand("predict-ts", "Count-series nearest-neighbor day prediction");
    add_data_options(ts, ctx.input);
    add_out_option(ts, ctx);
    add_ts_options(ts, ctx);
    ts->add_option("--radius", ctx.ts.band_radius, "Warping band radius")->capture_default_str();
    ts->add_option("--csv", ctx.tsr.csv, "Per-day prediction file name")->default_val("predictions_ts.csv");
    ts->add_option("--series", ctx.tsr.series, "Count series file name")->default_val("count_series.csv");
    ts->callback([&] { run_predict_ts(ctx); });

    auto* sweep = app.add_subcommand("sweep-ts", "Time-series prediction for every radius 0..10");
    add_data_options(sweep, ctx.input);
    add_out_option(sweep, ctx);
    add_ts_options(sweep, ctx);
    sweep->add_option("--csv", ctx.sweep_csv, "Sweep result file name")->default_val("sweep_ts.csv");
    sweep->callback([&] { run_sweep_ts(ctx); });

    auto* eval = app.add_subcommand("eval", "Precision, recall and F1 of a prediction file");
    add_out_option(eval, ctx);
    eval->add_option("--pred", ctx.pred, "Prediction CSV (date,predicted[,label])")->required();
    eval->add_option("--truth", ctx.truth, "Annotation file; defaults to the prediction file's label column");
    eval->callback([&] { run_eval(ctx); });

    try {
        app.parse(argc, argv);
        if (app.get_subcommands().empty()) throw CLI::RequiredError("A subcommand");
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "daywatch: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
