// scengen — wind/PV power scenario generation under anomalous weather.
//
// Verbs: ingest, fit, tree, generate, ut, validate. Outputs are plot-ready
// CSV and JSON; every sampling command is deterministic under (data, config,
// seed).

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scengen/config.hpp"
#include "scengen/errors.hpp"
#include "scengen/pipeline.hpp"
#include "scengen/weather.hpp"

namespace {

using namespace scengen;

constexpr int kExitValidation = 2;
constexpr int kExitFit = 3;
constexpr int kExitIo = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string from_date, to_date;
};

PipelineConfig resolve_config(const CommonOptions& opts) {
  PipelineConfig config =
      opts.config_path.empty() ? PipelineConfig::defaults() : load_config(opts.config_path);
  if (opts.seed) config.seed = opts.seed;
  validate(config);
  return config;
}

WeatherDataset load_dataset(const std::string& path, const CommonOptions& opts) {
  WeatherDataset data = ingest(path);
  if (!opts.from_date.empty() || !opts.to_date.empty()) {
    const std::int64_t from =
        opts.from_date.empty() ? std::numeric_limits<std::int64_t>::min()
                               : parse_timestamp(opts.from_date + "T00:00:00");
    const std::int64_t to = opts.to_date.empty() ? std::numeric_limits<std::int64_t>::max()
                                                 : parse_timestamp(opts.to_date + "T00:00:00");
    data = filter_range(data, from, to);
    if (data.records.empty()) throw ValidationError("date filter removed every record");
  }
  return data;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

int run(int argc, char** argv) {
  CLI::App app{"Wind/PV power-output scenario generation under anomalous weather"};
  app.require_subcommand(1);

  CommonOptions opts;
  app.add_option("--config", opts.config_path, "Pipeline configuration JSON");
  app.add_option("--seed", opts.seed, "Master seed (overrides the config)");
  app.add_option("--out", opts.out_dir, "Output directory");
  app.add_option("--from", opts.from_date, "Keep records from this date (YYYY-MM-DD)");
  app.add_option("--to", opts.to_date, "Keep records before this date (YYYY-MM-DD)");

  std::string data_path, models_path, moments_path, scenarios_csv, scenarios_meta, mode = "normal";

  CLI::App* c_ingest = app.add_subcommand("ingest", "Parse and validate a weather CSV");
  c_ingest->add_option("data", data_path, "Weather CSV")->required();

  CLI::App* c_fit = app.add_subcommand("fit", "Fit marginals, copula and climatology");
  c_fit->add_option("data", data_path, "Weather CSV")->required();

  CLI::App* c_tree = app.add_subcommand("tree", "Emit the 16-cell scenario tree");
  c_tree->add_option("models", models_path, "Fitted model bundle JSON")->required();

  CLI::App* c_gen = app.add_subcommand("generate", "Generate and reduce power scenarios");
  c_gen->add_option("models", models_path, "Fitted model bundle JSON")->required();
  c_gen->add_option("--mode", mode, "normal | anomalous | per-cell")
      ->default_val("normal");

  CLI::App* c_ut = app.add_subcommand("ut", "Propagate input moments through the power curves");
  c_ut->add_option("moments", moments_path, "Input moments JSON {mean, cov}")->required();

  CLI::App* c_val = app.add_subcommand("validate", "Goodness-of-fit and scenario fidelity");
  c_val->add_option("models", models_path, "Fitted model bundle JSON")->required();
  c_val->add_option("data", data_path, "Weather CSV")->required();
  c_val->add_option("scenarios", scenarios_csv, "Scenario CSV from `generate`")->required();
  c_val->add_option("--scenario-meta", scenarios_meta,
                    "Scenario sidecar JSON (defaults to <scenarios>.json)");

  CLI11_PARSE(app, argc, argv);
  ensure_out_dir(opts.out_dir);

  if (c_ingest->parsed()) {
    const WeatherDataset data = load_dataset(data_path, opts);
    nlohmann::json report;
    report["source"] = data.source;
    report["records"] = data.records.size();
    report["dropped_rows"] = data.dropped_rows;
    report["gaps"] = data.gap_count;
    report["first"] = format_timestamp(data.records.front().timestamp);
    report["last"] = format_timestamp(data.records.back().timestamp);
    write_text_atomic(join(opts.out_dir, "ingest_report.json"), report.dump(2) + "\n");
    std::cout << report.dump(2) << '\n';
    return 0;
  }

  if (c_fit->parsed()) {
    const PipelineConfig config = resolve_config(opts);
    const WeatherDataset data = load_dataset(data_path, opts);
    const ModelBundle bundle = cmd_fit(data, config);
    write_text_atomic(join(opts.out_dir, "models.json"), bundle_to_json(bundle).dump(2) + "\n");
    nlohmann::json gof;
    gof["wind"] = gof_report_to_json(bundle.wind_gof);
    gof["precip"] = gof_report_to_json(bundle.precip_gof);
    write_text_atomic(join(opts.out_dir, "fit_gof.json"), gof.dump(2) + "\n");
    std::cout << "fit: wrote models.json and fit_gof.json (n=" << bundle.n_records
              << ", wet hours=" << bundle.wet_hours << ", theta=" << bundle.copula.theta << ")\n";
    return 0;
  }

  if (c_tree->parsed()) {
    const PipelineConfig config = resolve_config(opts);
    const ModelBundle bundle = bundle_from_json(load_json(models_path));
    const ScenarioTree tree = cmd_tree(bundle, config);
    write_text_atomic(join(opts.out_dir, "scenario_tree.csv"), tree_to_csv(tree));
    write_text_atomic(join(opts.out_dir, "scenario_tree.txt"), tree_to_text(tree));
    std::cout << tree_to_text(tree);
    return 0;
  }

  if (c_gen->parsed()) {
    const PipelineConfig config = resolve_config(opts);
    if (!config.seed) throw ValidationError("generate: provide --seed or a config seed");
    const ModelBundle bundle = bundle_from_json(load_json(models_path));
    const GenerateMode gmode = generate_mode_from_string(mode);
    const GenerateResult result = cmd_generate(bundle, config, gmode);

    const std::string stem = mode == "per-cell" ? "scenarios_cells" : "scenarios_" + mode;
    if (gmode != GenerateMode::kPerCell) {
      write_text_atomic(join(opts.out_dir, stem + ".csv"), scenario_set_to_csv(result.primary));
      write_text_atomic(join(opts.out_dir, stem + ".json"),
                        scenario_set_meta_to_json(result.primary).dump(2) + "\n");
      write_text_atomic(join(opts.out_dir, stem + "_energy.csv"), energy_summary_to_csv(result));
    }
    char cell_name[64];
    for (std::size_t i = 0; i < result.per_cell.size(); ++i) {
      std::snprintf(cell_name, sizeof(cell_name), "%s_%02zu", stem.c_str(), i + 1);
      write_text_atomic(join(opts.out_dir, std::string(cell_name) + ".csv"),
                        scenario_set_to_csv(result.per_cell[i]));
      write_text_atomic(join(opts.out_dir, std::string(cell_name) + ".json"),
                        scenario_set_meta_to_json(result.per_cell[i]).dump(2) + "\n");
    }
    std::cout << "generate (" << mode << "): " << result.primary.scenarios.size()
              << " scenarios";
    if (!result.energy.empty())
      std::cout << "; max energy scenario " << result.max_energy_id << ", min "
                << result.min_energy_id;
    std::cout << '\n';
    return 0;
  }

  if (c_ut->parsed()) {
    const PipelineConfig config = resolve_config(opts);
    const InputMoments moments = input_moments_from_json(load_json(moments_path));
    const OutputMoments out = cmd_ut(config, moments);
    const std::string text = output_moments_to_json(out).dump(2) + "\n";
    write_text_atomic(join(opts.out_dir, "ut_moments.json"), text);
    std::cout << text;
    return 0;
  }

  if (c_val->parsed()) {
    const PipelineConfig config = resolve_config(opts);
    const ModelBundle bundle = bundle_from_json(load_json(models_path));
    const WeatherDataset data = load_dataset(data_path, opts);
    const std::string meta_path =
        scenarios_meta.empty()
            ? scenarios_csv.substr(0, scenarios_csv.find_last_of('.')) + ".json"
            : scenarios_meta;
    if (!std::filesystem::exists(scenarios_csv) || !std::filesystem::exists(meta_path))
      throw IoError("validate: missing scenario artifacts: " + scenarios_csv + " / " + meta_path);
    const ScenarioSet normal_set = scenario_set_from_csv(slurp(scenarios_csv), load_json(meta_path));

    const ValidationBundle v = cmd_validate(bundle, data, normal_set, config);

    nlohmann::json report;
    report["wind_gof"] = gof_report_to_json(v.wind_gof);
    report["precip_gof"] = gof_report_to_json(v.precip_gof);
    nlohmann::json ranked = nlohmann::json::array();
    for (const GofReport& r : v.precip_comparison.ranked) ranked.push_back(gof_report_to_json(r));
    report["precip_model_ranking"] = ranked;
    nlohmann::json excluded = nlohmann::json::array();
    for (const auto& [kind, reason] : v.precip_comparison.excluded)
      excluded.push_back({{"kind", kind}, {"reason", reason}});
    report["excluded_candidates"] = excluded;
    report["qq_wind_r_squared"] = v.qq_wind.r_squared;
    report["qq_pv_r_squared"] = v.qq_pv.r_squared;
    write_text_atomic(join(opts.out_dir, "validation.json"), report.dump(2) + "\n");
    write_text_atomic(join(opts.out_dir, "qq_wind.csv"), qq_to_csv(v.qq_wind));
    write_text_atomic(join(opts.out_dir, "qq_pv.csv"), qq_to_csv(v.qq_pv));

    // Fig. 15/16-style overlays for the precipitation candidates and the
    // fitted marginals.
    std::vector<double> wind, wet;
    for (const WeatherRecord& rec : data.records) {
      wind.push_back(rec.wind_ms);
      if (rec.precip_mmh > 0.0) wet.push_back(rec.precip_mmh);
    }
    write_text_atomic(join(opts.out_dir, "wind_cdf_overlay.csv"),
                      ecdf_overlay_csv(wind, bundle.wind));
    write_text_atomic(join(opts.out_dir, "wind_pdf_overlay.csv"),
                      pdf_overlay_csv(wind, bundle.wind));
    write_text_atomic(join(opts.out_dir, "precip_cdf_overlay.csv"),
                      ecdf_overlay_csv(wet, bundle.precip));
    write_text_atomic(join(opts.out_dir, "precip_pdf_overlay.csv"),
                      pdf_overlay_csv(wet, bundle.precip));
    std::cout << "validate: wind K-S D=" << v.wind_gof.d << ", precip K-S D=" << v.precip_gof.d
              << ", QQ R^2 wind=" << v.qq_wind.r_squared << " pv=" << v.qq_pv.r_squared << '\n';
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << '\n';
    return kExitFit;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
