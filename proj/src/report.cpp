#include "biasaudit/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "biasaudit/errors.hpp"

namespace biasaudit {
namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, msg); }

fs::path resolve_existing(const fs::path& base, const json& value, const std::string& what) {
  if (!value.is_string()) config_error(what + " must be a path string");
  fs::path p = value.get<std::string>();
  if (p.is_relative()) p = base / p;
  if (!fs::exists(p)) config_error(what + " does not exist: " + p.string());
  return p;
}

std::map<std::string, fs::path> path_map(const fs::path& base, const json& j, const std::string& what) {
  std::map<std::string, fs::path> out;
  if (j.is_null()) return out;
  if (!j.is_object()) config_error(what + " must be an object of name -> path");
  for (const auto& [key, value] : j.items()) out[key] = resolve_existing(base, value, what + "." + key);
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string percent(double fraction) { return fixed(100.0 * fraction, 2) + "%"; }

std::string signed_percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.2f%%", 100.0 * fraction);
  return buf;
}

ordered_json report_header(const AuditConfig& cfg, const char* command) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config_digest"] = config_digest(cfg);
  return j;
}

void write_report(const AuditConfig& cfg, const std::string& name, const ordered_json& j,
                  const std::string& table) {
  fs::create_directories(cfg.out_dir);
  write_text_file(cfg.out_dir / (name + ".json"), j.dump(2) + "\n");
  write_text_file(cfg.out_dir / (name + ".txt"), table);
}

const fs::path& dataset_path(const AuditConfig& cfg, const std::string& split) {
  auto it = cfg.datasets.find(split);
  if (it == cfg.datasets.end()) config_error("dataset '" + split + "' is not configured");
  return it->second;
}

Dataset load_dataset(const AuditConfig& cfg, const std::string& split) {
  return load_cifar_batch(dataset_path(cfg, split), split);
}

bool has_features(const ModelSpec& m, const std::string& split) { return m.features.count(split) > 0; }

FeatureMatrix load_features(const ModelSpec& m, const std::string& split,
                            std::size_t expected_rows) {
  auto it = m.features.find(split);
  if (it == m.features.end()) config_error("model '" + m.id + "' has no '" + split + "' features");
  auto fm = read_features(it->second, m.id, split);
  validate_features(fm, expected_rows);
  return fm;
}

SubsetManifest gap_manifest(const AuditConfig& cfg) {
  if (auto it = cfg.manifests.find("gap"); it != cfg.manifests.end()) return read_manifest(it->second, "gap");
  const fs::path produced = cfg.out_dir / "gap_manifest.txt";
  if (fs::exists(produced)) return read_manifest(produced, "gap");
  config_error("no gap manifest configured and " + produced.string() + " does not exist; run 'gap' first");
}

struct LoadedProbe {
  ProbeModel model;
  bool normalize = true;
};

LoadedProbe obtain_probe(const AuditConfig& cfg, const ModelSpec& m) {
  if (m.probe) {
    const json j = json::parse(read_text_file(*m.probe));
    return {probe_from_json(j), j.value("normalize", true)};
  }
  const Dataset train = load_dataset(cfg, "train");
  FeatureMatrix fm = load_features(m, "train", train.size());
  if (cfg.probe_normalize) fm = normalize_rows(fm);
  return {train_probe(fm, dataset_labels(train), cfg.probe, cfg.num_classes), cfg.probe_normalize};
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

AuditConfig parse_config(const json& j_in, const fs::path& base_dir, const ConfigOverrides& overrides) {
  AuditConfig cfg;
  json j = j_in;
  if (!j.is_object()) config_error("config must be a JSON object");
  if (overrides.out_dir) j["out"] = fs::absolute(*overrides.out_dir).string();  // relative to the caller
  if (overrides.seed) j["seed"] = *overrides.seed;
  if (overrides.k) j["knn"]["k"] = *overrides.k;

  try {
    cfg.datasets = path_map(base_dir, j.value("datasets", json()), "datasets");
    cfg.manifests = path_map(base_dir, j.value("manifests", json()), "manifests");

    std::set<std::string> ids;
    for (const auto& mj : j.value("models", json::array())) {
      ModelSpec m;
      m.id = mj.at("id").get<std::string>();
      if (m.id.empty() || !ids.insert(m.id).second) config_error("model ids must be unique and non-empty");
      m.supervised = mj.value("supervised", false);
      m.features = path_map(base_dir, mj.value("features", json()), "models." + m.id + ".features");
      if (mj.contains("predictions"))
        m.predictions = resolve_existing(base_dir, mj["predictions"], "models." + m.id + ".predictions");
      m.distorted_predictions = path_map(base_dir, mj.value("distorted_predictions", json()),
                                         "models." + m.id + ".distorted_predictions");
      if (mj.contains("probe")) m.probe = resolve_existing(base_dir, mj["probe"], "models." + m.id + ".probe");
      cfg.models.push_back(std::move(m));
    }

    const json knn = j.value("knn", json::object());
    const long long k = knn.value("k", 4LL);
    if (k < 1) config_error("knn.k must be at least 1");
    cfg.knn.k = static_cast<std::size_t>(k);
    cfg.knn_reference = knn.value("reference", std::string("train"));
    cfg.query_split = j.value("query_split", std::string("test"));
    cfg.knn.exclude_self = knn.value("exclude_self", cfg.knn_reference == cfg.query_split);

    const json probe = j.value("probe", json::object());
    cfg.probe.step_size = probe.value("step_size", 0.1);
    cfg.probe.iterations = probe.value("iterations", 500);
    cfg.probe.l2_penalty = probe.value("l2_penalty", 0.0);
    cfg.probe_normalize = probe.value("normalize", true);
    cfg.num_classes = probe.value("num_classes", kNumClasses);
    if (!(cfg.probe.step_size > 0) || cfg.probe.iterations < 0 || !(cfg.probe.l2_penalty >= 0) ||
        cfg.num_classes < 1 || cfg.num_classes > kNumClasses) {
      config_error("probe settings out of range");
    }

    const json dist = j.value("distortion", json::object());
    cfg.distortion_kinds = dist.value("kinds", std::vector<std::string>{});
    for (const auto& kind : cfg.distortion_kinds) {
      if (kind != "color" && kind != "flip" && kind != "gray" && kind != "rotate")
        config_error("unknown distortion kind '" + kind + "'");
    }
    cfg.distortion_input = dist.value("input", std::string());
    if (!cfg.distortion_input.empty() && !cfg.datasets.count(cfg.distortion_input))
      config_error("distortion.input names unknown dataset '" + cfg.distortion_input + "'");
    cfg.distortion.rotate_max_degrees = dist.value("rotate_max_degrees", 30.0);
    if (dist.contains("jitter")) {
      const json& jt = dist["jitter"];
      auto range = [&](const char* key, FactorRange& r) {
        if (!jt.contains(key)) return;
        const auto v = jt[key].get<std::vector<double>>();
        if (v.size() != 2) config_error(std::string("jitter.") + key + " must be [lo, hi]");
        r = {v[0], v[1]};
      };
      range("brightness", cfg.distortion.jitter.brightness);
      range("contrast", cfg.distortion.jitter.contrast);
      range("saturation", cfg.distortion.jitter.saturation);
      if (jt.contains("hue_shift")) {
        const auto v = jt["hue_shift"].get<std::vector<double>>();
        if (v.size() != 2) config_error("jitter.hue_shift must be [lo, hi]");
        cfg.distortion.jitter.hue_lo = v[0];
        cfg.distortion.jitter.hue_hi = v[1];
      }
    }
    try {
      validate(cfg.distortion.jitter);
    } catch (const Error& e) {
      config_error(e.what());
    }

    cfg.seed = j.value("seed", std::uint64_t{0});
    fs::path out = j.value("out", std::string("out"));
    cfg.out_dir = out.is_relative() ? base_dir / out : out;
  } catch (const json::exception& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  cfg.effective = std::move(j);
  return cfg;
}

AuditConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
  if (!fs::exists(path)) config_error("config file does not exist: " + path.string());
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path(), overrides);
}

std::string config_digest(const AuditConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.effective.dump())));
  return buf;
}

json probe_to_json(const ProbeModel& model) {
  json j;
  j["num_classes"] = model.num_classes();
  j["dim"] = model.dim();
  j["weights"] = json::array();
  for (Eigen::Index c = 0; c < model.weights.rows(); ++c) {
    std::vector<double> row(model.weights.cols());
    for (Eigen::Index d = 0; d < model.weights.cols(); ++d) row[d] = model.weights(c, d);
    j["weights"].push_back(row);
  }
  j["bias"] = std::vector<double>(model.bias.data(), model.bias.data() + model.bias.size());
  return j;
}

ProbeModel probe_from_json(const json& j) {
  try {
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (rows.empty() || rows.size() != bias.size())
      fail(ErrorKind::MalformedFile, "probe weights and bias disagree on class count");
    ProbeModel m{Eigen::MatrixXd(rows.size(), rows.front().size()), Eigen::VectorXd(bias.size())};
    for (std::size_t c = 0; c < rows.size(); ++c) {
      if (rows[c].size() != rows.front().size()) fail(ErrorKind::MalformedFile, "ragged probe weights");
      for (std::size_t d = 0; d < rows[c].size(); ++d) m.weights(c, d) = rows[c][d];
      m.bias[c] = bias[c];
    }
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedFile, std::string("malformed probe file: ") + e.what());
  }
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      if (c == 0) {
        line += cell + std::string(width[c] - cell.size(), ' ');
      } else {
        line += "  " + std::string(width[c] - cell.size(), ' ') + cell;
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) emit(r);
  return out.str();
}

// ---------------------------------------------------------------------------
// Commands

GapSet cmd_gap(const AuditConfig& cfg) {
  std::vector<PredictionTable> unsup;
  std::optional<PredictionTable> sup;
  std::vector<std::string> unsup_ids;
  for (const auto& m : cfg.models) {
    if (!m.predictions) continue;
    auto table = read_predictions(*m.predictions, m.id);
    if (m.supervised) {
      if (sup) config_error("more than one supervised model has predictions");
      sup = std::move(table);
    } else {
      unsup_ids.push_back(m.id);
      unsup.push_back(std::move(table));
    }
  }
  if (!sup) config_error("gap needs predictions for one supervised model");
  if (unsup.empty()) config_error("gap needs predictions for at least one unsupervised model");

  const GapSet gap = agreement_and_gap(unsup, *sup);
  fs::create_directories(cfg.out_dir);
  write_manifest(gap.indices, cfg.out_dir / "gap_manifest.txt");

  ordered_json j = report_header(cfg, "gap");
  j["unsupervised"] = unsup_ids;
  j["supervised"] = sup->model_id;
  j["images"] = sup->size();
  j["shared_wrong"] = gap.shared_wrong_count;
  j["shared_wrong_same"] = gap.shared_wrong_same_count;
  j["gap"] = gap.gap_count;
  j["manifest"] = "gap_manifest.txt";
  const std::string table = format_table(
      {"images", "shared_wrong", "shared_wrong_same", "gap"},
      {{std::to_string(sup->size()), std::to_string(gap.shared_wrong_count),
        std::to_string(gap.shared_wrong_same_count), std::to_string(gap.gap_count)}});
  write_report(cfg, "gap", j, table);
  return gap;
}

std::vector<ColorBiasReport> cmd_colorbias(const AuditConfig& cfg) {
  const SubsetManifest subset = gap_manifest(cfg);
  const Dataset query_imgs = load_dataset(cfg, cfg.query_split);
  const Dataset ref_imgs = cfg.knn_reference == cfg.query_split ? query_imgs : load_dataset(cfg, cfg.knn_reference);

  std::vector<ColorBiasReport> reports;
  for (const auto& m : cfg.models) {
    if (!has_features(m, cfg.query_split) || !has_features(m, cfg.knn_reference)) continue;
    const auto query = normalize_rows(load_features(m, cfg.query_split, query_imgs.size()));
    const auto ref = cfg.knn_reference == cfg.query_split
                         ? query
                         : normalize_rows(load_features(m, cfg.knn_reference, ref_imgs.size()));
    reports.push_back(color_bias_score(subset, query, ref, query_imgs, ref_imgs, cfg.knn));
  }
  if (reports.empty()) config_error("colorbias: no model has both query and reference features");

  ordered_json j = report_header(cfg, "colorbias");
  j["k"] = cfg.knn.k;
  j["reference"] = cfg.knn_reference;
  j["subset_size"] = subset.size();
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    ordered_json mj;
    mj["model"] = r.model_id;
    mj["mean_emd"] = r.mean_emd;
    mj["per_query"] = ordered_json::array();
    for (const auto& [idx, v] : r.per_query_emd) mj["per_query"].push_back({{"index", idx}, {"emd", v}});
    j["models"].push_back(mj);
    rows.push_back({r.model_id, fixed(r.mean_emd, 2), std::to_string(r.per_query_emd.size())});
  }
  write_report(cfg, "colorbias", j, format_table({"model", "EMD", "n"}, rows));
  return reports;
}

std::vector<ShapeBiasReport> cmd_shapebias(const AuditConfig& cfg) {
  const Dataset sil = load_dataset(cfg, "silhouette");
  SubsetManifest manifest;
  if (auto it = cfg.manifests.find("silhouette"); it != cfg.manifests.end()) {
    manifest = read_manifest(it->second, "silhouette");
  } else {
    manifest.name = "silhouette";
    for (std::size_t i = 0; i < sil.size(); ++i) manifest.indices.push_back(i);
  }
  const auto labels = dataset_labels(sil);

  std::vector<ShapeBiasReport> reports;
  for (const auto& m : cfg.models) {
    if (!has_features(m, "silhouette")) continue;
    const auto probe = obtain_probe(cfg, m);
    auto feats = load_features(m, "silhouette", sil.size());
    if (probe.normalize) feats = normalize_rows(feats);
    reports.push_back(shape_bias_eval(feats, manifest, labels, probe.model));
  }
  if (reports.empty()) config_error("shapebias: no model has silhouette features");

  ordered_json j = report_header(cfg, "shapebias");
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    j["models"].push_back({{"model", r.model_id}, {"accuracy", r.accuracy}, {"n", r.n}});
    rows.push_back({r.model_id, percent(r.accuracy), std::to_string(r.n)});
  }
  write_report(cfg, "shapebias", j, format_table({"model", "Acc", "n"}, rows));
  return reports;
}

std::vector<DistortionReport> cmd_distort(const AuditConfig& cfg) {
  bool wrote_datasets = false;
  if (!cfg.distortion_input.empty()) {
    if (cfg.distortion_kinds.empty()) config_error("distortion.input is set but distortion.kinds is empty");
    const Dataset input = load_dataset(cfg, cfg.distortion_input);
    fs::create_directories(cfg.out_dir);
    for (const auto& kind : cfg.distortion_kinds) {
      const Dataset out = distort_dataset(input, kind, cfg.distortion, cfg.seed);
      write_cifar_batch(out, cfg.out_dir / (out.split_name + ".bin"));
      write_text_file(cfg.out_dir / (out.split_name + ".json"),
                      distortion_sidecar(kind, cfg.distortion, cfg.seed));
    }
    wrote_datasets = true;
  }

  auto kind_wanted = [&](const std::string& kind) {
    return cfg.distortion_kinds.empty() ||
           std::find(cfg.distortion_kinds.begin(), cfg.distortion_kinds.end(), kind) !=
               cfg.distortion_kinds.end();
  };

  std::vector<DistortionReport> reports;
  std::optional<Dataset> query_ds;
  for (const auto& m : cfg.models) {
    std::map<std::string, PredictionTable> distorted;
    std::optional<PredictionTable> baseline;
    if (m.predictions && !m.distorted_predictions.empty()) {
      baseline = read_predictions(*m.predictions, m.id);
      for (const auto& [kind, path] : m.distorted_predictions)
        if (kind_wanted(kind)) distorted[kind] = read_predictions(path, m.id);
    } else if (has_features(m, cfg.query_split)) {
      std::vector<std::string> kinds;
      for (const auto& [split, path] : m.features) {
        const std::string prefix = cfg.query_split + "-";
        if (split.rfind(prefix, 0) == 0 && kind_wanted(split.substr(prefix.size())))
          kinds.push_back(split.substr(prefix.size()));
      }
      if (kinds.empty()) continue;
      if (!query_ds) query_ds = load_dataset(cfg, cfg.query_split);
      const auto labels = dataset_labels(*query_ds);
      const auto probe = obtain_probe(cfg, m);
      auto predict = [&](const std::string& split) {
        auto fm = load_features(m, split, query_ds->size());
        if (probe.normalize) fm = normalize_rows(fm);
        auto pt = probe_predict(probe.model, fm, labels);
        pt.model_id = m.id;
        return pt;
      };
      baseline = predict(cfg.query_split);
      for (const auto& kind : kinds) distorted[kind] = predict(cfg.query_split + "-" + kind);
    }
    if (!baseline || distorted.empty()) continue;
    reports.push_back(distortion_eval(*baseline, distorted));
  }
  if (reports.empty() && !wrote_datasets)
    config_error("distort: nothing to do (no distortion input and no model with distorted data)");

  std::vector<std::string> columns = cfg.distortion_kinds;
  if (columns.empty()) {
    std::set<std::string> all;
    for (const auto& r : reports)
      for (const auto& [k, v] : r.deltas) all.insert(k);
    columns.assign(all.begin(), all.end());
  }

  ordered_json j = report_header(cfg, "distort");
  j["seed"] = cfg.seed;
  j["models"] = ordered_json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    ordered_json mj;
    mj["model"] = r.model_id;
    mj["baseline"] = r.baseline_acc;
    mj["deltas"] = ordered_json::object();
    std::vector<std::string> row{r.model_id, percent(r.baseline_acc)};
    for (const auto& kind : columns) {
      auto it = r.deltas.find(kind);
      if (it != r.deltas.end()) mj["deltas"][kind] = it->second;
      row.push_back(it == r.deltas.end() ? "-" : signed_percent(it->second));
    }
    j["models"].push_back(mj);
    rows.push_back(row);
  }
  std::vector<std::string> header{"model", "baseline"};
  header.insert(header.end(), columns.begin(), columns.end());
  write_report(cfg, "distort", j, format_table(header, rows));
  return reports;
}

std::vector<KnnAccuracy> cmd_knn(const AuditConfig& cfg) {
  const SubsetManifest subset = gap_manifest(cfg);
  if (subset.indices.empty()) fail(ErrorKind::InvalidArgument, "knn: gap manifest is empty");
  const Dataset query_ds = load_dataset(cfg, cfg.query_split);
  const Dataset ref_ds = cfg.knn_reference == cfg.query_split ? query_ds : load_dataset(cfg, cfg.knn_reference);
  const auto query_labels = dataset_labels(query_ds);
  const auto ref_labels = dataset_labels(ref_ds);

  std::vector<KnnAccuracy> results;
  std::vector<PredictionTable> tables;
  for (const auto& m : cfg.models) {
    if (!has_features(m, cfg.query_split) || !has_features(m, cfg.knn_reference)) continue;
    const auto query = normalize_rows(load_features(m, cfg.query_split, query_ds.size()));
    const auto ref = cfg.knn_reference == cfg.query_split
                         ? query
                         : normalize_rows(load_features(m, cfg.knn_reference, ref_ds.size()));
    auto pt = knn_subset_predictions(subset, query, query_labels, ref, ref_labels, cfg.knn);
    results.push_back({m.id, probe_accuracy(pt), pt.size()});
  }
  if (results.empty()) config_error("knn: no model has both query and reference features");

  ordered_json j = report_header(cfg, "knn");
  j["k"] = cfg.knn.k;
  j["reference"] = cfg.knn_reference;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    j["models"].push_back({{"model", r.model_id}, {"accuracy", r.accuracy}, {"n", r.n}});
    rows.push_back({r.model_id, percent(r.accuracy), std::to_string(r.n)});
  }
  write_report(cfg, "knn", j, format_table({"model", "kNN-" + std::to_string(cfg.knn.k), "n"}, rows));
  return results;
}

std::vector<ProbeAccuracy> cmd_probe(const AuditConfig& cfg) {
  const Dataset train = load_dataset(cfg, "train");
  const auto train_labels = dataset_labels(train);
  std::optional<Dataset> test;
  if (cfg.datasets.count(cfg.query_split)) test = load_dataset(cfg, cfg.query_split);

  std::vector<ProbeAccuracy> results;
  fs::create_directories(cfg.out_dir);
  for (const auto& m : cfg.models) {
    if (!has_features(m, "train")) continue;
    auto train_fm = load_features(m, "train", train.size());
    if (cfg.probe_normalize) train_fm = normalize_rows(train_fm);
    const ProbeModel model = train_probe(train_fm, train_labels, cfg.probe, cfg.num_classes);

    json pj = probe_to_json(model);
    pj["model_id"] = m.id;
    pj["normalize"] = cfg.probe_normalize;
    write_text_file(cfg.out_dir / ("probe_" + m.id + ".json"), pj.dump(2) + "\n");

    ProbeAccuracy acc{m.id, probe_accuracy(probe_predict(model, train_fm, train_labels)), 0.0};
    if (test && has_features(m, cfg.query_split)) {
      auto test_fm = load_features(m, cfg.query_split, test->size());
      if (cfg.probe_normalize) test_fm = normalize_rows(test_fm);
      auto pt = probe_predict(model, test_fm, dataset_labels(*test));
      pt.model_id = m.id;
      acc.test_accuracy = probe_accuracy(pt);
      write_predictions(pt, cfg.out_dir / ("predictions_" + m.id + ".csv"));
    }
    results.push_back(acc);
  }
  if (results.empty()) config_error("probe: no model has train features");

  ordered_json j = report_header(cfg, "probe");
  j["step_size"] = cfg.probe.step_size;
  j["iterations"] = cfg.probe.iterations;
  j["l2_penalty"] = cfg.probe.l2_penalty;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    j["models"].push_back({{"model", r.model_id},
                           {"train_accuracy", r.train_accuracy},
                           {"test_accuracy", r.test_accuracy}});
    rows.push_back({r.model_id, percent(r.train_accuracy), percent(r.test_accuracy)});
  }
  write_report(cfg, "probe", j, format_table({"model", "train", "test"}, rows));
  return results;
}

}  // namespace biasaudit
