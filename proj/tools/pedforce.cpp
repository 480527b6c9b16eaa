// Copyright 2026 The pedforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pedforce/behavior.hpp"
#include "pedforce/curate.hpp"
#include "pedforce/error.hpp"
#include "pedforce/eval.hpp"
#include "pedforce/ingest.hpp"
#include "pedforce/preprocess.hpp"
#include "pedforce/scenario.hpp"
#include "pedforce/sim.hpp"
#include "pedforce/training.hpp"

namespace fs = std::filesystem;
using namespace pedforce;

namespace
{

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

/// Bad flags or configuration.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct RunConfig
{
  FilterConfig filter;
  SfmParams sfm;
  ClassifierParams classifier;
  TrainConfig train;
  RolloutConfig rollout;
  CurationRules curation;
  NeuralRanges ranges;
  std::set<std::string> explicit_keys;

  bool assign(const std::string & key, const std::string & value)
  {
    const bool known = try_assign(filter, filter_config_fields(), key, value) ||
                       try_assign(sfm, sfm_param_fields(), key, value) ||
                       try_assign(classifier, classifier_param_fields(), key, value) ||
                       try_assign(train, train_config_fields(), key, value) ||
                       try_assign(rollout, rollout_config_fields(), key, value) ||
                       try_assign(curation, curation_rules_fields(), key, value) ||
                       try_assign(ranges, neural_range_fields(), key, value);
    if (known) {
      explicit_keys.insert(key);
    }
    return known;
  }

  void validate() const
  {
    filter.validate();
    sfm.validate();
    classifier.validate();
    train.validate();
    rollout.validate();
    curation.validate();
    if (!(ranges.pedestrian > 0.0 && ranges.obstacle > 0.0 && ranges.robot > 0.0)) {
      throw Error("neural ranges must be positive");
    }
  }
};

template <class T>
void list_keys(std::ostream & os, const char * title, const T & defaults, std::span<const ParamField<T>> fields)
{
  os << "  [" << title << "]\n";
  for (const auto & f : fields) {
    std::string key(f.name);
    key += " = " + format_field(defaults, f);
    key.resize(std::max<std::size_t>(key.size() + 2, 40), ' ');
    os << "    " << key << f.help << '\n';
  }
}

std::string config_help()
{
  const RunConfig d;
  std::ostringstream os;
  os << "\nConfig keys (--config FILE or --set key=value; flag > file > default):\n";
  list_keys(os, "filter", d.filter, filter_config_fields());
  list_keys(os, "forces", d.sfm, sfm_param_fields());
  list_keys(os, "behavior", d.classifier, classifier_param_fields());
  list_keys(os, "curation", d.curation, curation_rules_fields());
  list_keys(os, "training", d.train, train_config_fields());
  list_keys(os, "rollout", d.rollout, rollout_config_fields());
  list_keys(os, "neural", d.ranges, neural_range_fields());
  os << "\nExit codes: 0 success, 1 usage error, 2 data error.\n";
  return os.str();
}

struct Common
{
  std::string config_path;
  std::vector<std::string> sets;
  std::size_t seed = 42;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> k;

  RunConfig load() const
  {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        throw UsageError("cannot open config file " + config_path);
      }
      KeyValues kv;
      try {
        kv = parse_key_values(in);
      } catch (const Error & e) {
        throw UsageError(e.what());
      }
      for (const auto & [key, value] : kv) {
        apply(cfg, key, value);
      }
    }
    for (const auto & s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--set expects key=value, got '" + s + "'");
      }
      apply(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (horizon) {
      cfg.rollout.horizon = *horizon;
    }
    if (k) {
      cfg.rollout.samples_k = *k;
    }
    cfg.rollout.rng_seed = seed;
    cfg.train.rng_seed = seed;
    try {
      cfg.validate();
    } catch (const Error & e) {
      throw UsageError(e.what());
    }
    return cfg;
  }

  static void apply(RunConfig & cfg, const std::string & key, const std::string & value)
  {
    try {
      if (!cfg.assign(key, value)) {
        throw UsageError("unknown config key '" + key + "'");
      }
    } catch (const Error & e) {
      throw UsageError(e.what());
    }
  }
};

void add_common(CLI::App * app, Common & c)
{
  app->add_option("--config", c.config_path, "flat key = value config file");
  app->add_option("--set", c.sets, "override one config key (key=value), repeatable");
  app->add_option("--seed", c.seed, "seed of every random draw")->capture_default_str();
  app->footer(config_help());
}

std::ifstream open_in(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path);
  }
  return in;
}

/// Writes to `path`, or standard output when empty.
template <class F>
void with_output(const std::string & path, F && write)
{
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path);
  }
  write(out);
  if (!out) {
    throw Error("write failed: " + path);
  }
}

std::vector<DatasetRecord> load_records(const std::string & path)
{
  auto in = open_in(path);
  return parse_records(in);
}

SceneMeta load_meta(const std::string & path)
{
  if (path.empty()) {
    return {};
  }
  auto in = open_in(path);
  return read_meta(in);
}

std::map<std::int64_t, RobotState> robot_states(const std::vector<SceneFrame> & scenes)
{
  std::map<std::int64_t, RobotState> out;
  for (const auto & s : scenes) {
    if (s.robot) {
      out[s.frame_index] = *s.robot;
    }
  }
  return out;
}

ForceProvider make_provider(const std::string & name, const std::string & weights, const RunConfig & cfg)
{
  const auto tag = parse_provider_tag(name);
  if (!tag) {
    throw UsageError("unknown provider '" + name + "'");
  }
  ForceProvider p;
  p.tag = *tag;
  p.params = cfg.sfm;
  p.classifier = cfg.classifier;
  p.ranges = cfg.ranges;
  if (p.is_neural()) {
    if (weights.empty()) {
      throw UsageError("provider '" + name + "' needs --weights DIR");
    }
    p.nets = std::make_shared<const NeuralForceSet>(NeuralForceSet::load(weights));
  }
  return p;
}

ScenarioSpec load_scenario(const std::string & path)
{
  auto in = open_in(path);
  return parse_scenario(in);
}

// ---------------------------------------------------------------------------

int run_ingest(const std::string & in_path, const std::string & out_path)
{
  auto records = load_records(in_path);
  const auto assembled = assemble(records, {});
  std::stable_sort(records.begin(), records.end(), [](const auto & a, const auto & b) {
    return a.frame_index != b.frame_index ? a.frame_index < b.frame_index : a.pedestrian_id < b.pedestrian_id;
  });
  with_output(out_path, [&](std::ostream & os) { write_records(os, records); });
  std::cerr << "records " << records.size() << ", pedestrians " << assembled.trajectories.size() << ", frames "
            << assembled.scenes.size() << '\n';
  return 0;
}

int run_preprocess(const RunConfig & cfg, const std::string & in_path, const std::string & out_path,
                   const std::string & report_path)
{
  const auto assembled = assemble(load_records(in_path), {});
  const auto result = run_pipeline(assembled.trajectories, cfg.filter);
  const auto records = to_records(result.kept, robot_states(assembled.scenes), assembled.labels);
  with_output(out_path, [&](std::ostream & os) { write_records(os, records); });
  const auto report = format_report(result.report);
  if (report_path.empty()) {
    std::cerr << report;
  } else {
    with_output(report_path, [&](std::ostream & os) { os << report; });
  }
  return 0;
}

int run_label(const RunConfig & cfg, const std::string & in_path, const std::string & out_path,
              const std::string & records_path)
{
  const auto assembled = assemble(load_records(in_path), {});
  std::map<std::int64_t, const SceneFrame *> by_frame;
  for (const auto & s : assembled.scenes) {
    by_frame[s.frame_index] = &s;
  }
  std::map<std::int64_t, BehaviorLabel> labels;
  std::map<BehaviorLabel, std::size_t> counts;
  std::size_t no_interaction = 0;
  std::ostringstream table;
  table << "ped_id,label\n";
  for (const auto & traj : assembled.trajectories) {
    std::vector<std::optional<Vec2>> track;
    for (const auto & f : traj.frames) {
      const auto * s = by_frame.at(f.frame_index);
      track.push_back(s->robot ? std::optional<Vec2>(s->robot->position) : std::nullopt);
    }
    const auto c = classify_trajectory(traj, track, cfg.classifier);
    if (!c.interaction) {
      ++no_interaction;
      table << traj.pedestrian_id << ",NA\n";
      continue;
    }
    labels[traj.pedestrian_id] = c.label;
    ++counts[c.label];
    table << traj.pedestrian_id << ',' << to_string(c.label) << '\n';
  }
  auto target = out_path;
  if (target.empty()) {
    auto p = fs::path(in_path);
    target = (p.parent_path() / (p.stem().string() + ".labels.csv")).string();
  }
  with_output(target, [&](std::ostream & os) { os << table.str(); });
  if (!records_path.empty()) {
    const auto records = to_records(assembled.trajectories, robot_states(assembled.scenes), labels);
    with_output(records_path, [&](std::ostream & os) { write_records(os, records); });
  }
  for (auto label : {BehaviorLabel::Attraction, BehaviorLabel::Neutral, BehaviorLabel::Avoidance}) {
    std::cerr << to_string(label) << " = " << counts[label] << '\n';
  }
  std::cerr << "no_interaction = " << no_interaction << '\n';
  return 0;
}

/// Shifts a scene's ids and frames so several scenes can share one file.
void offset_scene(SyntheticScene & scene, std::int64_t id_offset, std::int64_t frame_offset, double dt)
{
  const double t_offset = static_cast<double>(frame_offset) * dt;
  for (auto & t : scene.trajectories) {
    t.pedestrian_id += id_offset;
    for (auto & f : t.frames) {
      f.frame_index += frame_offset;
      f.timestamp += t_offset;
    }
  }
  for (auto & s : scene.scenes) {
    s.frame_index += frame_offset;
    s.timestamp += t_offset;
    for (auto & p : s.pedestrians) {
      p.id += id_offset;
    }
  }
  const auto shift = [&](auto & map) {
    std::remove_reference_t<decltype(map)> shifted;
    for (const auto & [id, v] : map) {
      shifted[id + id_offset] = v;
    }
    map = std::move(shifted);
  };
  shift(scene.labels);
  shift(scene.goals);
  shift(scene.groups);
}

int run_synth(const RunConfig & cfg, std::size_t seed, const std::string & scenario_path, const std::string & random,
              std::size_t count, std::optional<std::size_t> horizon, const std::string & out_path,
              const std::string & meta_path)
{
  std::vector<DatasetRecord> records;
  SceneMeta meta;
  if (!scenario_path.empty()) {
    if (!random.empty()) {
      throw UsageError("--scenario and --random are exclusive");
    }
    const auto scene = synthesize(cfg.sfm, load_scenario(scenario_path), seed, cfg.classifier);
    records = to_records(scene);
    meta = meta_of(scene);
  } else {
    static const std::map<std::string, int> kinds{{"none", 0}, {"stationary", 1}, {"moving", 2}, {"mixed", -1}};
    const auto kind = kinds.find(random);
    if (kind == kinds.end()) {
      throw UsageError("synth needs --scenario FILE or --random {none|stationary|moving|mixed}");
    }
    // Walls are shared by every scene of a file, so random scenes always have them.
    ScenarioMix mix;
    mix.wall_probability = 1.0;
    if (horizon) {
      mix.horizon = *horizon;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto k = kind->second < 0 ? static_cast<SceneKind>(i % 3) : static_cast<SceneKind>(kind->second);
      auto scene = synthesize(cfg.sfm, random_scenario(k, seed + i, mix), seed + i, cfg.classifier);
      offset_scene(scene, static_cast<std::int64_t>(i) * 1000, static_cast<std::int64_t>(i) * 100000, cfg.rollout.dt);
      for (auto & r : to_records(scene)) {
        records.push_back(r);
      }
      auto m = meta_of(scene);
      meta.obstacles = m.obstacles;
      meta.goals.merge(m.goals);
      meta.groups.merge(m.groups);
    }
  }
  with_output(out_path, [&](std::ostream & os) { write_records(os, records); });
  if (!meta_path.empty()) {
    with_output(meta_path, [&](std::ostream & os) { write_meta(os, meta); });
  }
  return 0;
}

int run_curate(const RunConfig & cfg, const std::string & in_path, const std::string & meta_path,
               const std::string & out_path)
{
  const auto meta = load_meta(meta_path);
  const auto assembled = assemble(load_records(in_path), meta.obstacles);
  CurationInput input{assembled.trajectories, assembled.labels, assembled.scenes, meta.goals, meta.groups};
  const auto result = curate(input, cfg.sfm, cfg.curation);
  with_output(out_path, [&](std::ostream & os) { write_samples(os, result.samples); });
  for (std::uint32_t n = 0; n < kNetworkCount; ++n) {
    std::cerr << to_string(static_cast<NetworkId>(n)) << " = " << result.counts[n] << '\n';
  }
  std::cerr << "capped_steps = " << result.capped_steps << "\nexcluded_trajectories = "
            << result.excluded_trajectories << '\n';
  return 0;
}

int run_train(const RunConfig & cfg, const std::string & in_path, const std::string & net_name,
              const std::string & out_dir, const std::string & report_path)
{
  std::vector<TrainingSample> samples;
  {
    auto in = open_in(in_path);
    samples = read_samples(in);
  }
  std::optional<NetworkId> only;
  if (!net_name.empty()) {
    only = parse_network_id(net_name);
    if (!only) {
      throw UsageError("unknown network '" + net_name + "'");
    }
  }
  NeuralForceSet set;
  std::ostringstream report;
  report << "network,epoch,loss\n";
  for (std::uint32_t n = 0; n < kNetworkCount; ++n) {
    const auto id = static_cast<NetworkId>(n);
    if (only && *only != id) {
      continue;
    }
    std::vector<TrainingSample> subset;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(subset), [&](const auto & s) {
      return s.network == id;
    });
    if (subset.empty()) {
      if (only) {
        throw Error("no samples for network '" + net_name + "'");
      }
      std::cerr << "skipping " << to_string(id) << ": no samples\n";
      continue;
    }
    const auto r = train(id, subset, cfg.train);
    report << to_string(id) << ",0," << format_double(r.initial_loss) << '\n';
    for (std::size_t e = 0; e < r.loss_history.size(); ++e) {
      report << to_string(id) << ',' << e + 1 << ',' << format_double(r.loss_history[e]) << '\n';
    }
    std::cerr << to_string(id) << ": " << subset.size() << " samples, loss " << format_double(r.initial_loss)
              << " -> " << format_double(r.loss_history.back()) << '\n';
    set.set(r.weights);
  }
  set.save(out_dir);
  if (!report_path.empty()) {
    with_output(report_path, [&](std::ostream & os) { os << report.str(); });
  }
  return 0;
}

int run_simulate(const RunConfig & cfg, bool horizon_given, const std::string & scenario_path,
                 const std::string & provider_name, const std::string & weights, const std::string & out_path)
{
  auto spec = load_scenario(scenario_path);
  if (horizon_given) {
    spec.horizon = cfg.rollout.horizon;
  }
  const auto provider = make_provider(provider_name, weights, cfg);
  auto rc = cfg.rollout;
  rc.horizon = spec.horizon;
  const auto result = rollout(make_world(spec, rc.dt), provider, rc);
  std::map<std::int64_t, BehaviorLabel> labels;
  if (spec.robot) {
    for (const auto & a : spec.agents) {
      labels[a.id] = a.behavior;
    }
  }
  const auto records = to_records(result.trajectories, robot_states(result.scenes), labels);
  with_output(out_path, [&](std::ostream & os) { write_records(os, records); });
  return 0;
}

int run_predict(const RunConfig & cfg, const std::string & in_path, const std::string & gt_path,
                const std::string & meta_path, const std::string & provider_name, const std::string & weights,
                const std::string & out_path)
{
  auto provider = make_provider(provider_name, weights, cfg);
  const auto & rc = cfg.rollout;
  if (rc.samples_k == 1 && !cfg.explicit_keys.contains("noise_std")) {
    provider.params.noise_std = 0.0;
  }
  const auto meta = load_meta(meta_path);
  const auto observed = assemble(load_records(in_path), meta.obstacles);
  std::optional<AssembledScenes> future;
  if (!gt_path.empty()) {
    future = assemble(load_records(gt_path), meta.obstacles);
  } else if (rc.samples_k > 1) {
    throw UsageError("best-of-K prediction (--k > 1) needs --gt");
  }

  std::map<std::int64_t, RobotState> robot = robot_states(observed.scenes);
  if (future) {
    for (const auto & [f, r] : robot_states(future->scenes)) {
      robot.emplace(f, r);
    }
  }
  std::map<std::int64_t, Trajectory> neighbors;
  const std::vector<Trajectory> * sources[] = {&observed.trajectories, future ? &future->trajectories : nullptr};
  for (const auto * set : sources) {
    if (!set) {
      continue;
    }
    for (const auto & t : *set) {
      auto & n = neighbors[t.pedestrian_id];
      n.pedestrian_id = t.pedestrian_id;
      for (const auto & f : t.frames) {
        n.frames.push_back(f);
      }
    }
  }
  for (auto & [id, t] : neighbors) {
    std::sort(t.frames.begin(), t.frames.end(), [](const auto & a, const auto & b) {
      return a.frame_index < b.frame_index;
    });
    t.frames.erase(std::unique(t.frames.begin(), t.frames.end(), [](const auto & a, const auto & b) {
      return a.frame_index == b.frame_index;
    }), t.frames.end());
  }

  std::vector<Trajectory> predictions;
  std::vector<Trajectory> truths;
  std::size_t skipped = 0;
  for (const auto & prefix : observed.trajectories) {
    if (prefix.size() < kMinPrefixFrames) {
      ++skipped;
      continue;
    }
    PredictionContext ctx;
    for (const auto & [id, t] : neighbors) {
      if (id != prefix.pedestrian_id) {
        ctx.neighbors.push_back(t);
        const auto g = meta.groups.find(id);
        ctx.neighbor_groups.push_back(g == meta.groups.end() ? std::nullopt : std::optional<int>(g->second));
      }
    }
    ctx.obstacles = meta.obstacles;
    if (const auto g = meta.goals.find(prefix.pedestrian_id); g != meta.goals.end()) {
      ctx.goal = g->second;
    }
    if (const auto g = meta.groups.find(prefix.pedestrian_id); g != meta.groups.end()) {
      ctx.group_id = g->second;
    }
    if (const auto l = observed.labels.find(prefix.pedestrian_id); l != observed.labels.end()) {
      ctx.label = l->second;
    }
    const auto start = prefix.back().frame_index;
    if (const auto r = robot.find(start); r != robot.end()) {
      RobotTrack track;
      track.type = r->second.type;
      Vec2 last = r->second.position;
      for (std::size_t k = 0; k <= rc.horizon; ++k) {
        if (const auto it = robot.find(start + static_cast<std::int64_t>(k)); it != robot.end()) {
          last = it->second.position;
        }
        track.positions.push_back(last);
      }
      ctx.robot = track;
    }
    if (rc.samples_k == 1 && !future) {
      predictions.push_back(predict(prefix, ctx, provider, rc));
      continue;
    }
    Trajectory gt;
    gt.pedestrian_id = prefix.pedestrian_id;
    const auto & full = neighbors.at(prefix.pedestrian_id);
    for (std::size_t k = 0; k <= rc.horizon; ++k) {
      const auto idx = start + static_cast<std::int64_t>(k);
      const auto it = std::find_if(full.frames.begin(), full.frames.end(), [&](const auto & f) {
        return f.frame_index == idx;
      });
      if (it == full.frames.end()) {
        break;
      }
      gt.frames.push_back(*it);
    }
    if (gt.size() != rc.horizon + 1) {
      ++skipped;
      continue;
    }
    auto best = best_of_k(prefix, gt, ctx, provider, rc);
    predictions.push_back(std::move(best.trajectory));
    truths.push_back(std::move(gt));
  }
  if (predictions.empty()) {
    throw Error("no pedestrian has a usable prefix (>= 8 frames) and ground truth");
  }
  const auto records = to_records(predictions, robot, observed.labels);
  with_output(out_path, [&](std::ostream & os) { write_records(os, records); });
  if (!truths.empty()) {
    const ProviderRow row{std::string(to_string(provider.tag)), evaluate(predictions, truths)};
    write_table(std::cerr, std::span(&row, 1));
  }
  if (skipped > 0) {
    std::cerr << "skipped " << skipped << " pedestrians without enough frames\n";
  }
  return 0;
}

std::vector<Trajectory> load_trajectories(const std::string & path)
{
  return assemble(load_records(path), {}).trajectories;
}

int run_evaluate(const std::string & pred_path, const std::string & gt_path, const std::string & name,
                 const std::string & out_path)
{
  const auto pred = load_trajectories(pred_path);
  const auto gt = load_trajectories(gt_path);
  const ProviderRow row{name.empty() ? fs::path(pred_path).stem().string() : name, evaluate(pred, gt)};
  write_table(std::cout, std::span(&row, 1));
  if (!out_path.empty()) {
    with_output(out_path, [&](std::ostream & os) { write_table_csv(os, std::span(&row, 1)); });
  }
  return 0;
}

int run_stats(const std::string & in_path, const std::string & compare_path, double bin_width,
              const std::string & out_path)
{
  const auto trajs = load_trajectories(in_path);
  const auto hist = speed_histogram(trajs, bin_width);
  with_output(out_path, [&](std::ostream & os) { write_histogram_csv(os, hist); });
  auto & log = out_path.empty() ? std::cerr : std::cout;
  log << "speed_samples = " << hist.samples << "\nspeed_median = " << format_double(hist.median) << '\n';
  if (!compare_path.empty()) {
    const auto a = instantaneous_speeds(trajs);
    const auto b = instantaneous_speeds(load_trajectories(compare_path));
    const auto r = mann_whitney_u(a, b);
    log << "u_statistic = " << format_double(r.u_statistic) << "\np_value = " << format_double(r.p_value)
        << "\ncliffs_delta = " << format_double(r.cliffs_delta) << "\nlarge_effect = "
        << (r.large_effect ? "true" : "false") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"pedforce: pedestrian force models near robots"};
  app.require_subcommand(1);
  app.footer(config_help());

  Common c;
  std::string in, out, records_out, report, meta, scenario, random, provider = "sfm", weights, gt, pred, net, compare, name;
  std::size_t count = 1;
  double bin_width = 0.1;
  std::size_t horizon = 0;
  std::size_t k = 0;

  const auto with_flow = [&](CLI::App * sub) {
    sub->add_option("--horizon", horizon, "rollout horizon [frames]");
    sub->add_option("--k", k, "best-of-K draws");
    sub->add_option("--provider", provider, "sfm | srfm | neurosfm | neurosfm-no-robot | neurosfm-no-group | analytic")
      ->capture_default_str();
    sub->add_option("--weights", weights, "directory with <network>.nsw files");
  };

  auto * ingest = app.add_subcommand("ingest", "validate and normalise a record CSV");
  add_common(ingest, c);
  ingest->add_option("--in", in, "record CSV")->required();
  ingest->add_option("--out", out, "normalised CSV (default: stdout)");

  auto * preprocess = app.add_subcommand("preprocess", "repair gaps and apply the quality filters");
  add_common(preprocess, c);
  preprocess->add_option("--in", in, "record CSV")->required();
  preprocess->add_option("--out", out, "filtered CSV (default: stdout)");
  preprocess->add_option("--report", report, "filter report (default: stderr)");

  auto * label = app.add_subcommand("label", "classify each pedestrian's response to the robot");
  add_common(label, c);
  label->add_option("--in", in, "record CSV")->required();
  label->add_option("--out", out, "ped_id,label CSV (default: <in>.labels.csv next to the input)");
  label->add_option("--records", records_out, "record CSV with the new labels");

  auto * synth = app.add_subcommand("synth", "generate trajectories with the analytic model");
  add_common(synth, c);
  synth->add_option("--scenario", scenario, "scenario file");
  synth->add_option("--random", random, "random scenes: none | stationary | moving | mixed");
  synth->add_option("--scenes", count, "number of random scenes")->capture_default_str();
  synth->add_option("--horizon", horizon, "frames per random scene");
  synth->add_option("--out", out, "record CSV (default: stdout)");
  synth->add_option("--meta", meta, "goals, groups and walls sidecar");

  auto * curate_cmd = app.add_subcommand("curate", "build per-network training samples");
  add_common(curate_cmd, c);
  curate_cmd->add_option("--in", in, "record CSV")->required();
  curate_cmd->add_option("--meta", meta, "goals, groups and walls sidecar");
  curate_cmd->add_option("--out", out, "sample CSV (default: stdout)");

  auto * train_cmd = app.add_subcommand("train", "train force networks from a sample CSV");
  add_common(train_cmd, c);
  train_cmd->add_option("--in", in, "sample CSV")->required();
  train_cmd->add_option("--out", out, "output directory for <network>.nsw")->required();
  train_cmd->add_option("--net", net, "train only this network");
  train_cmd->add_option("--report", report, "loss history CSV");

  auto * simulate = app.add_subcommand("simulate", "roll a scenario out under a provider");
  add_common(simulate, c);
  with_flow(simulate);
  simulate->add_option("--scenario", scenario, "scenario file")->required();
  simulate->add_option("--out", out, "record CSV (default: stdout)");

  auto * predict_cmd = app.add_subcommand("predict", "predict each observed pedestrian");
  add_common(predict_cmd, c);
  with_flow(predict_cmd);
  predict_cmd->add_option("--in", in, "observed record CSV")->required();
  predict_cmd->add_option("--gt", gt, "future record CSV (needed for --k > 1)");
  predict_cmd->add_option("--meta", meta, "goals, groups and walls sidecar");
  predict_cmd->add_option("--out", out, "predicted record CSV (default: stdout)");

  auto * evaluate_cmd = app.add_subcommand("evaluate", "ADE/FDE of predictions against ground truth");
  add_common(evaluate_cmd, c);
  evaluate_cmd->add_option("--pred", pred, "predicted record CSV")->required();
  evaluate_cmd->add_option("--gt", gt, "ground-truth record CSV")->required();
  evaluate_cmd->add_option("--name", name, "row label (default: prediction file stem)");
  evaluate_cmd->add_option("--out", out, "table CSV");

  auto * stats = app.add_subcommand("stats", "speed histogram and Mann-Whitney comparison");
  add_common(stats, c);
  stats->add_option("--in", in, "record CSV")->required();
  stats->add_option("--compare", compare, "second record CSV to compare speeds against");
  stats->add_option("--bin-width", bin_width, "histogram bin width [m/s]")->capture_default_str();
  stats->add_option("--out", out, "histogram CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  try {
    auto * sub = app.get_subcommands().front();
    const auto given = [&](const char * flag) {
      const auto * opt = sub->get_option_no_throw(flag);
      return opt != nullptr && opt->count() > 0;
    };
    const bool horizon_given = given("--horizon");
    if (horizon_given) {
      c.horizon = horizon;
    }
    if (given("--k")) {
      c.k = k;
    }
    const auto cfg = c.load();
    if (sub == ingest) {
      return run_ingest(in, out);
    }
    if (sub == preprocess) {
      return run_preprocess(cfg, in, out, report);
    }
    if (sub == label) {
      return run_label(cfg, in, out, records_out);
    }
    if (sub == synth) {
      const bool set_horizon = horizon_given || cfg.explicit_keys.contains("horizon");
      return run_synth(
        cfg, c.seed, scenario, random, count, set_horizon ? std::optional(cfg.rollout.horizon) : std::nullopt, out,
        meta);
    }
    if (sub == curate_cmd) {
      return run_curate(cfg, in, meta, out);
    }
    if (sub == train_cmd) {
      return run_train(cfg, in, net, out, report);
    }
    if (sub == simulate) {
      return run_simulate(cfg, horizon_given, scenario, provider, weights, out);
    }
    if (sub == predict_cmd) {
      return run_predict(cfg, in, gt, meta, provider, weights, out);
    }
    if (sub == evaluate_cmd) {
      return run_evaluate(pred, gt, name, out);
    }
    if (sub == stats) {
      return run_stats(in, compare, bin_width, out);
    }
  } catch (const UsageError & e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
