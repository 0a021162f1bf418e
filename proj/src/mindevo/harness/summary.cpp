#include "mindevo/harness/summary.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "mindevo/common/errors.hpp"
#include "mindevo/instances/task_io.hpp"

namespace mindevo::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
  std::ostringstream out;
  out << std::setprecision(10) << x;
  return out.str();
}

double rate(long solved, long n) { return n ? static_cast<double>(solved) / static_cast<double>(n) : 0.0; }

struct Tally {
  long instances = 0, solved = 0, ok = 0;
  long calls = 0, input = 0, output = 0;
  double cost = 0.0;

  void add(const InstanceView& v) {
    ++instances;
    if (v.solved) ++solved;
    if (!v.ok) return;
    ++ok;
    calls += v.llm_calls;
    input += v.input_tokens;
    output += v.output_tokens;
    cost += v.cost;
  }

  json to_json() const {
    auto mean = [&](double x) { return ok ? x / static_cast<double>(ok) : 0.0; };
    return {{"instances", instances},
            {"solved", solved},
            {"success_rate", rate(solved, instances)},
            {"mean_llm_calls", mean(static_cast<double>(calls))},
            {"mean_input_tokens", mean(static_cast<double>(input))},
            {"mean_output_tokens", mean(static_cast<double>(output))},
            {"mean_cost", mean(cost)},
            {"total_cost", cost}};
  }
};

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << body;
}

}  // namespace

std::vector<json> read_records(const fs::path& path) {
  std::vector<json> out;
  std::ifstream in(path);
  if (!in) return out;
  std::map<std::pair<std::string, int>, std::size_t> slot;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json r;
    try {
      r = json::parse(line);
    } catch (const json::parse_error&) {
      continue;  // a torn final line from an interrupted run
    }
    auto key = std::make_pair(r.value("instance", std::string()), r.value("stage", 1));
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot[key] = out.size();
      out.push_back(std::move(r));
    } else {
      out[it->second] = std::move(r);
    }
  }
  return out;
}

std::vector<InstanceView> merge_records(const std::vector<json>& records) {
  std::vector<const json*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const json* a, const json* b) { return a->value("stage", 1) < b->value("stage", 1); });

  std::vector<InstanceView> views;
  std::map<std::string, std::size_t> index;
  for (const json* rp : sorted) {
    const auto& r = *rp;
    auto id = r.value("instance", std::string());
    auto [it, fresh] = index.emplace(id, views.size());
    if (fresh) {
      InstanceView v;
      v.id = id;
      v.level = r.value("level", 0);
      v.split = r.value("split", std::string("test"));
      views.push_back(v);
    }
    auto& v = views[it->second];
    if (r.value("status", std::string("ok")) != "ok") {
      v.ok = false;
      continue;
    }
    long offset = v.candidates;
    double previous_cost = v.cost;
    v.candidates += r.value("candidates_generated", 0L);
    v.llm_calls += r.value("llm_calls", 0L);
    v.input_tokens += r.value("input_tokens", 0L);
    v.output_tokens += r.value("output_tokens", 0L);
    v.cost += r.value("cost", 0.0);
    if (r.contains("best_curve"))
      for (const auto& point : r["best_curve"]) {
        double value = point[1].get<double>();
        if (v.best_normalized && *v.best_normalized >= value) continue;
        v.best_normalized = value;
        v.curve.emplace_back(offset + point[0].get<long>(), value);
      }
    if (!v.solved && r.value("solved", false)) {
      v.solved = true;
      v.solved_stage = r.value("stage", 1);
      v.candidates_to_solve = v.candidates;
      v.cost_to_solve = previous_cost + r.value("cost", 0.0);
    }
  }
  return views;
}

json build_report(const std::vector<json>& records) {
  auto views = merge_records(records);
  json report;
  if (!records.empty()) {
    report["strategy"] = records.front().value("strategy", std::string());
    report["task"] = records.front().value("task", std::string());
  }

  Tally all;
  std::map<std::string, Tally> by_split;
  std::map<std::string, std::map<int, Tally>> by_level;
  std::map<int, long> solved_by_stage;
  long failed = 0;
  for (const auto& v : views) {
    all.add(v);
    by_split[v.split].add(v);
    by_level[v.split][v.level].add(v);
    by_level["all"][v.level].add(v);
    if (v.solved) ++solved_by_stage[v.solved_stage];
    if (!v.ok) ++failed;
  }
  report["instances"] = all.instances;
  report["solved"] = all.solved;
  report["success_rate"] = rate(all.solved, all.instances);
  report["failed"] = failed;
  report["solved_by_stage"] = json::object();
  for (const auto& [stage, n] : solved_by_stage) report["solved_by_stage"][std::to_string(stage)] = n;

  by_split["all"] = all;
  report["splits"] = json::object();
  for (const auto& [split, tally] : by_split) {
    auto j = tally.to_json();
    j["per_level"] = json::object();
    for (const auto& [level, t] : by_level[split]) j["per_level"][std::to_string(level)] = t.to_json();
    report["splits"][split] = j;
  }

  // Stage breakdown: each stage's means are over the instances it ran on.
  std::map<int, Tally> stages;
  for (const auto& r : records) {
    InstanceView v;
    v.ok = r.value("status", std::string("ok")) == "ok";
    v.solved = v.ok && r.value("solved", false);
    v.llm_calls = r.value("llm_calls", 0L);
    v.input_tokens = r.value("input_tokens", 0L);
    v.output_tokens = r.value("output_tokens", 0L);
    v.cost = r.value("cost", 0.0);
    stages[r.value("stage", 1)].add(v);
  }
  report["stages"] = json::array();
  for (const auto& [stage, t] : stages) {
    auto j = t.to_json();
    j["stage"] = stage;
    report["stages"].push_back(j);
  }
  return report;
}

json summarize(const fs::path& output_dir) {
  auto records = read_records(output_dir / "records.jsonl");
  auto views = merge_records(records);
  auto report = build_report(records);
  fs::create_directories(output_dir);

  long horizon = 0;
  for (const auto& v : views) horizon = std::max(horizon, v.candidates);
  const auto n = static_cast<long>(views.size());

  std::ostringstream success, score;
  success << "candidates\tsolved\tinstances\tsuccess_rate\n";
  score << "candidates\tinstances_with_candidates\tmean_best_normalized\n";
  for (long k = 1; k <= horizon; ++k) {
    long solved = 0, seen = 0;
    double total = 0.0;
    for (const auto& v : views) {
      if (v.candidates_to_solve && *v.candidates_to_solve <= k) ++solved;
      std::optional<double> best;
      for (const auto& [at, value] : v.curve)
        if (at <= k) best = value;
      if (best) {
        ++seen;
        total += *best;
      }
    }
    success << k << "\t" << solved << "\t" << n << "\t" << num(rate(solved, n)) << "\n";
    score << k << "\t" << seen << "\t" << (seen ? num(total / static_cast<double>(seen)) : "") << "\n";
  }
  write_text(output_dir / "success_vs_candidates.tsv", success.str());
  write_text(output_dir / "score_vs_candidates.tsv", score.str());

  std::ostringstream levels;
  levels << "split\tlevel\tinstances\tsolved\tsuccess_rate\n";
  std::map<std::string, std::map<int, std::pair<long, long>>> buckets;
  for (const auto& v : views)
    for (const auto& split : {v.split, std::string("all")}) {
      auto& b = buckets[split][v.level];
      ++b.first;
      if (v.solved) ++b.second;
    }
  for (const auto& [split, per] : buckets)
    for (const auto& [level, b] : per)
      levels << split << "\t" << level << "\t" << b.first << "\t" << b.second << "\t"
             << num(rate(b.second, b.first)) << "\n";
  write_text(output_dir / "per_level.tsv", levels.str());

  std::vector<double> costs;
  for (const auto& v : views)
    if (v.cost_to_solve) costs.push_back(*v.cost_to_solve);
  std::sort(costs.begin(), costs.end());
  std::ostringstream cost;
  cost << "cost\tsolved\tinstances\tsuccess_rate\n";
  if (n > 0 && (costs.empty() || costs.front() > 0.0)) cost << "0\t0\t" << n << "\t0\n";
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (i + 1 < costs.size() && costs[i + 1] == costs[i]) continue;
    auto solved = static_cast<long>(i + 1);
    cost << num(costs[i]) << "\t" << solved << "\t" << n << "\t" << num(rate(solved, n)) << "\n";
  }
  write_text(output_dir / "cost_vs_success.tsv", cost.str());

  instances::write_json_file(output_dir / "summary.json", report);
  return report;
}

}  // namespace mindevo::harness
