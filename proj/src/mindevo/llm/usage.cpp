#include "mindevo/llm/usage.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mindevo/common/errors.hpp"

namespace mindevo::llm {

UsageLedger::UsageLedger(const UsageLedger& other) : entries_(other.snapshot()) {}

UsageLedger& UsageLedger::operator=(const UsageLedger& other) {
  if (this != &other) {
    auto copy = other.snapshot();
    std::lock_guard lock(mutex_);
    entries_ = std::move(copy);
  }
  return *this;
}

void UsageLedger::append(UsageRecord record) {
  if (record.input_tokens < 0) record.input_tokens = 0;
  if (record.output_tokens < 0) record.output_tokens = 0;
  std::lock_guard lock(mutex_);
  entries_.push_back(std::move(record));
}

std::size_t UsageLedger::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<UsageRecord> UsageLedger::snapshot() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::vector<UsageRecord> UsageLedger::since(std::size_t from) const {
  std::lock_guard lock(mutex_);
  if (from >= entries_.size()) return {};
  return {entries_.begin() + static_cast<std::ptrdiff_t>(from), entries_.end()};
}

PriceTable PriceTable::defaults() {
  PriceTable t;
  t.set("gemini-1.5-flash", {0.075, 0.30});
  t.set("gemini-1.5-pro", {1.25, 5.00});
  t.set("gpt-4o-mini", {0.15, 0.60});
  t.set("o1-preview", {15.00, 60.00});
  return t;
}

PriceTable PriceTable::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("price table: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("price table must be a JSON object");
  PriceTable t;
  for (const auto& [model, entry] : j.items()) {
    if (!entry.is_object() || !entry.contains("input") || !entry.contains("output"))
      throw ConfigError("price table entry for " + model + " needs input and output");
    ModelPrice p{entry.at("input").get<double>(), entry.at("output").get<double>()};
    if (p.input_per_million < 0 || p.output_per_million < 0)
      throw ConfigError("negative price for " + model);
    t.set(model, p);
  }
  return t;
}

PriceTable PriceTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open price table " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string PriceTable::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [model, p] : prices_)
    j[model] = {{"input", p.input_per_million}, {"output", p.output_per_million}};
  return j.dump(2);
}

void PriceTable::set(const std::string& model, ModelPrice price) { prices_[model] = price; }

bool PriceTable::contains(const std::string& model) const { return prices_.count(model) != 0; }

const ModelPrice& PriceTable::at(const std::string& model) const {
  auto it = prices_.find(model);
  if (it == prices_.end()) throw UnknownModelError(model);
  return it->second;
}

CostSummary accumulate_cost(const std::vector<UsageRecord>& ledger, const PriceTable& prices) {
  CostSummary s;
  for (const auto& r : ledger) {
    auto& m = s.per_model[r.model_name];
    ++m.calls;
    m.input_tokens += r.input_tokens;
    m.output_tokens += r.output_tokens;
  }
  for (auto& [model, m] : s.per_model) {
    const auto& p = prices.at(model);
    m.cost = (static_cast<double>(m.input_tokens) * p.input_per_million +
              static_cast<double>(m.output_tokens) * p.output_per_million) /
             1e6;
    s.llm_calls += m.calls;
    s.input_tokens += m.input_tokens;
    s.output_tokens += m.output_tokens;
    s.total_cost += m.cost;
  }
  return s;
}

}  // namespace mindevo::llm
