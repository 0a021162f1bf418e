#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace mindevo::llm {

struct UsageRecord {
  long input_tokens = 0;
  long output_tokens = 0;
  std::string model_name;

  bool operator==(const UsageRecord&) const = default;
};

/// Append-only record of every generator invocation, including attempts
/// whose reply failed to parse. Safe to append from several threads.
class UsageLedger {
 public:
  UsageLedger() = default;
  UsageLedger(const UsageLedger& other);
  UsageLedger& operator=(const UsageLedger& other);

  void append(UsageRecord record);
  std::size_t size() const;
  std::vector<UsageRecord> snapshot() const;
  /// Entries [from, size()).
  std::vector<UsageRecord> since(std::size_t from) const;

 private:
  mutable std::mutex mutex_;
  std::vector<UsageRecord> entries_;
};

struct ModelPrice {
  double input_per_million = 0.0;
  double output_per_million = 0.0;
};

class PriceTable {
 public:
  PriceTable() = default;

  /// Published per-million-token prices as of October 2024.
  static PriceTable defaults();
  /// JSON object: {"model": {"input": 0.075, "output": 0.30}, ...}.
  static PriceTable from_json(const std::string& json_text);
  static PriceTable load(const std::string& path);
  std::string to_json() const;

  void set(const std::string& model, ModelPrice price);
  bool contains(const std::string& model) const;
  const ModelPrice& at(const std::string& model) const;  // throws UnknownModelError
  const std::map<std::string, ModelPrice>& models() const { return prices_; }

 private:
  std::map<std::string, ModelPrice> prices_;
};

struct ModelCost {
  long calls = 0;
  long input_tokens = 0;
  long output_tokens = 0;
  double cost = 0.0;
};

struct CostSummary {
  std::map<std::string, ModelCost> per_model;
  long llm_calls = 0;
  long input_tokens = 0;
  long output_tokens = 0;
  double total_cost = 0.0;
};

CostSummary accumulate_cost(const std::vector<UsageRecord>& ledger, const PriceTable& prices);

}  // namespace mindevo::llm
