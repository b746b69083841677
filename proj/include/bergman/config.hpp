#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bergman/bergman_tree.hpp"
#include "bergman/experiments.hpp"
#include "bergman/orlicz.hpp"
#include "bergman/weights.hpp"
#include "json.hpp"

namespace bergman {

using Json = nlohmann::json;

// Reads the members of one JSON object with type and range checks; finish()
// rejects every key that was never asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where);
  bool has(const std::string& key);
  double number(const std::string& key, double def, double lo = -1e300, double hi = 1e300);
  long long integer(const std::string& key, long long def, long long lo, long long hi);
  std::string string(const std::string& key, const std::string& def);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& def);
  std::vector<long long> integers(const std::string& key, const std::vector<long long>& def, long long lo,
                                  long long hi);
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& def);
  // nullptr when absent
  const Json* member(const std::string& key);
  void finish() const;
  const std::string& where() const { return where_; }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

TreeParams parse_tree(const Json& j, const std::string& where);
YoungFunction parse_young(const Json& j, const std::string& where);
// `reference` supplies the tree a tabulated weight is laid out on.
Weight parse_weight(const Json& j, const std::string& where,
                    const std::function<std::shared_ptr<const BergmanTree>()>& reference);
Scheme parse_scheme(const std::string& s, const std::string& where);

Json tree_params_json(const TreeParams& p);

}  // namespace bergman
