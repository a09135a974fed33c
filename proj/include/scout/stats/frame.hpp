#pragma once

#include <map>
#include <string>
#include <vector>

#include "scout/stats/descriptive.hpp"

namespace scout::stats {

/// Column store for model inputs. Missing numeric values are NaN, missing
/// categorical values are empty strings.
struct Frame {
  std::size_t rows = 0;
  std::map<std::string, std::vector<double>> numeric;
  std::map<std::string, std::vector<std::string>> categorical;

  [[nodiscard]] bool has(const std::string& name) const {
    return numeric.count(name) > 0 || categorical.count(name) > 0;
  }
  [[nodiscard]] const std::vector<double>& num(const std::string& name) const;
  [[nodiscard]] const std::vector<std::string>& cat(const std::string& name) const;
  void add(const std::string& name, std::vector<double> values);
  void add(const std::string& name, std::vector<std::string> values);
  /// Rows `keep` of every column, in the given order.
  [[nodiscard]] Frame select(const std::vector<std::size_t>& keep) const;
};

}  // namespace scout::stats
