#include "scout/stats/frame.hpp"

namespace scout::stats {

const std::vector<double>& Frame::num(const std::string& name) const {
  auto it = numeric.find(name);
  if (it == numeric.end()) throw StatsError("missing variable: " + name);
  return it->second;
}

const std::vector<std::string>& Frame::cat(const std::string& name) const {
  auto it = categorical.find(name);
  if (it == categorical.end()) throw StatsError("missing variable: " + name);
  return it->second;
}

void Frame::add(const std::string& name, std::vector<double> values) {
  if (values.size() != rows) throw StatsError("column " + name + " has wrong length");
  numeric[name] = std::move(values);
}

void Frame::add(const std::string& name, std::vector<std::string> values) {
  if (values.size() != rows) throw StatsError("column " + name + " has wrong length");
  categorical[name] = std::move(values);
}

Frame Frame::select(const std::vector<std::size_t>& keep) const {
  Frame f;
  f.rows = keep.size();
  for (const auto& [k, v] : numeric) {
    auto& out = f.numeric[k];
    out.reserve(keep.size());
    for (std::size_t r : keep) out.push_back(v[r]);
  }
  for (const auto& [k, v] : categorical) {
    auto& out = f.categorical[k];
    out.reserve(keep.size());
    for (std::size_t r : keep) out.push_back(v[r]);
  }
  return f;
}

}  // namespace scout::stats
