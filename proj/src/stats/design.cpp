#include "scout/stats/design.hpp"

#include <algorithm>
#include <cmath>

namespace scout::stats {

std::optional<std::size_t> DesignMatrix::column(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

DesignMatrix build_design(const Frame& frame, const DesignSpec& spec, std::span<const std::string> required) {
  std::vector<const std::vector<double>*> nums;
  for (const auto& n : spec.numeric) nums.push_back(&frame.num(n));
  for (const auto& n : required) nums.push_back(&frame.num(n));
  std::vector<const std::vector<std::string>*> cats;
  for (const auto& c : spec.categorical) cats.push_back(&frame.cat(c.name));

  DesignMatrix d;
  for (std::size_t r = 0; r < frame.rows; ++r) {
    bool ok = std::none_of(nums.begin(), nums.end(), [&](auto* col) { return std::isnan((*col)[r]); }) &&
              std::none_of(cats.begin(), cats.end(), [&](auto* col) { return (*col)[r].empty(); });
    if (ok) {
      d.rows.push_back(r);
    } else {
      ++d.dropped;
    }
  }

  std::vector<std::vector<std::string>> levels(cats.size());
  if (spec.intercept) d.names.push_back("(intercept)");
  for (const auto& n : spec.numeric) d.names.push_back(n);
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& lv = levels[c];
    for (std::size_t r : d.rows) lv.push_back((*cats[c])[r]);
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    std::string ref = lv.empty() ? std::string() : lv.front();
    if (spec.categorical[c].reference) {
      ref = *spec.categorical[c].reference;
      if (!std::binary_search(lv.begin(), lv.end(), ref) && !lv.empty()) {
        throw StatsError("reference level '" + ref + "' absent from " + spec.categorical[c].name);
      }
    }
    lv.erase(std::remove(lv.begin(), lv.end(), ref), lv.end());
    for (const auto& l : lv) d.names.push_back(spec.categorical[c].name + "[" + l + "]");
  }

  const auto n = static_cast<Eigen::Index>(d.rows.size());
  d.x.setZero(n, static_cast<Eigen::Index>(d.names.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t r = d.rows[static_cast<std::size_t>(i)];
    Eigen::Index col = 0;
    if (spec.intercept) d.x(i, col++) = 1.0;
    for (std::size_t k = 0; k < spec.numeric.size(); ++k) d.x(i, col++) = (*nums[k])[r];
    for (std::size_t c = 0; c < cats.size(); ++c) {
      const auto& lv = levels[c];
      auto it = std::lower_bound(lv.begin(), lv.end(), (*cats[c])[r]);
      if (it != lv.end() && *it == (*cats[c])[r]) d.x(i, col + (it - lv.begin())) = 1.0;
      col += static_cast<Eigen::Index>(lv.size());
    }
  }
  return d;
}

Eigen::VectorXd design_response(const Frame& frame, const std::string& name, const DesignMatrix& design) {
  const auto& col = frame.num(name);
  Eigen::VectorXd y(static_cast<Eigen::Index>(design.rows.size()));
  for (std::size_t i = 0; i < design.rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = col[design.rows[i]];
  return y;
}

void check_rank(const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
  if (x.cols() == 0) return;
  Eigen::MatrixXd scaled = x;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double norm = x.col(c).norm();
    if (norm > 0) scaled.col(c) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  if (rank == x.cols()) return;
  std::vector<std::string> bad;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = rank; k < x.cols(); ++k) bad.push_back(names[static_cast<std::size_t>(perm(k))]);
  std::sort(bad.begin(), bad.end());
  std::string msg = "design is rank deficient; collinear columns:";
  for (const auto& b : bad) msg += " " + b;
  throw RankDeficientError(msg, bad);
}

}  // namespace scout::stats

namespace scout::stats {

DesignMatrix drop_constant_columns(const DesignMatrix& design) {
  DesignMatrix out;
  out.rows = design.rows;
  out.dropped = design.dropped;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < design.x.cols(); ++c) {
    const bool intercept = design.names[static_cast<std::size_t>(c)] == "(intercept)";
    if (intercept || (design.x.rows() > 0 && design.x.col(c).maxCoeff() != design.x.col(c).minCoeff())) {
      keep.push_back(c);
    }
  }
  out.x.resize(design.x.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.x.col(static_cast<Eigen::Index>(k)) = design.x.col(keep[k]);
    out.names.push_back(design.names[static_cast<std::size_t>(keep[k])]);
  }
  return out;
}

}  // namespace scout::stats
