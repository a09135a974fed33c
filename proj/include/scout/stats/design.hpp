#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scout/stats/frame.hpp"

namespace scout::stats {

class RankDeficientError : public StatsError {
 public:
  RankDeficientError(const std::string& what, std::vector<std::string> columns)
      : StatsError(what), columns_(std::move(columns)) {}
  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
};

struct CategoricalTerm {
  std::string name;
  std::optional<std::string> reference;  // default: lexicographically smallest level
};

struct DesignSpec {
  bool intercept = true;
  std::vector<std::string> numeric;
  std::vector<CategoricalTerm> categorical;
};

/// Encoded regressors over the complete cases of a frame.
struct DesignMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd x;
  std::vector<std::size_t> rows;  // frame rows kept, ascending
  std::size_t dropped = 0;        // rows with a missing value

  [[nodiscard]] std::optional<std::size_t> column(const std::string& name) const;
};

/// Builds the design; rows missing any term or any `required` column are
/// dropped. Indicator columns are named `term[level]`.
DesignMatrix build_design(const Frame& frame, const DesignSpec& spec, std::span<const std::string> required = {});

/// Values of numeric column `name` at the design's rows.
Eigen::VectorXd design_response(const Frame& frame, const std::string& name, const DesignMatrix& design);

/// Throws RankDeficientError naming the columns that are linear combinations of others.
void check_rank(const Eigen::MatrixXd& x, const std::vector<std::string>& names);

}  // namespace scout::stats

namespace scout::stats {

/// Copy without non-intercept columns that are constant over the rows.
DesignMatrix drop_constant_columns(const DesignMatrix& design);

}  // namespace scout::stats
