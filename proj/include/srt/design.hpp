#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srt/scenario.hpp"

namespace srt::aft {

struct CategoricalSpec {
  std::string name;                 // "mtype" or "itype"
  std::vector<std::string> levels;  // declared order; first dummy follows reference
  std::string reference;
};

/// Columns entering the regression. Numeric names refer to ScenarioRecord
/// fields; categoricals are dummy (treatment) coded against their reference.
struct DesignSpec {
  std::vector<std::string> numeric_columns;
  std::vector<CategoricalSpec> categorical_columns;

  /// Parse "srt ~ v_m + lv_i + mtype + ..." ("srt ~ 1" = intercept only).
  static DesignSpec from_formula(const std::string& formula);
  static CategoricalSpec default_factor(const std::string& name);

  /// Slope column names in design order (dummies as "<factor>_<level>").
  std::vector<std::string> slope_names() const;
  void validate() const;
};

struct DesignMatrix {
  DesignSpec spec;
  std::vector<std::string> column_names;  // "intercept" first, then slopes
  Eigen::MatrixXd x;                      // n x (1 + p)
  Eigen::VectorXd y;                      // ln(srt)
  std::vector<char> events;               // 1 = observed

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }
};

/// Dummy-code the records against the spec. Throws UnknownLevelError,
/// InsufficientDataError (n < p + 2) or RankDeficientError (pivoted QR).
DesignMatrix build_design_matrix(const std::vector<scenario::ScenarioRecord>& records,
                                 const DesignSpec& spec);

/// Assemble a design directly from arrays (synthetic data paths). The
/// intercept column is prepended; names are the slope names.
DesignMatrix make_design(const std::vector<std::string>& slope_names,
                         const Eigen::MatrixXd& slopes, const Eigen::VectorXd& times,
                         const std::vector<char>& events, DesignSpec spec = {});

/// Numeric field accessor for correlation work; knows v_i, v_m, lv_i, lv_m,
/// dav, srt.
double numeric_field(const scenario::ScenarioRecord& r, const std::string& name);

/// Pearson correlation matrix over the named numeric columns (n >= 3).
Eigen::MatrixXd correlation_matrix(const std::vector<scenario::ScenarioRecord>& records,
                                   const std::vector<std::string>& columns);

struct CollinearPair {
  std::string a;
  std::string b;
  double r;
};

struct CollinearityReport {
  std::vector<CollinearPair> flagged;   // every pair with |r| >= threshold
  std::vector<std::string> excluded;    // lower-priority member of each pair
};

/// Priority order for keeping columns when a pair is collinear; earlier
/// wins. The default ranks v_i last, so a v_i/dav clash drops v_i.
std::vector<std::string> default_keep_priority();

CollinearityReport collinearity_screen(const Eigen::MatrixXd& corr,
                                       const std::vector<std::string>& columns,
                                       double threshold = 0.7,
                                       const std::vector<std::string>& keep_priority =
                                           default_keep_priority());

}  // namespace srt::aft
