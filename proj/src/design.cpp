#include "srt/design.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "srt/errors.hpp"

namespace srt::aft {

namespace {

std::vector<std::string> split_terms(const std::string& rhs) {
  std::vector<std::string> terms;
  std::string term;
  std::istringstream in(rhs);
  while (std::getline(in, term, '+')) {
    // trim
    auto b = term.find_first_not_of(" \t");
    auto e = term.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    terms.push_back(term.substr(b, e - b + 1));
  }
  return terms;
}

const std::vector<std::string>& known_numeric() {
  static const std::vector<std::string> names = {"v_i", "v_m", "lv_i", "lv_m", "dav"};
  return names;
}

std::string level_of(const scenario::ScenarioRecord& r, const std::string& factor) {
  if (factor == "mtype") return scenario::to_string(r.mtype);
  if (factor == "itype") return scenario::to_string(r.itype);
  throw std::invalid_argument("unknown categorical column '" + factor + "'");
}

}  // namespace

CategoricalSpec DesignSpec::default_factor(const std::string& name) {
  if (name == "mtype")
    return {"mtype", {"straight", "turning_left", "turning_right"}, "straight"};
  if (name == "itype")
    return {"itype", {"no_interaction", "int_ped", "int_cyc"}, "no_interaction"};
  throw std::invalid_argument("unknown categorical column '" + name + "'");
}

DesignSpec DesignSpec::from_formula(const std::string& formula) {
  auto tilde = formula.find('~');
  if (tilde == std::string::npos)
    throw std::invalid_argument("formula must look like 'srt ~ terms'");
  std::string lhs = formula.substr(0, tilde);
  lhs.erase(std::remove_if(lhs.begin(), lhs.end(), ::isspace), lhs.end());
  if (lhs != "srt")
    throw std::invalid_argument("formula response must be srt, got '" + lhs + "'");

  DesignSpec spec;
  for (const auto& term : split_terms(formula.substr(tilde + 1))) {
    if (term == "1") continue;  // explicit intercept-only
    if (term == "mtype" || term == "itype") {
      spec.categorical_columns.push_back(default_factor(term));
    } else if (std::find(known_numeric().begin(), known_numeric().end(), term) !=
               known_numeric().end()) {
      spec.numeric_columns.push_back(term);
    } else {
      throw std::invalid_argument("unknown formula term '" + term + "'");
    }
  }
  spec.validate();
  return spec;
}

void DesignSpec::validate() const {
  std::set<std::string> seen;
  for (const auto& name : numeric_columns) {
    if (std::find(known_numeric().begin(), known_numeric().end(), name) ==
        known_numeric().end())
      throw std::invalid_argument("unknown numeric column '" + name + "'");
    if (!seen.insert(name).second)
      throw std::invalid_argument("duplicate column '" + name + "'");
  }
  for (const auto& cat : categorical_columns) {
    if (!seen.insert(cat.name).second)
      throw std::invalid_argument("duplicate column '" + cat.name + "'");
    if (cat.levels.size() < 2)
      throw std::invalid_argument("factor '" + cat.name + "' needs >= 2 levels");
    std::set<std::string> lv(cat.levels.begin(), cat.levels.end());
    if (lv.size() != cat.levels.size())
      throw std::invalid_argument("factor '" + cat.name + "' has duplicate levels");
    if (!lv.count(cat.reference))
      throw std::invalid_argument("factor '" + cat.name + "': reference level '" +
                                  cat.reference + "' not among levels");
  }
}

std::vector<std::string> DesignSpec::slope_names() const {
  std::vector<std::string> names = numeric_columns;
  for (const auto& cat : categorical_columns)
    for (const auto& level : cat.levels)
      if (level != cat.reference) names.push_back(cat.name + "_" + level);
  return names;
}

DesignMatrix build_design_matrix(const std::vector<scenario::ScenarioRecord>& records,
                                 const DesignSpec& spec) {
  spec.validate();
  const auto slopes = spec.slope_names();
  const Eigen::Index n = static_cast<Eigen::Index>(records.size());
  const Eigen::Index p = static_cast<Eigen::Index>(slopes.size());
  if (n < p + 2)
    throw InsufficientDataError("need at least " + std::to_string(p + 2) +
                                " records for " + std::to_string(p) +
                                " slope columns, got " + std::to_string(n));

  DesignMatrix d;
  d.spec = spec;
  d.column_names.push_back("intercept");
  d.column_names.insert(d.column_names.end(), slopes.begin(), slopes.end());
  d.x.resize(n, p + 1);
  d.y.resize(n);
  d.events.assign(static_cast<std::size_t>(n), 1);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    Eigen::Index c = 0;
    d.x(i, c++) = 1.0;
    for (const auto& name : spec.numeric_columns) d.x(i, c++) = numeric_field(r, name);
    for (const auto& cat : spec.categorical_columns) {
      std::string value = level_of(r, cat.name);
      if (std::find(cat.levels.begin(), cat.levels.end(), value) == cat.levels.end())
        throw UnknownLevelError("track " + std::to_string(r.track_id) + ": level '" +
                                value + "' not declared for factor '" + cat.name + "'");
      for (const auto& level : cat.levels)
        if (level != cat.reference) d.x(i, c++) = value == level ? 1.0 : 0.0;
    }
    d.y(i) = std::log(r.srt);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
  if (qr.rank() < d.x.cols()) {
    auto perm = qr.colsPermutation().indices();
    Eigen::Index offending = perm(qr.rank());
    throw RankDeficientError(d.column_names[static_cast<std::size_t>(offending)]);
  }
  return d;
}

DesignMatrix make_design(const std::vector<std::string>& slope_names,
                         const Eigen::MatrixXd& slopes, const Eigen::VectorXd& times,
                         const std::vector<char>& events, DesignSpec spec) {
  if (slopes.rows() != times.size() ||
      static_cast<std::size_t>(times.size()) != events.size())
    throw std::invalid_argument("make_design: inconsistent row counts");
  if (slopes.cols() != static_cast<Eigen::Index>(slope_names.size()))
    throw std::invalid_argument("make_design: name/column mismatch");
  DesignMatrix d;
  d.spec = std::move(spec);
  d.column_names.push_back("intercept");
  d.column_names.insert(d.column_names.end(), slope_names.begin(), slope_names.end());
  d.x.resize(slopes.rows(), slopes.cols() + 1);
  d.x.col(0).setOnes();
  d.x.rightCols(slopes.cols()) = slopes;
  d.y.resize(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (!(times(i) > 0.0))
      throw std::invalid_argument("make_design: times must be positive");
    d.y(i) = std::log(times(i));
  }
  d.events = events;
  return d;
}

double numeric_field(const scenario::ScenarioRecord& r, const std::string& name) {
  if (name == "v_i") return r.v_i;
  if (name == "v_m") return r.v_m;
  if (name == "lv_i") return r.lv_i;
  if (name == "lv_m") return r.lv_m;
  if (name == "dav") return r.dav;
  if (name == "srt") return r.srt;
  throw std::invalid_argument("unknown numeric column '" + name + "'");
}

Eigen::MatrixXd correlation_matrix(const std::vector<scenario::ScenarioRecord>& records,
                                   const std::vector<std::string>& columns) {
  const std::size_t n = records.size();
  const std::size_t p = columns.size();
  if (n < 3) throw InsufficientDataError("correlation_matrix: need at least 3 records");

  Eigen::MatrixXd data(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          numeric_field(records[i], columns[j]);

  Eigen::RowVectorXd mean = data.colwise().mean();
  Eigen::MatrixXd centered = data.rowwise() - mean;
  Eigen::VectorXd sd = (centered.colwise().squaredNorm() / double(n)).cwiseSqrt();
  for (std::size_t j = 0; j < p; ++j)
    if (!(sd(static_cast<Eigen::Index>(j)) > 0.0)) throw ZeroVarianceError(columns[j]);

  Eigen::MatrixXd corr(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) {
      Eigen::Index ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      corr(ia, ib) = centered.col(ia).dot(centered.col(ib)) / (n * sd(ia) * sd(ib));
    }
  return corr;
}

std::vector<std::string> default_keep_priority() {
  return {"dav", "v_m", "lv_i", "lv_m", "srt", "v_i"};
}

CollinearityReport collinearity_screen(const Eigen::MatrixXd& corr,
                                       const std::vector<std::string>& columns,
                                       double threshold,
                                       const std::vector<std::string>& keep_priority) {
  if (corr.rows() != corr.cols() ||
      corr.rows() != static_cast<Eigen::Index>(columns.size()))
    throw std::invalid_argument("collinearity_screen: matrix/name size mismatch");

  auto rank_of = [&](const std::string& name) {
    auto it = std::find(keep_priority.begin(), keep_priority.end(), name);
    return it == keep_priority.end() ? keep_priority.size()
                                     : static_cast<std::size_t>(it - keep_priority.begin());
  };

  CollinearityReport report;
  std::set<std::string> excluded;
  for (std::size_t a = 0; a < columns.size(); ++a) {
    for (std::size_t b = a + 1; b < columns.size(); ++b) {
      double r = corr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (std::fabs(r) < threshold) continue;
      report.flagged.push_back({columns[a], columns[b], r});
      const std::string& drop =
          rank_of(columns[a]) <= rank_of(columns[b]) ? columns[b] : columns[a];
      excluded.insert(drop);
    }
  }
  report.excluded.assign(excluded.begin(), excluded.end());
  return report;
}

}  // namespace srt::aft
