#include "srt/model_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "srt/csv.hpp"
#include "srt/errors.hpp"

namespace srt::aft {

using nlohmann::json;

void save_model_json(const AftFit& fit, const std::filesystem::path& path,
                     std::uint64_t seed) {
  json j;
  j["convention"] = "aft-canonical";
  j["family"] = surv::family_name(fit.family);
  j["columns"] = fit.column_names;
  j["beta"] = std::vector<double>(fit.beta.begin(), fit.beta.end());
  j["log_scale"] = fit.log_scale;
  j["scale_fixed"] = fit.scale_fixed;
  std::vector<std::vector<double>> cov;
  for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r)
    cov.emplace_back(fit.covariance.row(r).begin(), fit.covariance.row(r).end());
  j["covariance"] = cov;
  j["logL"] = fit.log_likelihood;
  j["aic"] = fit.aic;
  j["bic"] = fit.bic;
  j["n"] = fit.n;
  j["iterations"] = fit.iterations;
  j["seed"] = seed;

  json design;
  design["numeric"] = fit.spec.numeric_columns;
  json cats = json::array();
  for (const auto& cat : fit.spec.categorical_columns)
    cats.push_back({{"name", cat.name},
                    {"levels", cat.levels},
                    {"reference", cat.reference}});
  design["categorical"] = cats;
  j["design"] = design;

  csv::write_atomic(path, j.dump(2) + "\n");
}

AftFit load_model_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }

  AftFit fit;
  try {
    if (j.at("convention").get<std::string>() != "aft-canonical")
      throw SchemaError(path.string() + ": unknown model convention");
    fit.family = surv::parse_family(j.at("family").get<std::string>());
    fit.column_names = j.at("columns").get<std::vector<std::string>>();
    auto beta = j.at("beta").get<std::vector<double>>();
    if (beta.size() != fit.column_names.size())
      throw SchemaError(path.string() + ": beta length does not match columns");
    fit.beta = Eigen::Map<Eigen::VectorXd>(beta.data(),
                                           static_cast<Eigen::Index>(beta.size()));
    fit.log_scale = j.at("log_scale").get<double>();
    fit.scale_fixed = j.at("scale_fixed").get<bool>();
    auto cov = j.at("covariance").get<std::vector<std::vector<double>>>();
    Eigen::Index dim = static_cast<Eigen::Index>(cov.size());
    if (dim != fit.beta.size() + 1)
      throw SchemaError(path.string() + ": covariance dimension mismatch");
    fit.covariance.resize(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (static_cast<Eigen::Index>(cov[static_cast<std::size_t>(r)].size()) != dim)
        throw SchemaError(path.string() + ": covariance is not square");
      for (Eigen::Index c = 0; c < dim; ++c)
        fit.covariance(r, c) = cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    fit.log_likelihood = j.at("logL").get<double>();
    fit.aic = j.at("aic").get<double>();
    fit.bic = j.at("bic").get<double>();
    fit.n = j.at("n").get<int>();
    fit.iterations = j.at("iterations").get<int>();

    const json& design = j.at("design");
    fit.spec.numeric_columns = design.at("numeric").get<std::vector<std::string>>();
    for (const auto& cat : design.at("categorical"))
      fit.spec.categorical_columns.push_back(
          {cat.at("name").get<std::string>(),
           cat.at("levels").get<std::vector<std::string>>(),
           cat.at("reference").get<std::string>()});
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return fit;
}

}  // namespace srt::aft
