#include <json.hpp>

#include "bessbid/error.hpp"
#include "bessbid/spline_gam.hpp"

namespace bessbid::gam {
namespace {

using nlohmann::json;

json spec_to_json(const BasisSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["k"] = s.k;
  j["covariate"] = to_string(s.covariate);
  j["cyclic"] = s.cyclic;
  if (!s.margins.empty()) {
    j["margins"] = json::array();
    for (const auto& m : s.margins) j["margins"].push_back(spec_to_json(m));
  }
  return j;
}

BasisSpec spec_from_json(const json& j) {
  BasisSpec s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "cr") s.kind = BasisKind::CubicRegression;
  else if (kind == "ps") s.kind = BasisKind::PSpline;
  else if (kind == "ti") s.kind = BasisKind::TensorInteraction;
  else throw NumericError("unknown basis kind '" + kind + "'");
  s.k = j.at("k").get<int>();
  const auto cov = j.at("covariate").get<std::string>();
  if (cov == "hour") s.covariate = Covariate::Hour;
  else if (cov == "day") s.covariate = Covariate::Day;
  else if (cov == "hour:day") s.covariate = Covariate::HourDay;
  else throw NumericError("unknown covariate '" + cov + "'");
  s.cyclic = j.value("cyclic", false);
  if (j.contains("margins")) {
    for (const auto& m : j.at("margins")) s.margins.push_back(spec_from_json(m));
  }
  return s;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_or_nan(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.at(key).get<double>();
}

}  // namespace

std::string to_json(const GamFit& fit) {
  json j;
  j["version"] = kGamFitJsonVersion;
  j["intercept"] = fit.intercept;
  j["coefficients"] = vec_to_json(fit.coefficients);
  j["smoothers"] = json::array();
  for (const auto& s : fit.smoothers) {
    json js;
    js["spec"] = spec_to_json(s.smoother.spec());
    js["offset"] = s.offset;
    js["lambda"] = s.lambda;
    js["edf"] = s.edf;
    js["knots"] = json::array();
    js["margin_constraints"] = json::array();
    for (const auto& m : s.smoother.margins()) js["knots"].push_back(vec_to_json(m.knots()));
    for (const auto& c : s.smoother.margin_constraints()) {
      js["margin_constraints"].push_back(vec_to_json(c));
    }
    js["tensor_constraint"] = vec_to_json(s.smoother.tensor_constraint());
    j["smoothers"].push_back(js);
  }
  const auto& st = fit.stats;
  j["stats"] = {{"n", st.n},
                {"rss", st.rss},
                {"tss", st.tss},
                {"residual_variance", finite_or_null(st.residual_variance)},
                {"edf_total", st.edf_total},
                {"r2", st.r2},
                {"adjusted_r2", finite_or_null(st.adjusted_r2)},
                {"gcv", finite_or_null(st.gcv)},
                {"gcv_degenerate", st.gcv_degenerate},
                {"ridge_used", st.ridge_used}};
  return j.dump(2);
}

GamFit gam_fit_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw NumericError(std::string("invalid GamFit JSON: ") + e.what());
  }
  const int version = j.at("version").get<int>();
  if (version != kGamFitJsonVersion) {
    throw NumericError("unsupported GamFit JSON version " + std::to_string(version));
  }
  GamFit fit;
  fit.intercept = j.at("intercept").get<double>();
  fit.coefficients = vec_from_json(j.at("coefficients"));
  for (const auto& js : j.at("smoothers")) {
    std::vector<Eigen::VectorXd> constraints;
    for (const auto& c : js.at("margin_constraints")) constraints.push_back(vec_from_json(c));
    Smoother smoother(spec_from_json(js.at("spec")), std::move(constraints),
                      vec_from_json(js.at("tensor_constraint")));
    fit.smoothers.push_back({std::move(smoother), js.at("offset").get<int>(),
                             js.at("lambda").get<double>(), js.at("edf").get<double>()});
  }
  const auto& st = j.at("stats");
  fit.stats.n = st.at("n").get<int>();
  fit.stats.rss = st.at("rss").get<double>();
  fit.stats.tss = st.at("tss").get<double>();
  fit.stats.residual_variance = number_or_nan(st, "residual_variance");
  fit.stats.edf_total = st.at("edf_total").get<double>();
  fit.stats.r2 = st.at("r2").get<double>();
  fit.stats.adjusted_r2 = number_or_nan(st, "adjusted_r2");
  fit.stats.gcv = number_or_nan(st, "gcv");
  fit.stats.gcv_degenerate = st.at("gcv_degenerate").get<bool>();
  fit.stats.ridge_used = st.at("ridge_used").get<bool>();
  return fit;
}

}  // namespace bessbid::gam
