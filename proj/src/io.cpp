#include "halfline/io.hpp"

#include <cmath>
#include <fstream>

namespace halfline {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const BoundaryCondition& bc) {
  Json j;
  if (bc.is_dirichlet()) {
    j["type"] = "dirichlet";
  } else {
    j["type"] = "robin";
    j["sigma"] = bc.sigma();
  }
  return j;
}

Json to_json(const Grid& grid) {
  Json j;
  j["L"] = grid.length();
  j["n"] = grid.intervals();
  j["h"] = grid.spacing();
  return j;
}

Json to_json(const NegativeSpectrum& s) {
  Json j;
  j["bc"] = to_json(s.problem.bc);
  Json lambdas = Json::array(), phi0 = Json::array(), dphi0 = Json::array(), flagged = Json::array();
  for (const auto& p : s.pairs) {
    lambdas.push_back(p.lambda);
    phi0.push_back(p.phi0);
    dphi0.push_back(p.dphi0);
    flagged.push_back(p.dphi0_flagged);
  }
  j["eigenvalues"] = lambdas;
  j["phi0"] = phi0;
  j["dphi0"] = dphi0;
  j["dphi0_flagged"] = flagged;
  j["grid"] = to_json(s.problem.grid());
  j["support_end"] = s.problem.support_end;
  j["near_threshold"] = s.near_threshold;
  Json r;
  r["fine_n"] = s.refinement.fine_intervals;
  r["coarse_n"] = s.refinement.coarse_intervals;
  r["fine"] = s.refinement.fine;
  r["coarse"] = s.refinement.coarse;
  r["extrapolated"] = s.refinement.extrapolated;
  r["domain_doublings"] = s.refinement.domain_doublings;
  j["refinement"] = r;
  return j;
}

Json to_json(const LTReport& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  Json terms = Json::array();
  for (const auto& [name, value] : r.terms) terms.push_back(Json::array({name, value}));
  j["terms"] = terms;
  j["gap"] = r.gap;
  j["holds"] = r.holds;
  j["tolerance"] = r.tolerance;
  j["lower_bound"] = r.lower_bound;
  j["hypothesis_checked"] = r.hypothesis_checked;
  if (!r.sigma_sequence.empty()) j["sigma_sequence"] = r.sigma_sequence;
  if (r.weak_rhs) j["weak_rhs"] = *r.weak_rhs;
  return j;
}

Json to_json(const TelescopeReport& r) {
  Json j;
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json k;
    k["lambda"] = s.lambda;
    k["boundary_weight"] = s.boundary_weight;
    k["sigma_before"] = optional_number(s.sigma_before);
    k["sigma_after"] = optional_number(s.sigma_after);
    k["measured_in"] = s.measured_in;
    k["predicted_out"] = s.predicted_out;
    k["measured_out"] = s.measured_out;
    k["relative_residual"] = s.relative_residual;
    steps.push_back(k);
  }
  j["steps"] = steps;
  j["tolerance"] = r.tolerance;
  j["max_relative_residual"] = r.max_relative_residual;
  j["initial_integral"] = r.initial_integral;
  j["final_integral"] = r.final_integral;
  j["predicted_final_integral"] = r.predicted_final_integral;
  j["final_nonnegative"] = r.final_nonnegative;
  j["report_gap"] = r.report_gap;
  j["consistency_residual"] = r.consistency_residual;
  j["holds"] = r.holds;
  return j;
}

Json to_json(const DominanceCertificate& c) {
  Json j;
  j["rhs_main"] = c.rhs_main;
  j["rhs_elu"] = c.rhs_elu;
  j["slack"] = c.slack;
  j["predicted_slack"] = c.predicted_slack;
  j["square_term"] = c.square_term;
  j["relaxation_term"] = c.relaxation_term;
  j["literal_order"] = c.literal_order;
  j["holds"] = c.holds;
  return j;
}

Json to_json(const RiccatiDiagnostics& d) {
  Json j;
  j["residual_F"] = d.residual_F;
  j["residual_F_tilde"] = d.residual_F_tilde;
  j["decomposition_error"] = d.decomposition_error;
  j["F_at_0"] = d.F_at_0;
  j["F_tilde_at_0"] = d.F_tilde_at_0;
  j["sigma_before"] = d.sigma_before;
  j["sigma_after"] = d.sigma_after;
  j["kappa"] = d.kappa;
  j["F_tail_deviation"] = d.F_tail_deviation;
  j["F_tilde_tail_deviation"] = d.F_tilde_tail_deviation;
  return j;
}

Json to_json(const AntiderivativeCheck& c) {
  Json j;
  j["residual"] = c.residual;
  j["scale"] = c.scale;
  j["integral_quadrature"] = c.integral_quadrature;
  j["integral_bracket"] = c.integral_bracket;
  j["relative_difference"] = c.relative_difference;
  return j;
}

Json to_json(const CommutationChain& chain) {
  Json j;
  j["bc"] = to_json(chain.initial_problem().bc);
  j["order"] = chain.order;
  if (!chain.sigma_sequence.empty()) j["sigma_sequence"] = chain.sigma_sequence;
  Json steps = Json::array();
  for (std::size_t k = 0; k < chain.steps.size(); ++k) {
    const auto& s = chain.steps[k];
    const auto& st = chain.stages[k];
    Json r;
    r["label"] = st.removed_label;
    r["lambda"] = s.lambda_removed;
    r["gamma"] = s.gamma;
    r["sigma_before"] = s.robin() ? Json(s.sigma_before()) : Json(nullptr);
    r["sigma_after"] = s.robin() ? Json(s.sigma_after()) : Json(nullptr);
    r["boundary_weight"] = s.boundary_weight;
    r["intV2_in"] = s.intV2_in;
    r["intV2_out"] = s.intV2_out;
    Json res;
    res["support"] = s.support_residual;
    res["spectrum_preservation"] = st.preservation_error;
    res["Phi_end"] = number_or_null(s.Phi_end);
    r["residuals"] = res;
    r["spectrum_before"] = st.before;
    r["spectrum_after"] = st.after;
    r["removed_exactly_one"] = st.removed_exactly_one;
    r["preserved"] = st.preserved;
    r["conditioning_warning"] = s.conditioning_warning;
    steps.push_back(r);
  }
  j["steps"] = steps;
  j["final_eigenvalues"] = chain.final_spectrum.eigenvalues();
  return j;
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& json) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string() + " for writing");
  out << dump(json);
}

}  // namespace halfline
