// conelab command-line front end: gen, dual, section, check, certify, verify.

#include "conelab/conelab.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace conelab;

void emit(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") std::cout << j.dump(2) << '\n';
  else write_json_file(path, j);
}

Vec functional_arg(const std::vector<double>& values, Eigen::Index n) {
  Vec phi = to_vec(values);
  require_dim(phi, n, "--phi");
  return phi;
}

std::pair<int, int> parse_dims(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int d = std::stoi(s);
      return {d, d};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "--dims expects LO..HI, got '" + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for ellipsoidal, CSS and FBI cones"};
  app.require_subcommand(1);

  std::string out_path;
  std::string kind = "ellipsoidal";
  int dim = 3;
  std::uint64_t seed = 0;
  double delta = 0.0;
  auto* gen = app.add_subcommand("gen", "Generate a random cone");
  gen->add_option("--kind", kind, "ellipsoidal | simplicial | polyhedral_m_gon | perturbed_ellipsoidal");
  gen->add_option("--dim", dim, "Ambient dimension")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--delta", delta, "Bump amplitude for perturbed_ellipsoidal");
  gen->add_option("-o,--output", out_path, "Output file (default stdout)");

  std::string cone_path;
  std::vector<double> phi_values;
  std::string certificate_path;
  auto* dual_cmd = app.add_subcommand("dual", "Dual cone, and optionally a boundedness certificate for --phi");
  dual_cmd->add_option("cone", cone_path, "Cone JSON")->required();
  dual_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");
  dual_cmd->add_option("--phi", phi_values, "Functional a,b,c")->delimiter(',');
  dual_cmd->add_option("--certificate", certificate_path, "Certificate output (default stdout)");

  auto* section_cmd = app.add_subcommand("section", "Section S_phi(C) = C meet {phi = 1}");
  section_cmd->add_option("cone", cone_path, "Cone JSON")->required();
  section_cmd->add_option("--phi", phi_values, "Functional a,b,c")->delimiter(',')->required();
  section_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

  std::string property;
  int samples = 0;
  double tol = 0.0;
  int codim_max = 2;
  auto* check = app.add_subcommand("check", "Check the CSS or FBI property");
  check->add_option("property", property, "css | fbi")->required()->check(CLI::IsMember({"css", "fbi"}));
  check->add_option("cone", cone_path, "Cone JSON")->required();
  check->add_option("--samples", samples, "Sections (css) or interior points (fbi)");
  check->add_option("--seed", seed, "Random seed");
  check->add_option("--tol", tol, "tol_sym (css) or tol_rank (fbi)");
  check->add_option("--codim-max", codim_max, "Largest section codimension for css");
  check->add_option("-o,--output", out_path, "Output file (default stdout)");

  std::string body_path;
  int pairs = 64;
  double tol_fit = 1e-6;
  auto* certify = app.add_subcommand("certify", "Decide whether a convex body is an ellipsoid");
  certify->add_option("body", body_path, "Body JSON")->required();
  certify->add_option("--pairs", pairs, "Random gauge pairs");
  certify->add_option("--seed", seed, "Random seed");
  certify->add_option("--tol", tol_fit, "tol_fit");
  certify->add_option("-o,--output", out_path, "Output file (default stdout)");

  SuiteConfig config;
  std::string dims = "3..6";
  std::vector<std::string> kinds;
  auto* verify = app.add_subcommand("verify", "Run the equivalence suite");
  verify->add_option("--dims", dims, "Dimension range LO..HI");
  verify->add_option("--trials", config.trials_per_dim, "Cones per kind and dimension");
  verify->add_option("--seed", config.seed, "Suite seed (CONELAB_SEED overrides)");
  verify->add_option("--delta", config.delta, "Bump amplitude for perturbed cones");
  verify->add_option("--kinds", kinds, "Cone kinds")->delimiter(',');
  verify->add_option("--threads", config.threads, "Worker threads (0: all cores)");
  verify->add_flag("--timings", config.timings, "Include wall-clock times in the JSON");
  verify->add_option("-o,--output", config.output_path, "Suite JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      emit(to_json(generate_cone(parse_cone_kind(kind), dim, seed, delta)), out_path);
    } else if (*dual_cmd) {
      const ConeRep C = cone_from_json(read_json_file(cone_path));
      emit(to_json(dual(C)), out_path);
      if (!phi_values.empty()) {
        const DualityCertificate cert = boundedness_certificate(C, functional_arg(phi_values, C.dim()));
        emit(to_json(cert), certificate_path);
      }
    } else if (*section_cmd) {
      const ConeRep C = cone_from_json(read_json_file(cone_path));
      const Section s = section_by_functional(C, functional_arg(phi_values, C.dim()));
      if (is_unbounded(s)) throw Error(ErrorCode::UnboundedSection, "section is unbounded");
      if (is_empty(s)) throw Error(ErrorCode::EmptySection, "section is empty");
      emit(to_json(body_of(s)), out_path);
    } else if (*check) {
      const ConeRep C = cone_from_json(read_json_file(cone_path));
      PropertyReport r;
      if (property == "css") {
        r = check_css(C, samples > 0 ? samples : 200, tol > 0.0 ? tol : 1e-8, seed, {1, codim_max}).report;
      } else {
        r = check_fbi(C, samples > 0 ? samples : 8, 0, tol > 0.0 ? tol : 1e-7, seed).report;
      }
      emit(to_json(r), out_path);
    } else if (*certify) {
      PropertyReport r = certify_ellipsoid(body_from_json(read_json_file(body_path)), pairs, tol_fit, seed);
      r.cone_id = body_path;
      emit(to_json(r), out_path);
    } else if (*verify) {
      std::tie(config.dim_lo, config.dim_hi) = parse_dims(dims);
      if (!kinds.empty()) {
        config.kinds.clear();
        for (const std::string& k : kinds) config.kinds.push_back(parse_cone_kind(k));
      }
      apply_env_overrides(config);
      const SuiteResult result = run_suite(config);
      if (!config.output_path.empty()) write_json_file(config.output_path, to_json(result));
      print_summary(result, std::cout);
      return result.css_agreement && result.fbi_agreement ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "conelab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
