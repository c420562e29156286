// Command-line front end: evaluate closed-form Wishart minor moments, check
// the product-inequality bound, probe the d-block conjecture, and validate
// everything against the Monte Carlo estimator.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wishmom/gpi.hpp"
#include "wishmom/json_io.hpp"
#include "wishmom/mc.hpp"
#include "wishmom/special.hpp"
#include "wishmom/wishart.hpp"

namespace {

using wishmom::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitMismatch = 4;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wishmom::DomainError("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

struct CommonOpts {
  std::string spec_file, model_file, query_file, output = "json";
  std::optional<double> alpha, nu0, nu1, nu2, tol;
  std::optional<long long> samples;
  std::optional<uint64_t> seed;
  std::optional<int> shards, max_degree;

  void attach(CLI::App* cmd, bool with_mc) {
    cmd->add_option("--spec", spec_file, "JSON run spec; flags override its fields");
    cmd->add_option("--model", model_file, "model JSON file {alpha, sigma, p1}");
    cmd->add_option("--query", query_file, "query JSON file {nu0, nu1, nu2, tilt}");
    cmd->add_option("--alpha", alpha, "override model alpha");
    cmd->add_option("--nu0", nu0, "override query nu0");
    cmd->add_option("--nu1", nu1, "override query nu1");
    cmd->add_option("--nu2", nu2, "override query nu2");
    cmd->add_option("--tol", tol, "series tolerance (default 1e-12)");
    cmd->add_option("--max-degree", max_degree, "series degree cap (default 200)");
    cmd->add_option("--output", output, "json or table")
        ->check(CLI::IsMember({"json", "table"}));
    if (with_mc) {
      cmd->add_option("--samples", samples, "Monte Carlo sample count");
      cmd->add_option("--seed", seed, "Monte Carlo seed");
      cmd->add_option("--shards", shards, "Monte Carlo shards");
    }
  }
};

struct Resolved {
  std::optional<wishmom::WishartModel> model;
  wishmom::MomentQuery query;
  wishmom::McConfig mc;
  double tol = 1e-12;
  int max_degree = 200;
  std::string output = "json";
};

Resolved resolve(const CommonOpts& o) {
  Resolved r;
  json spec = json::object();
  if (!o.spec_file.empty()) spec = load_json(o.spec_file);

  json model_json;
  if (spec.contains("model")) model_json = spec.at("model");
  if (!o.model_file.empty()) model_json = load_json(o.model_file);
  if (!model_json.is_null() && !model_json.empty()) {
    if (o.alpha) model_json["alpha"] = *o.alpha;
    r.model = wishmom::model_from_json(model_json);
  }

  json query_json = json::object();
  if (spec.contains("query")) query_json = spec.at("query");
  if (!o.query_file.empty()) query_json = load_json(o.query_file);
  r.query = wishmom::query_from_json(query_json);
  if (o.nu0) r.query.nu0 = *o.nu0;
  if (o.nu1) r.query.nu1 = *o.nu1;
  if (o.nu2) r.query.nu2 = *o.nu2;

  if (spec.contains("mc")) {
    const json& m = spec.at("mc");
    r.mc.samples = m.value("samples", r.mc.samples);
    r.mc.seed = m.value("seed", r.mc.seed);
    r.mc.shards = m.value("shards", r.mc.shards);
  }
  if (o.samples) r.mc.samples = *o.samples;
  if (o.seed) r.mc.seed = *o.seed;
  if (o.shards) r.mc.shards = *o.shards;

  r.tol = spec.value("tolerance", r.tol);
  r.max_degree = spec.value("max_degree", r.max_degree);
  if (o.tol) r.tol = *o.tol;
  if (o.max_degree) r.max_degree = *o.max_degree;

  r.output = spec.value("output", std::string("json"));
  if (!o.output.empty()) r.output = o.output;
  return r;
}

json config_echo(const char* command, const Resolved& r, bool with_mc) {
  json cfg{{"command", command},
           {"tolerance", r.tol},
           {"max_degree", r.max_degree},
           {"output", r.output}};
  if (r.model) cfg["model"] = wishmom::model_to_json(*r.model);
  cfg["query"] = wishmom::query_to_json(r.query);
  if (with_mc)
    cfg["mc"] = json{{"samples", r.mc.samples}, {"seed", r.mc.seed}, {"shards", r.mc.shards}};
  return cfg;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

void emit(const json& payload, const std::string& mode) {
  if (mode == "table") {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(payload, "", rows);
    size_t w = 0;
    for (const auto& [k, v] : rows) w = std::max(w, k.size());
    for (const auto& [k, v] : rows)
      std::cout << k << std::string(w - k.size() + 2, ' ') << v << "\n";
  } else {
    std::cout << payload.dump(2) << "\n";
  }
}

const wishmom::WishartModel& require_model(const Resolved& r) {
  if (!r.model)
    throw wishmom::DomainError("a model is required: pass --model FILE or a spec with \"model\"");
  return *r.model;
}

int cmd_moment(const Resolved& r) {
  const wishmom::WishartModel& model = require_model(r);
  wishmom::MomentValue v =
      wishmom::generalized_moment(model, r.query, r.tol, r.max_degree);
  json out{{"config", config_echo("moment", r, false)},
           {"value", v.value},
           {"terminated_exactly", v.diagnostics.terminated_exactly},
           {"degree", v.diagnostics.degree_reached},
           {"factors",
            json{{"mgf", v.factors.mgf},
                 {"det_moment_inv", v.factors.det_moment_inv},
                 {"minor1", v.factors.minor1},
                 {"minor2", v.factors.minor2},
                 {"f21", v.factors.f21}}}};
  emit(out, r.output);
  return kExitOk;
}

int cmd_validate(const Resolved& r, bool corrupt) {
  const wishmom::WishartModel& model = require_model(r);
  wishmom::MomentValue v =
      wishmom::generalized_moment(model, r.query, r.tol, r.max_degree);
  double closed = v.value;
  if (corrupt) closed *= 1.05;  // harness self-test hook
  wishmom::McEstimate e = wishmom::estimate_moment(model, r.query, r.mc);
  const double z = e.std_error > 0 ? (closed - e.mean) / e.std_error : 0.0;
  json out{{"config", config_echo("validate", r, true)},
           {"closed_form", closed},
           {"mc", wishmom::estimate_to_json(e)},
           {"z", z}};
  emit(out, r.output);
  return std::abs(z) <= 4.0 ? kExitOk : kExitMismatch;
}

int cmd_gpi_check(const Resolved& r) {
  const wishmom::WishartModel& model = require_model(r);
  wishmom::WishartGpiReport rep =
      wishmom::wishart_gpi_bound(model, r.query, r.tol, r.max_degree);
  const double scale = std::max(std::abs(rep.chain.lhs), 1.0);
  const bool ok = rep.chain.slack_upper >= -1e-12 * scale &&
                  rep.chain.slack_lower >= -1e-12;
  json out{{"config", config_echo("gpi-check", r, false)},
           {"chain", wishmom::gpi_report_to_json(rep.chain)},
           {"expectation", rep.expectation},
           {"with_bracket", rep.with_bracket},
           {"factor_product", rep.factor_product},
           {"ok", ok}};
  emit(out, r.output);
  return ok ? kExitOk : kExitMismatch;
}

// Fuzz mode of gpi-check: random (a, b, c, M) against the series-level chain.
int cmd_gpi_fuzz(const Resolved& r, int cases) {
  std::mt19937_64 rng(r.mc.seed);
  std::uniform_real_distribution<double> uab(0.0, 5.0);
  std::uniform_real_distribution<double> uc(0.05, 10.0);
  std::uniform_int_distribution<int> ud(1, 3);
  const double caps[4] = {0.0, 0.9, 0.6, 0.4};
  const int degrees[4] = {0, 800, 400, 300};
  double worst_upper = 0.0, worst_lower = 0.0;
  for (int it = 0; it < cases; ++it) {
    const int dim = ud(rng);
    std::uniform_real_distribution<double> ue(0.02, caps[dim]);
    std::vector<double> lam(dim);
    for (double& v : lam) v = ue(rng);
    wishmom::SymMatrix diag = wishmom::SymMatrix::diagonal(lam);
    wishmom::ContractionMatrix m(diag);
    const double a = uab(rng), b = uab(rng);
    const double c = 0.5 * (dim - 1) + uc(rng);
    wishmom::GpiReport rep =
        wishmom::hypergeom_bound(a, b, c, m, r.tol, std::max(r.max_degree, degrees[dim]));
    worst_upper = std::min(worst_upper, rep.slack_upper / std::max(std::abs(rep.lhs), 1.0));
    worst_lower = std::min(worst_lower, rep.slack_lower);
  }
  const bool ok = worst_upper >= -1e-12 && worst_lower >= -1e-12;
  json out{{"config", config_echo("gpi-check", r, true)},
           {"cases", cases},
           {"worst_rel_slack_upper", worst_upper},
           {"worst_slack_lower", worst_lower},
           {"ok", ok}};
  emit(out, r.output);
  return ok ? kExitOk : kExitMismatch;
}

int cmd_probe(const Resolved& r, const std::string& sigma_file, double alpha,
              std::vector<int> splits, std::vector<double> nus) {
  wishmom::SpdMatrix sigma = [&] {
    if (!sigma_file.empty()) return wishmom::spd_from_json(load_json(sigma_file));
    if (r.model) return r.model->sigma;
    throw wishmom::DomainError("probe needs --sigma FILE or a model");
  }();
  if (r.model && alpha == 0.0) alpha = r.model->alpha;
  wishmom::ProbeReport rep =
      wishmom::conjecture_probe(alpha, sigma, splits, nus, r.mc);
  json cfg = config_echo("probe", r, true);
  cfg["alpha"] = alpha;
  cfg["splits"] = splits;
  cfg["nus"] = nus;
  cfg["sigma"] = wishmom::matrix_to_json(sigma);
  json out{{"config", cfg},
           {"estimate", wishmom::estimate_to_json(rep.estimate)},
           {"marginal_product", rep.marginal_product},
           {"gap", rep.gap},
           {"z", rep.z}};
  emit(out, r.output);
  return kExitOk;
}

int cmd_hypergeom(const Resolved& r, std::vector<double> upper,
                  std::vector<double> lower, const std::string& matrix_file) {
  if (matrix_file.empty())
    throw wishmom::DomainError("hypergeom needs --matrix FILE");
  wishmom::SymMatrix m = wishmom::sym_from_json(load_json(matrix_file));
  wishmom::HypergeomParams p;
  p.upper = std::move(upper);
  p.lower = std::move(lower);
  p.tolerance = r.tol;
  p.max_degree = r.max_degree;
  wishmom::HypergeomResult res = wishmom::hypergeom_matrix(p, m);
  json cfg = config_echo("hypergeom", r, false);
  cfg["upper"] = p.upper;
  cfg["lower"] = p.lower;
  cfg["matrix"] = wishmom::matrix_to_json(m);
  json out{{"config", cfg},
           {"value", res.value},
           {"degree", res.degree_reached},
           {"last_layer_abs", res.last_layer_abs},
           {"terminated_exactly", res.terminated_exactly}};
  emit(out, r.output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wishart minor-moment calculator and validator"};
  app.require_subcommand(1);

  CommonOpts moment_opts, validate_opts, gpi_opts, probe_opts, hyper_opts;

  CLI::App* moment = app.add_subcommand("moment", "closed-form generalized moment");
  moment_opts.attach(moment, false);

  CLI::App* validate = app.add_subcommand("validate", "closed form against Monte Carlo");
  validate_opts.attach(validate, true);
  bool corrupt = false;
  validate->add_flag("--corrupt-closed-form", corrupt)->group("");

  CLI::App* gpi = app.add_subcommand("gpi-check", "product-inequality chain check");
  gpi_opts.attach(gpi, true);
  int fuzz_cases = 0;
  gpi->add_option("--fuzz", fuzz_cases, "run N random series-level chain checks");

  CLI::App* probe = app.add_subcommand("probe", "Monte Carlo probe of the d-block conjecture");
  probe_opts.attach(probe, true);
  std::string sigma_file;
  double probe_alpha = 0.0;
  std::vector<int> splits;
  std::vector<double> nus;
  probe->add_option("--sigma", sigma_file, "scale matrix JSON file");
  probe->add_option("--splits", splits, "block sizes, e.g. 1,1,1")->delimiter(',');
  probe->add_option("--nus", nus, "exponents, e.g. 1,0.5,2")->delimiter(',');
  probe->add_option("--probe-alpha", probe_alpha, "degrees of freedom (or via --alpha/--model)");

  CLI::App* hyper = app.add_subcommand("hypergeom", "matrix-argument pFq series");
  hyper_opts.attach(hyper, false);
  std::vector<double> upper, lower;
  std::string matrix_file;
  hyper->add_option("--upper", upper, "upper parameters a1,a2,...")->delimiter(',');
  hyper->add_option("--lower", lower, "lower parameters b1,b2,...")->delimiter(',');
  hyper->add_option("--matrix", matrix_file, "argument matrix JSON file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (moment->parsed()) return cmd_moment(resolve(moment_opts));
    if (validate->parsed()) return cmd_validate(resolve(validate_opts), corrupt);
    if (gpi->parsed()) {
      Resolved r = resolve(gpi_opts);
      return fuzz_cases > 0 ? cmd_gpi_fuzz(r, fuzz_cases) : cmd_gpi_check(r);
    }
    if (probe->parsed()) {
      Resolved r = resolve(probe_opts);
      if (probe_alpha == 0.0 && probe_opts.alpha) probe_alpha = *probe_opts.alpha;
      return cmd_probe(r, sigma_file, probe_alpha, splits, nus);
    }
    if (hyper->parsed())
      return cmd_hypergeom(resolve(hyper_opts), upper, lower, matrix_file);
  } catch (const wishmom::NotConverged& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const wishmom::NonFinite& e) {
    std::cerr << "estimator overflow: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const wishmom::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
