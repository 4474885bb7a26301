// cliffkit command line: one subcommand per experiment. Options given on the
// command line override values from --config. Exit codes: 0 success,
// 1 usage error, 2 acceptance check failed.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliffkit/experiment.hpp"

namespace {

struct Overrides {
  std::optional<std::string> domain, field, case_name, kind, family, estimate, target;
  std::optional<int> dim, resolution, order, k, n, norm_resolution, boundary_ratio;
  std::optional<double> p, lambda;
  std::optional<std::size_t> points, count, sample_pairs;
  std::optional<std::uint64_t> seed;
  std::vector<int> resolutions;

  void apply(cliffkit::ExperimentConfig& c) const {
    if (domain) c.domain = *domain;
    if (field) c.field = *field;
    if (case_name) c.case_name = *case_name;
    if (kind) c.kind = *kind;
    if (family) c.family = *family;
    if (estimate) c.estimate = *estimate;
    if (target) c.target = *target;
    if (dim) c.dim = *dim;
    if (resolution) c.resolutions = {*resolution};
    if (!resolutions.empty()) c.resolutions = resolutions;
    if (order) c.order = *order;
    if (k) c.k = *k;
    if (n) c.n = *n;
    if (norm_resolution) c.norm_resolution = *norm_resolution;
    if (boundary_ratio) c.boundary_ratio = *boundary_ratio;
    if (p) c.p = *p;
    if (lambda) c.lambda = *lambda;
    if (points) c.points = *points;
    if (count) c.count = *count;
    if (sample_pairs) c.sample_pairs = *sample_pairs;
    if (seed) c.seed = *seed;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cliffkit: Clifford analysis transforms, norms and boundary value problems"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::optional<std::string> config_path, output_dir;
  std::optional<int> threads;
  bool dump_mesh = false, dump_field = false;
  app.add_option("--config", config_path, "JSON config file; command line options take precedence");
  app.add_option("--threads", threads, "worker thread cap (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--output-dir", output_dir, "report directory (default: $CLIFFKIT_OUTPUT_DIR, then the config)");
  app.add_flag("--dump-mesh", dump_mesh, "write mesh_volume.csv and mesh_boundary.csv");
  app.add_flag("--dump-field", dump_field, "write field.csv with field values at cell centers");

  Overrides o;
  auto domain_opts = [&](CLI::App* s) {
    s->add_option("--domain", o.domain, "disk | ball | box");
    s->add_option("--dim", o.dim, "space dimension for --domain box");
    s->add_option("--resolution", o.resolution, "volume mesh resolution");
    s->add_option("--boundary-ratio", o.boundary_ratio, "boundary resolution / volume resolution (0 = automatic)");
    s->add_option("--seed", o.seed, "random seed");
  };

  auto* va = app.add_subcommand("verify-algebra", "print the Cl_n blade multiplication table");
  va->add_option("--n", o.n, "algebra dimension");

  auto* bp = app.add_subcommand("borel-pompeiu", "residual of f = xi(tau f) + zeta(Df) at interior points");
  domain_opts(bp);
  bp->add_option("--field", o.field, "named field");
  bp->add_option("--points", o.points, "number of interior sample points");

  auto* so = app.add_subcommand("solve", "solve a manufactured first- or second-order problem");
  domain_opts(so);
  so->add_option("--order", o.order, "1 or 2");
  so->add_option("--case", o.case_name, "manufactured case name");
  so->add_option("--p", o.p, "integrability exponent for the estimate report");
  so->add_option("--k", o.k, "smoothness order for the estimate report");
  so->add_option("--points", o.points, "number of interior sample points");
  so->add_option("--norm-resolution", o.norm_resolution, "mesh resolution for the solution norm (0 = automatic)");

  auto* no = app.add_subcommand("norm", "evaluate a norm of a named field");
  domain_opts(no);
  no->add_option("--kind", o.kind, "sobolev | slobodeckij | dual | holder");
  no->add_option("--field", o.field, "named field");
  no->add_option("--k", o.k, "Sobolev order");
  no->add_option("--lambda", o.lambda, "Slobodeckij order or Hoelder exponent");
  no->add_option("--p", o.p, "integrability exponent");
  no->add_option("--sample-pairs", o.sample_pairs, "Hoelder random pair budget");

  auto* ec = app.add_subcommand("estimate-constants", "empirical estimate constants over a random family");
  domain_opts(ec);
  ec->add_option("--family", o.family, "random");
  ec->add_option("--count", o.count, "family size");
  ec->add_option("--k", o.k, "smoothness order");
  ec->add_option("--p", o.p, "integrability exponent");
  ec->add_option("--estimate", o.estimate, "sobolev | holder");
  ec->add_option("--lambda", o.lambda, "Hoelder exponent for --estimate holder");
  ec->add_option("--norm-resolution", o.norm_resolution, "mesh resolution for the solution norm (0 = automatic)");

  auto* cv = app.add_subcommand("convergence", "refinement study");
  domain_opts(cv);
  cv->add_option("--experiment", o.target, "borel-pompeiu | solve");
  cv->add_option("--resolutions", o.resolutions, "comma separated, strictly increasing")->delimiter(',');
  cv->add_option("--field", o.field, "named field (borel-pompeiu)");
  cv->add_option("--case", o.case_name, "manufactured case (solve)");
  cv->add_option("--order", o.order, "1 or 2 (solve)");
  cv->add_option("--points", o.points, "number of interior sample points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    cliffkit::ExperimentConfig cfg;
    bool have_experiment = false;
    if (config_path) {
      cfg = cliffkit::load_config_file(*config_path);
      have_experiment = true;
    }
    if (!app.get_subcommands().empty()) {
      cfg.experiment = app.get_subcommands().front()->get_name();
      have_experiment = true;
    }
    if (!have_experiment)
      throw cliffkit::UsageError("no experiment given; use a subcommand (" + cliffkit::join(cliffkit::experiment_names()) +
                                 ") or --config");
    o.apply(cfg);
    if (threads) cfg.threads = *threads;
    if (dump_mesh) cfg.dump_mesh = true;
    if (dump_field) cfg.dump_field = true;
    cfg.output_dir = output_dir ? *output_dir : cliffkit::resolve_output_dir(cfg).string();
    cfg.validate();

    const cliffkit::ExperimentResult r = cliffkit::run_experiment(cfg);
    const auto files = cliffkit::write_outputs(r, cfg.output_dir, cfg.experiment);
    std::cout << r.report.dump(2) << '\n';
    for (const auto& f : files) std::cerr << "wrote " << f.string() << '\n';
    if (!r.passed) {
      std::cerr << "acceptance check failed\n";
      return 2;
    }
    return 0;
  } catch (const cliffkit::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const cliffkit::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
