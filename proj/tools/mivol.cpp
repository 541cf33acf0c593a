// Command-line front end. Exit status: 0 when every applicable check holds,
// 2 when one is violated, 1 on errors.

#include "CLI11.hpp"

#include "mivol/centerpoint.hpp"
#include "mivol/errors.hpp"
#include "mivol/harness.hpp"
#include "mivol/io.hpp"
#include "mivol/lattice.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace mivol;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format;
  bool timing = false;
};

struct SearchOptions {
  int samples = 0;
  std::string rmax = "0";
  int refine = 50;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--samples", samples, "sphere samples (0: by dimension)");
    cmd->add_option("--rmax", rmax, "strength of composite directions (0: automatic)");
    cmd->add_option("--refine", refine, "coordinate refinement iterations");
  }

  TheoremConfig config(const Globals& g) const {
    TheoremConfig cfg;
    cfg.search.sphere_samples = samples;
    cfg.search.refine_iters = refine;
    cfg.search.r_max = parse_rational(rmax);
    cfg.search.seed = g.seed;
    cfg.search.validate();
    cfg.timing = g.timing;
    return cfg;
  }
};

struct InstanceOptions {
  std::string instance;
  std::string family;
  std::string params;
  std::vector<int> k_values;

  void add_to(CLI::App* cmd, bool sweep) {
    cmd->add_option("--instance", instance, "mixed-integer body JSON");
    cmd->add_option("--family", family, "generated family name");
    cmd->add_option("--params", params, "k=..,n=..,d=..,shape=..,seed=..");
    if (sweep) cmd->add_option("--k-values", k_values, "sweep over k")->delimiter(',');
  }

  // (instance id, body) pairs in canonical order.
  std::vector<std::pair<std::string, MixedIntegerBody>> load(const Globals& g) const {
    if (!instance.empty() == !family.empty()) throw Error(ErrorCode::BadParams, "give exactly one of --instance and --family");
    if (!instance.empty()) return {{instance, body_from_json(read_json_file(instance))}};
    std::vector<std::pair<std::string, MixedIntegerBody>> out;
    for (const auto& f : families(g)) out.emplace_back(f.id(), generate_instance(f));
    return out;
  }

  std::vector<InstanceFamily> families(const Globals& g) const {
    InstanceFamily f;
    f.name = family;
    f.seed = g.seed;
    f.apply_params(params);
    if (k_values.empty()) return {f};
    std::vector<InstanceFamily> out;
    for (int k : k_values) {
      f.k = k;
      out.push_back(f);
    }
    return out;
  }
};

Vector parse_vector(const std::string& text) {
  Vector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
  if (v.empty()) throw Error(ErrorCode::ParseError, "empty vector '" + text + "'");
  return v;
}

// Polytope JSON, or the body of a mixed-integer body JSON (optionally
// projected onto its integer coordinates).
Polytope load_polytope(const std::string& path, bool project_body) {
  Json j = read_json_file(path);
  if (j.contains("n") && j.contains("body")) {
    auto m = body_from_json(j);
    return project_body ? project(m.body, m.n) : m.body;
  }
  return polytope_from_json(j);
}

std::string format_or(const Globals& g, const std::string& fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "csv" && f != "json") throw Error(ErrorCode::BadParams, "--format must be csv or json");
  return f;
}

int emit_records(const Globals& g, std::vector<ExperimentRecord> records) {
  std::ostringstream os;
  if (format_or(g, "csv") == "json") {
    write_records_json(os, records);
  } else {
    write_records_csv(os, records);
  }
  write_text_file(g.out, os.str());
  return exit_status(records);
}

void emit_json(const Globals& g, const Json& j) {
  if (format_or(g, "json") != "json") throw Error(ErrorCode::BadParams, "this command writes JSON only");
  write_text_file(g.out, j.dump(2) + "\n");
}

std::vector<ExperimentRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot open " + path);
  in >> std::ws;
  if (in.peek() == '[') return read_records_json(in);
  return read_records_csv(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-integer volumes, centerpoints and Oertel radii of rational polytopes"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed recorded in every output");
  app.add_option("--out", g.out, "output file, - for stdout");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--timing", g.timing, "fill the runtime_ms column");

  int exit_code = 0;
  std::function<void()> run;

  std::string instance_path;
  auto* volume_cmd = app.add_subcommand("volume", "exact volume of a polytope");
  volume_cmd->add_option("--instance", instance_path, "polytope or body JSON")->required();
  volume_cmd->callback([&] {
    run = [&] {
      Polytope p = load_polytope(instance_path, false);
      Rational v = volume(p);
      if (format_or(g, "json") == "csv") {
        write_text_file(g.out, "volume,volume_double,dim\n" + to_string(v) + "," + format_double(to_double(v)) +
                                   "," + std::to_string(p.dim()) + "\n");
        return;
      }
      Json j;
      j["volume"] = rational_to_json(v);
      j["volume_double"] = to_double(v);
      j["dim"] = p.dim();
      emit_json(g, j);
    };
  });

  std::size_t max_fibers = 1'000'000;
  auto* fibers_cmd = app.add_subcommand("fibers", "enumerate the fibers of S");
  fibers_cmd->add_option("--instance", instance_path, "body JSON")->required();
  fibers_cmd->add_option("--max-fibers", max_fibers, "integer points examined before giving up");
  fibers_cmd->callback([&] {
    run = [&] {
      auto fs = enumerate_fibers(body_from_json(read_json_file(instance_path)), FiberOptions{max_fibers});
      if (format_or(g, "csv") == "csv") {
        std::ostringstream os;
        write_fibers_csv(os, fs);
        write_text_file(g.out, os.str());
        return;
      }
      Json j;
      j["n"] = fs.n;
      j["d"] = fs.d;
      j["total"] = rational_to_json(fs.total);
      Json arr = Json::array();
      for (const auto& f : fs.fibers) arr.push_back({{"z", f.z}, {"vol", rational_to_json(f.vol)}});
      j["fibers"] = arr;
      emit_json(g, j);
    };
  });

  std::string direction, point, offset;
  auto* mu_cmd = app.add_subcommand("mu", "mixed-integer volume fraction of a halfspace");
  mu_cmd->add_option("--instance", instance_path, "body JSON")->required();
  mu_cmd->add_option("--direction", direction, "normal u, comma separated")->required();
  auto* point_opt = mu_cmd->add_option("--point", point, "halfspace {u.(y - x) >= 0} through x");
  mu_cmd->add_option("--offset", offset, "halfspace {u.y >= offset}")->excludes(point_opt);
  mu_cmd->callback([&] {
    run = [&] {
      auto m = body_from_json(read_json_file(instance_path));
      Vector u = parse_vector(direction);
      Halfspace h;
      if (!point.empty()) {
        h = Halfspace::through(u, parse_vector(point));
      } else if (!offset.empty()) {
        if (is_zero(u)) throw Error(ErrorCode::ZeroDirection, "direction is zero");
        h = {u, parse_rational(offset)};
      } else {
        throw Error(ErrorCode::BadParams, "give --point or --offset");
      }
      Rational value = mu(m, h);
      Json j;
      j["mu"] = rational_to_json(value);
      j["mu_double"] = to_double(value);
      emit_json(g, j);
    };
  });

  SearchOptions search;
  std::size_t max_candidates = 16;
  auto* cp_cmd = app.add_subcommand("centerpoint", "best candidate centerpoint with its certificate");
  cp_cmd->add_option("--instance", instance_path, "body JSON")->required();
  cp_cmd->add_option("--candidates", max_candidates, "candidate cap");
  search.add_to(cp_cmd);
  cp_cmd->callback([&] {
    run = [&] {
      auto m = body_from_json(read_json_file(instance_path));
      CenterpointSearch s(m);
      auto cert = s.certify(search.config(g).search, max_candidates);
      Json j;
      j["point"] = vector_to_json(cert.point);
      j["value"] = rational_to_json(cert.value);
      j["value_double"] = to_double(cert.value);
      j["direction"] = vector_to_json(cert.worst_direction);
      j["directions_tested"] = cert.directions_tested;
      j["seed"] = cert.seed;
      j["candidate_index"] = cert.candidate_index;
      j["candidates"] = cert.candidates;
      emit_json(g, j);
    };
  });

  InstanceOptions inst;
  auto* oertel_cmd = app.add_subcommand("oertel", "certified Oertel lower bound against the reference floors");
  inst.add_to(oertel_cmd, false);
  search.add_to(oertel_cmd);
  oertel_cmd->callback([&] {
    run = [&] {
      std::vector<ExperimentRecord> rs;
      for (const auto& [id, m] : inst.load(g)) {
        auto part = check_oertel(m, id, search.config(g));
        rs.insert(rs.end(), part.begin(), part.end());
      }
      exit_code = emit_records(g, std::move(rs));
    };
  });

  std::string lemma;
  int count = 1;
  auto* verify_cmd = app.add_subcommand("verify", "check one lemma on generated instances");
  verify_cmd->add_option("--lemma", lemma, "3.1 3.2 3.3 4.1 4.2 4.3 4.4")
      ->required()
      ->check(CLI::IsMember({"3.1", "3.2", "3.3", "4.1", "4.2", "4.3", "4.4"}));
  verify_cmd->add_option("--family", inst.family, "generated family name")->required();
  verify_cmd->add_option("--params", inst.params, "k=..,n=..,d=..,shape=..,seed=..");
  verify_cmd->add_option("--count", count, "instances with consecutive seeds");
  verify_cmd->callback([&] {
    run = [&] {
      auto base = inst.families(g).front();
      std::vector<LemmaCheckResult> all;
      std::ostringstream os;
      bool json = format_or(g, "csv") == "json";
      Json arr = Json::array();
      if (!json) os << "instance_id,params,measured,bound,satisfied\n";
      for (int i = 0; i < count; ++i) {
        InstanceFamily f = base;
        f.seed = base.seed + static_cast<std::uint64_t>(i);
        auto rs = verify_lemma(lemma, f);
        std::ostringstream part;
        write_lemma_csv(part, rs, f.params());
        const std::string text = part.str();
        if (!json) os << text.substr(text.find('\n') + 1);
        for (const auto& r : rs) {
          arr.push_back({{"instance_id", r.instance_id},
                         {"params", f.params()},
                         {"measured", to_string(r.measured)},
                         {"bound", to_string(r.bound)},
                         {"satisfied", std::string(to_string(r.verdict))},
                         {"note", r.note}});
        }
        all.insert(all.end(), rs.begin(), rs.end());
      }
      write_text_file(g.out, json ? arr.dump(2) + "\n" : os.str());
      exit_code = exit_status(all);
    };
  });

  int width_bound = 3;
  auto theorem = [&](const char* name, const char* help, int which) {
    auto* cmd = app.add_subcommand(name, help);
    inst.add_to(cmd, true);
    search.add_to(cmd);
    if (which == 2) cmd->add_option("--bound", width_bound, "max-norm of width directions");
    cmd->callback([&, which] {
      run = [&, which] {
        std::vector<ExperimentRecord> rs;
        auto cfg = search.config(g);
        for (const auto& [id, m] : inst.load(g)) {
          auto part = which == 0   ? check_theorem_n1(m, id, cfg)
                      : which == 1 ? check_theorem_general(m, id, cfg)
                                   : check_corollary_width(m, id, cfg, width_bound);
          rs.insert(rs.end(), part.begin(), part.end());
        }
        exit_code = emit_records(g, std::move(rs));
      };
    });
  };
  theorem("theorem-n1", "worst fraction at the constructed point, n = 1", 0);
  theorem("theorem-general", "worst fraction at the shifted centroid, ball-radius bound", 1);
  theorem("corollary-width", "lattice-width bound after unimodular enlargement", 2);

  int wc_n = 1, wc_d = 1;
  std::string wc_r;
  auto* wc_cmd = app.add_subcommand("worst-case", "exact value on the tight instance and its certificate");
  wc_cmd->add_option("--n", wc_n, "integer dimension")->check(CLI::Range(1, 4));
  wc_cmd->add_option("--d", wc_d, "continuous dimension")->check(CLI::Range(1, 4));
  wc_cmd->add_option("--R", wc_r, "halfspace strength (default: the exactness threshold)");
  search.add_to(wc_cmd);
  wc_cmd->callback([&] {
    run = [&] {
      std::optional<Rational> r;
      if (!wc_r.empty()) r = parse_rational(wc_r);
      exit_code = emit_records(g, check_worst_case(wc_n, wc_d, r, search.config(g)));
    };
  });

  int bound = 3;
  auto* lw_cmd = app.add_subcommand("lattice-width", "lattice width by direction enumeration");
  lw_cmd->add_option("--instance", instance_path, "polytope JSON (bodies are projected)")->required();
  lw_cmd->add_option("--bound", bound, "max-norm of the directions tried");
  lw_cmd->callback([&] {
    run = [&] {
      auto w = lattice_width(load_polytope(instance_path, true), bound);
      Json j;
      j["width"] = rational_to_json(w.width);
      j["width_double"] = to_double(w.width);
      j["direction"] = w.direction;
      j["search_bound"] = w.search_bound;
      emit_json(g, j);
    };
  });

  std::size_t budget = 100000;
  auto* en_cmd = app.add_subcommand("enlarge", "unimodular map enlarging the inscribed ball");
  en_cmd->add_option("--instance", instance_path, "polytope JSON (bodies are projected)")->required();
  en_cmd->add_option("--budget", budget, "width evaluations");
  en_cmd->add_option("--bound", bound, "max-norm of the directions tried");
  en_cmd->callback([&] {
    run = [&] {
      auto r = unimodular_enlarge(load_polytope(instance_path, true), bound, budget);
      Json j;
      j["matrix"] = r.map.matrix;
      j["inverse"] = r.map.inverse;
      j["achieved_radius"] = rational_to_json(r.achieved_radius);
      j["width"] = rational_to_json(r.width);
      j["target"] = rational_to_json(r.target);
      j["target_met"] = r.target_met;
      j["budget_exceeded"] = r.budget_exceeded;
      j["evaluated"] = r.evaluated;
      emit_json(g, j);
      if (r.budget_exceeded) exit_code = 2;
    };
  });

  std::size_t mc_samples = 100000;
  auto* mc_cmd = app.add_subcommand("mc-check", "exact values against Monte-Carlo estimates");
  mc_cmd->add_option("--instance", instance_path, "polytope or body JSON")->required();
  mc_cmd->add_option("--samples", mc_samples, "Monte-Carlo samples")->check(CLI::Range(std::size_t(100), std::size_t(1) << 40));
  mc_cmd->add_option("--direction", direction, "also check mu of {u.(y - x) >= 0}");
  mc_cmd->add_option("--point", point, "anchor x for --direction");
  mc_cmd->callback([&] {
    run = [&] {
      std::vector<ExperimentRecord> rs{check_mc_volume(load_polytope(instance_path, false), instance_path, mc_samples,
                                                       g.seed)};
      if (!direction.empty()) {
        if (point.empty()) throw Error(ErrorCode::BadParams, "--direction needs --point");
        auto m = body_from_json(read_json_file(instance_path));
        auto fs = enumerate_fibers(m);
        auto h = Halfspace::through(parse_vector(direction), parse_vector(point));
        const double exact = to_double(mu(fs, h));
        auto est = mc_fraction(fs, h, mc_samples, g.seed);
        ExperimentRecord r;
        r.instance_id = instance_path;
        r.n = m.n;
        r.d = m.d;
        r.quantity = "mc_mu";
        r.measured = est.estimate;
        r.bound = exact;
        r.seed = g.seed;
        r.satisfied = std::abs(est.estimate - exact) <= 3 * est.stderr_ + 1e-12 ? Verdict::Satisfied
                                                                                : Verdict::Violated;
        rs.push_back(r);
      }
      exit_code = emit_records(g, std::move(rs));
    };
  });

  std::vector<std::string> inputs;
  auto* report_cmd = app.add_subcommand("report", "merge record files into one sorted report");
  report_cmd->add_option("--in", inputs, "record files (CSV or JSON)")->required()->check(CLI::ExistingFile);
  report_cmd->callback([&] {
    run = [&] {
      std::vector<ExperimentRecord> rs;
      for (const auto& path : inputs) {
        auto part = read_records_file(path);
        rs.insert(rs.end(), part.begin(), part.end());
      }
      exit_code = emit_records(g, std::move(rs));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
