// phh - partially hyperbolic horseshoe toolkit, command line front end.
//
// Subcommands: params-check, orbit, itinerary, lyap, pressure, t0, measure,
// entropy, verify. Common options can also come from a flat key=value config
// file (--config); explicit flags override the file, the file overrides the
// built-in defaults. All numeric output uses 17 significant digits so that
// CSV/JSON round-trips reproduce the doubles bit-exactly.
//
// Exit codes: 0 success, 1 check/constraint failure, 2 usage/config error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phh/phh.hpp"

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    os << t.columns[c] << (c + 1 < t.columns.size() ? "," : "");
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << row[c] << (c + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c)
      obj[t.columns[c]] = row[c];
    rows.push_back(obj);
  }
  nlohmann::ordered_json doc;
  doc["columns"] = t.columns;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

struct RunConfig {
  double lambda0 = phh::kDefaultParams.lambda0;
  double lambda1 = phh::kDefaultParams.lambda1;
  double beta0 = phh::kDefaultParams.beta0;
  double sigma = phh::kDefaultParams.sigma;
  double beta1 = phh::kDefaultParams.beta1;
  int depth = 12;
  double tol = 1e-4;
  std::string format = "csv";
  std::string out_dir;

  phh::Params params() const {
    return phh::validate_params(lambda0, lambda1, beta0, sigma, beta1);
  }
  std::string canonical() const {
    std::ostringstream os;
    os << "lambda0=" << fmt17(lambda0) << "\nlambda1=" << fmt17(lambda1)
       << "\nbeta0=" << fmt17(beta0) << "\nsigma=" << fmt17(sigma)
       << "\nbeta1=" << fmt17(beta1) << "\ndepth=" << depth
       << "\ntol=" << fmt17(tol) << "\nformat=" << format << "\n";
    return os.str();
  }
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string utc_stamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

// Emit the table to stdout, or into <command>-<timestamp>.<ext> plus a
// manifest recording the config hash and tool version.
int emit(const Table& t, const RunConfig& cfg, const std::string& command) {
  const std::string body = cfg.format == "json" ? to_json(t) : to_csv(t);
  if (cfg.out_dir.empty()) {
    std::cout << body;
    return 0;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const std::string stamp = utc_stamp();
  const std::string ext = cfg.format == "json" ? "json" : "csv";
  const std::filesystem::path data_path =
      std::filesystem::path(cfg.out_dir) / (command + "-" + stamp + "." + ext);
  std::ofstream(data_path) << body;

  nlohmann::ordered_json manifest;
  manifest["command"] = command;
  manifest["tool_version"] = phh::kVersion;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.canonical())));
  manifest["config_hash"] = hash;
  manifest["output"] = data_path.filename().string();
  const std::filesystem::path man_path =
      std::filesystem::path(cfg.out_dir) /
      (command + "-" + stamp + ".manifest.json");
  std::ofstream(man_path) << manifest.dump(2) << "\n";
  std::cout << data_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partially hyperbolic horseshoe toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", phh::kVersion);

  RunConfig cfg;
  app.set_config("--config", "", "flat key=value config file");
  app.allow_config_extras(false);  // unknown keys are a config error
  app.add_option("--lambda0", cfg.lambda0, "stable contraction on R0");
  app.add_option("--lambda1", cfg.lambda1, "stable contraction on R1");
  app.add_option("--beta0", cfg.beta0, "unstable expansion on R0");
  app.add_option("--sigma", cfg.sigma, "central factor of F1");
  app.add_option("--beta1", cfg.beta1, "unstable expansion on R1");
  app.add_option("--depth", cfg.depth, "transfer matrix depth k");
  app.add_option("--tol", cfg.tol, "tolerance for t0 searches");
  app.add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out_dir, "output directory (default: stdout)");

  auto* cmd_params = app.add_subcommand("params-check", "validate parameters");

  double xs = 0.0, xc = 0.0, xu = 0.0;
  long steps = 10;
  auto* cmd_orbit = app.add_subcommand("orbit", "iterate the map");
  cmd_orbit->add_option("--xs", xs, "stable coordinate");
  cmd_orbit->add_option("--xc", xc, "central coordinate");
  cmd_orbit->add_option("--xu", xu, "unstable coordinate");
  cmd_orbit->add_option("--steps", steps, "number of iterations");

  auto* cmd_itin = app.add_subcommand("itinerary", "symbolic itinerary");
  cmd_itin->add_option("--xs", xs, "stable coordinate");
  cmd_itin->add_option("--xc", xc, "central coordinate");
  cmd_itin->add_option("--xu", xu, "unstable coordinate");
  cmd_itin->add_option("--steps", steps, "number of iterations");

  std::string word;
  auto* cmd_lyap =
      app.add_subcommand("lyap", "central exponent of a periodic word");
  cmd_lyap->add_option("--word", word, "cyclic word over {0,1}")->required();

  double tmin = 0.0, tmax = 0.6;
  int curve_steps = 64;
  auto* cmd_press = app.add_subcommand("pressure", "pressure curve bracket");
  cmd_press->add_option("--tmin", tmin, "curve start");
  cmd_press->add_option("--tmax", tmax, "curve end");
  cmd_press->add_option("--steps", curve_steps, "number of samples");

  auto* cmd_t0 =
      app.add_subcommand("t0", "phase transition bracket, both methods");

  double t_measure = 0.0;
  std::string rep = "midpoint";
  auto* cmd_measure =
      app.add_subcommand("measure", "depth-k Markov equilibrium summary");
  cmd_measure->add_option("--t", t_measure, "potential parameter");
  cmd_measure->add_option("--representative", rep, "lower|midpoint|upper")
      ->check(CLI::IsMember({"lower", "midpoint", "upper"}));

  auto* cmd_entropy =
      app.add_subcommand("entropy", "topological entropy of the subshift");

  std::string suite = "full";
  auto* cmd_verify = app.add_subcommand("verify", "run self-check suites");
  cmd_verify->add_option(
      "--suite", suite, "map|contraction|exponents|convergence|pressure|full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_params->parsed()) {
      Table t;
      t.columns = {"name", "value", "constraint", "ok"};
      struct Row {
        const char* name;
        double value;
        const char* constraint;
        bool ok;
      };
      const std::vector<Row> rows = {
          {"lambda0", cfg.lambda0, "0<lambda0<1/3",
           cfg.lambda0 > 0.0 && cfg.lambda0 < 1.0 / 3.0},
          {"lambda1", cfg.lambda1, "0<lambda1<1/3",
           cfg.lambda1 > 0.0 && cfg.lambda1 < 1.0 / 3.0},
          {"beta0", cfg.beta0, ">6", cfg.beta0 > 6.0},
          {"sigma", cfg.sigma, "0<sigma<1/3",
           cfg.sigma > 0.0 && cfg.sigma < 1.0 / 3.0},
          {"beta1", cfg.beta1, "3<beta1<4", cfg.beta1 > 3.0 && cfg.beta1 < 4.0},
      };
      bool all = true;
      for (const Row& r : rows) {
        all = all && r.ok;
        t.rows.push_back(
            {r.name, fmt17(r.value), r.constraint, r.ok ? "1" : "0"});
      }
      emit(t, cfg, "params-check");
      return all ? 0 : 1;
    }

    const phh::Params params = cfg.params();

    if (cmd_orbit->parsed()) {
      const phh::OrbitRecord rec = phh::orbit({xs, xc, xu}, params, steps);
      Table t;
      t.columns = {"step", "xs", "xc", "xu", "symbol"};
      for (std::size_t i = 0; i < rec.itinerary.size(); ++i)
        t.rows.push_back({std::to_string(i), fmt17(rec.points[i].xs),
                          fmt17(rec.points[i].xc), fmt17(rec.points[i].xu),
                          std::string(1, rec.itinerary[i])});
      if (rec.escaped_at) {
        const phh::Point3& p = rec.points.back();
        const phh::StepResult last = phh::apply_F(p, params);
        const char* reason = last.reason == phh::EscapeReason::gap_z
                                 ? "escape_gap_z"
                                 : "escape_image_outside";
        t.rows.push_back({std::to_string(*rec.escaped_at), fmt17(p.xs),
                          fmt17(p.xc), fmt17(p.xu), reason});
      }
      return emit(t, cfg, "orbit");
    }

    if (cmd_itin->parsed()) {
      const phh::OrbitRecord rec = phh::orbit({xs, xc, xu}, params, steps);
      Table t;
      t.columns = {"itinerary", "escaped_at"};
      t.rows.push_back(
          {rec.itinerary.empty() ? "-" : rec.itinerary,
           rec.escaped_at ? std::to_string(*rec.escaped_at) : ""});
      return emit(t, cfg, "itinerary");
    }

    if (cmd_lyap->parsed()) {
      const std::vector<double> vals = phh::lyap_of_periodic(word, params);
      Table t;
      t.columns = {"word", "exponent"};
      for (double v : vals) t.rows.push_back({word, fmt17(v)});
      return emit(t, cfg, "lyap");
    }

    if (cmd_press->parsed()) {
      const auto curve =
          phh::pressure_curve(cfg.depth, tmin, tmax, curve_steps, params);
      Table t;
      t.columns = {"t", "depth", "p_low", "p_high"};
      for (const auto& pe : curve)
        t.rows.push_back({fmt17(pe.t), std::to_string(pe.depth),
                          fmt17(pe.p_low), fmt17(pe.p_high)});
      return emit(t, cfg, "pressure");
    }

    if (cmd_t0->parsed()) {
      const phh::PhaseTransitionEstimate root =
          phh::find_t0(cfg.depth, cfg.tol, params);
      const phh::PhaseTransitionEstimate vari =
          phh::t0_variational(cfg.depth, params);
      Table t;
      t.columns = {"method", "depth", "t0_low", "t0_high"};
      t.rows.push_back({"root_of_pressure", std::to_string(root.depth),
                        fmt17(root.t0_low), fmt17(root.t0_high)});
      t.rows.push_back({"variational_sup", std::to_string(vari.depth),
                        fmt17(vari.t0_low), fmt17(vari.t0_high)});
      emit(t, cfg, "t0");
      const bool overlap =
          root.t0_low <= vari.t0_high && vari.t0_low <= root.t0_high;
      if (!overlap) {
        std::cerr << "t0: methods disagree beyond combined widths\n";
        return 1;
      }
      return 0;
    }

    if (cmd_measure->parsed()) {
      const phh::Representative r = rep == "lower" ? phh::WeightSide::lower
                                    : rep == "upper"
                                        ? phh::WeightSide::upper
                                        : phh::WeightSide::midpoint;
      const phh::MarkovEquilibrium eq =
          phh::markov_equilibrium(cfg.depth, t_measure, r, params);
      Table t;
      t.columns = {"t", "depth", "entropy", "lyap_lo", "lyap_hi",
                   "gibbs_error"};
      std::vector<std::string> row = {
          fmt17(eq.t),           std::to_string(eq.depth),
          fmt17(eq.entropy),     fmt17(eq.lyap_c.lo),
          fmt17(eq.lyap_c.hi),   fmt17(eq.gibbs_error)};
      for (int m = 1; m <= std::min(eq.depth, 6); ++m) {
        const std::string zeros(m, '0');
        t.columns.push_back("mass[" + zeros + "]");
        row.push_back(fmt17(eq.cylinder_masses.at(zeros)));
      }
      t.columns.push_back("mass[1]");
      row.push_back(fmt17(eq.cylinder_masses.at("1")));
      t.rows.push_back(row);
      return emit(t, cfg, "measure");
    }

    if (cmd_entropy->parsed()) {
      Table t;
      t.columns = {"h_top"};
      t.rows.push_back({fmt17(phh::sft_entropy())});
      return emit(t, cfg, "entropy");
    }

    if (cmd_verify->parsed()) {
      const auto checks = phh::verify_suite(suite, params, cfg.depth);
      Table t;
      t.columns = {"suite", "check", "pass", "measured", "detail"};
      bool all = true;
      const phh::CheckResult* first_fail = nullptr;
      for (const auto& c : checks) {
        all = all && c.pass;
        if (!c.pass && first_fail == nullptr) first_fail = &c;
        t.rows.push_back({c.suite, c.name, c.pass ? "PASS" : "FAIL",
                          fmt17(c.measured), c.detail});
      }
      emit(t, cfg, "verify");
      if (!all) {
        std::cerr << "verify: FAIL at [" << first_fail->suite << "] "
                  << first_fail->name << " (measured "
                  << fmt17(first_fail->measured) << ")\n";
        return 1;
      }
      return 0;
    }
  } catch (const phh::ConstraintViolation& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
