#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hrtlab/error.hpp"
#include "hrtlab/flow.hpp"
#include "hrtlab/io.hpp"
#include "hrtlab/operators.hpp"
#include "hrtlab/relations.hpp"
#include "hrtlab/tf_core.hpp"
#include "hrtlab/torus.hpp"
#include "hrtlab/window.hpp"
#include "hrtlab/zak.hpp"

namespace hrtlab::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Thrown for malformed command-line values; maps to exit code 2.
struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Params {
  struct Entry {
    const CLI::App* owner;
    std::string name;
    std::function<json()> get;
  };
  std::vector<Entry> echo;

  template <typename T>
  CLI::Option* add(CLI::App* sub, const std::string& name, T& var, const std::string& desc) {
    echo.push_back(Entry{sub, name, [&var] { return json(var); }});
    return sub->add_option("--" + name, var, desc)->capture_default_str();
  }

  json to_json(const CLI::App* sub) const {
    json j = json::object();
    for (const auto& e : echo) {
      if (e.owner == sub) j[e.name] = e.get();
    }
    return j;
  }
};

struct Common {
  std::string out = ".";
  std::uint64_t seed = 0;
};

// Files written by one run, with their contents kept for the digests.
struct Artifacts {
  fs::path dir;
  std::vector<std::pair<std::string, std::string>> files;

  void write(const std::string& name, const std::string& contents) {
    fs::create_directories(dir);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << contents;
    files.emplace_back(name, contents);
  }
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned threads_from_env() {
  const char* env = std::getenv("HRTLAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) throw ArgumentError("HRTLAB_THREADS must be a non-negative integer");
  return static_cast<unsigned>(v);
}

json parse_json_arg(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ArgumentError("--" + what + " is not valid JSON: " + e.what());
  }
}

Real real_from_json(const json& v, const std::string& what) {
  if (v.is_number_integer()) return Real(Rational(v.get<std::int64_t>()));
  if (v.is_number()) return Real(v.get<double>());
  if (v.is_string()) return parse_real(v.get<std::string>());
  throw ArgumentError(what + ": expected a number or an exact expression string");
}

std::vector<Real> reals_from_json(const std::string& text, const std::string& what) {
  const json j = parse_json_arg(text, what);
  if (!j.is_array()) throw ArgumentError("--" + what + " must be a JSON array");
  std::vector<Real> out;
  for (const auto& v : j) out.push_back(real_from_json(v, what));
  return out;
}

std::vector<double> doubles_from_json(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& r : reals_from_json(text, what)) out.push_back(r.value());
  return out;
}

cdouble complex_from_json(const json& v, const std::string& what) {
  if (v.is_array()) {
    if (v.size() != 2) throw ArgumentError(what + ": complex values are [re, im]");
    return {real_from_json(v[0], what).value(), real_from_json(v[1], what).value()};
  }
  return {real_from_json(v, what).value(), 0.0};
}

std::vector<cdouble> complexes_from_json(const std::string& text, const std::string& what) {
  const json j = parse_json_arg(text, what);
  if (!j.is_array()) throw ArgumentError("--" + what + " must be a JSON array");
  std::vector<cdouble> out;
  for (const auto& v : j) out.push_back(complex_from_json(v, what));
  return out;
}

// [[re, im, y, x], ...]: c = re + i im paired with exp(-2 pi i (y t + x w)).
TrigPolynomial2 terms_from_json(const std::string& text) {
  const json j = parse_json_arg(text, "terms");
  if (!j.is_array()) throw ArgumentError("--terms must be a JSON array of [re, im, y, x]");
  std::vector<TrigTerm> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 4) throw ArgumentError("--terms entries are [re, im, y, x]");
    terms.push_back(TrigTerm{{real_from_json(t[0], "terms").value(), real_from_json(t[1], "terms").value()},
                             real_from_json(t[2], "terms").value(), real_from_json(t[3], "terms").value()});
  }
  return TrigPolynomial2(std::move(terms));
}

Configuration configuration_from_arg(const std::string& text, int distinguished) {
  const json j = parse_json_arg(text, "points");
  Configuration cfg = j.is_object() ? parse_configuration_json(text) : Configuration(parse_points_json(text));
  if (distinguished >= 0) {
    return Configuration(cfg.points(), static_cast<std::size_t>(distinguished));
  }
  return cfg;
}

SampledWindow window_from_args(const std::string& kind, const std::string& h, std::int64_t K, int order) {
  return make_window(parse_window_kind(kind), parse_real(h).value(), K, order);
}

std::string points_to_json(const Configuration& cfg) {
  json arr = json::array();
  for (const auto& p : cfg.points()) arr.push_back(json::array({p.x.str(), p.y.str()}));
  return arr.dump();
}

// Config values for options not given on the command line are appended as
// extra "--key value" tokens, so flags always win.
std::vector<std::string> merge_config(std::vector<std::string> args, const json& config) {
  const json& params = config.contains("params") ? config["params"] : config;
  if (!params.is_object()) throw ArgumentError("config must be a JSON object");
  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : params.items()) {
    if (key == "command" || given(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back("--" + key);
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int run(const std::vector<std::string>& rawArgs, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  std::optional<std::string> configPath;
  for (std::size_t i = 0; i < rawArgs.size(); ++i) {
    const std::string& a = rawArgs[i];
    if (a == "--config") {
      if (i + 1 >= rawArgs.size()) {
        err << "error: --config needs a file\n";
        return 2;
      }
      configPath = rawArgs[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      configPath = a.substr(9);
    } else {
      args.push_back(a);
    }
  }

  json config;
  std::string configBytes;
  if (configPath) {
    std::ifstream f(*configPath, std::ios::binary);
    if (!f) {
      err << "error: cannot read config " << *configPath << "\n";
      return 2;
    }
    configBytes.assign(std::istreambuf_iterator<char>(f), {});
    try {
      config = json::parse(configBytes);
    } catch (const json::exception& e) {
      err << "error: config is not valid JSON: " << e.what() << "\n";
      return 2;
    }
    // A manifest (or any config naming a command) may stand in for the
    // subcommand.
    const bool hasSub = args.size() > 1 && args[1].rfind("-", 0) != 0;
    if (!hasSub && config.contains("command")) {
      args.insert(args.begin() + (args.empty() ? 0 : 1), config["command"].get<std::string>());
    }
    try {
      args = merge_config(args, config);
    } catch (const ArgumentError& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{"hrtlab: time-frequency shift laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  Params params;
  std::function<void(Artifacts&)> action;

  auto common_opts = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    params.add(sub, "seed", common.seed, "seed recorded in the manifest");
  };

  // classify -------------------------------------------------------------
  std::string points;
  int distinguished = -1;
  {
    auto* sub = app.add_subcommand("classify", "classify a configuration of time-frequency points");
    params.add(sub, "points", points, "JSON [[x,y],...] or {\"points\":..., \"distinguished\":i}")->required();
    params.add(sub, "distinguished", distinguished, "index of the distinguished point (-1: none)");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const Configuration cfg = configuration_from_arg(points, distinguished);
        const ConfigClass cls = classify_configuration(cfg);
        std::string line(to_string(cls.label));
        if (cls.label == ConfigLabel::OneZ2 || cls.label == ConfigLabel::Collinear1N) {
          if (cls.offPoint) line += " off=" + std::to_string(*cls.offPoint);
        }
        if (cls.fullyCollinear) line += " fully-collinear";
        if (cls.pairing) {
          const auto& p = *cls.pairing;
          line += " pairs=(" + std::to_string(p[0][0]) + "," + std::to_string(p[0][1]) + ")(" +
                  std::to_string(p[1][0]) + "," + std::to_string(p[1][1]) + ")";
        }
        out << line << "\n";

        json j;
        j["label"] = to_string(cls.label);
        json matches = json::array();
        for (auto m : cls.matches) matches.push_back(to_string(m));
        j["matches"] = matches;
        j["off_point"] = cls.offPoint ? json(*cls.offPoint) : json(nullptr);
        j["collinear_off_point"] = cls.collinearOffPoint ? json(*cls.collinearOffPoint) : json(nullptr);
        j["fully_collinear"] = cls.fullyCollinear;
        if (cls.line) {
          j["line"] = {{"anchor", cls.line->anchor}, {"direction", cls.line->direction}};
        }
        j["exact"] = cls.exact;
        art.write("classify.json", j.dump(2) + "\n");
      };
    });
  }

  // normalize ------------------------------------------------------------
  {
    auto* sub = app.add_subcommand("normalize", "map a configuration to one containing (0,0), (0,1), (a,0)");
    params.add(sub, "points", points, "JSON [[x,y],...]")->required();
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const Configuration cfg = configuration_from_arg(points, -1);
        const NormalizedConfiguration nc = normalize_configuration(cfg);
        out << "a " << format_double(nc.a) << "\n";
        out << "matrix " << format_double(nc.map.matrix[0][0]) << " " << format_double(nc.map.matrix[0][1]) << " "
            << format_double(nc.map.matrix[1][0]) << " " << format_double(nc.map.matrix[1][1]) << "\n";
        out << "translation " << format_double(nc.map.translation[0]) << " "
            << format_double(nc.map.translation[1]) << "\n";
        out << "points " << points_to_json(nc.config) << "\n";
        json j;
        j["a"] = nc.a;
        j["matrix"] = nc.map.matrix;
        j["translation"] = nc.map.translation;
        j["anchors"] = nc.anchors;
        j["points"] = json::parse(points_to_json(nc.config));
        art.write("normalize.json", j.dump(2) + "\n");
      };
    });
  }

  // zak-check ------------------------------------------------------------
  std::string windowKind = "gaussian";
  std::string step;
  std::int64_t q = 64;
  std::int64_t K = 8;
  int order = 0;
  double alpha = 0.25;
  double beta = 0.5;
  {
    auto* sub = app.add_subcommand("zak-check", "verify the Zak transform identities on a window");
    params.add(sub, "window", windowKind, "gaussian | box | exponential | hermite");
    params.add(sub, "q", q, "Zak grid size");
    params.add(sub, "K", K, "half support of the window");
    params.add(sub, "step", step, "window step (default 1/q)");
    params.add(sub, "order", order, "Hermite order");
    params.add(sub, "alpha", alpha, "modulation of the combined identity");
    params.add(sub, "beta", beta, "translation of the combined identity");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const std::string h = step.empty() ? "1/" + std::to_string(q) : step;
        const SampledWindow w = window_from_args(windowKind, h, K, order);
        std::ostringstream csv;
        csv << "identity,max_error\n";
        for (auto id : {ZakIdentity::Translation, ZakIdentity::Modulation, ZakIdentity::ModTrans,
                        ZakIdentity::QuasiPeriodT, ZakIdentity::PeriodOmega}) {
          const double e = check_zak_identity(ZakIdentityCase{id, alpha, beta}, w, q);
          out << to_string(id) << " " << format_double(e) << "\n";
          csv << to_string(id) << "," << format_double(e) << "\n";
        }
        art.write("zak_check.csv", csv.str());
      };
    });
  }

  // orbit ----------------------------------------------------------------
  std::string gammaT = "sqrt(2)-1";
  std::string gammaW = "sqrt(3)-1";
  double t0 = 0.0, w0 = 0.0;
  std::size_t n = 10000;
  std::size_t gridRes = 100;
  double eps = 0.0;
  {
    auto* sub = app.add_subcommand("orbit", "rotation orbit, star discrepancy and recurrence");
    params.add(sub, "gamma-t", gammaT, "t-component of the rotation");
    params.add(sub, "gamma-omega", gammaW, "omega-component of the rotation");
    params.add(sub, "t0", t0, "start t");
    params.add(sub, "omega0", w0, "start omega");
    params.add(sub, "n", n, "number of orbit points");
    params.add(sub, "grid-res", gridRes, "discrepancy box resolution");
    params.add(sub, "eps", eps, "recurrence radius (0: skip)");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const Real gt = parse_real(gammaT);
        const Real gw = parse_real(gammaW);
        const auto pts = orbit(TorusPoint(t0, w0), Shift2{gt.value(), gw.value()}, n);
        std::ostringstream csv;
        csv << "k,t,omega\n";
        for (std::size_t k = 0; k < pts.size(); ++k) {
          csv << k << "," << format_double(pts[k].t) << "," << format_double(pts[k].omega) << "\n";
        }
        art.write("orbit.csv", csv.str());
        out << "discrepancy " << format_double(discrepancy(pts, gridRes)) << "\n";
        if (gt.is_exact() && gw.is_exact() && gt.exact()->is_rational() && gw.exact()->is_rational()) {
          out << "period "
              << rational_orbit_period(gt.exact()->rational_part(), gw.exact()->rational_part()) << "\n";
        }
        if (eps > 0.0) {
          const auto r = recurrence_probe(TorusPoint(t0, w0), Shift2{gt.value(), gw.value()}, eps, n);
          out << "recurrence " << (r ? std::to_string(*r) : std::string("none")) << "\n";
        }
      };
    });
  }

  // product --------------------------------------------------------------
  std::string mode = "torus";
  std::string terms = "[[0.5,0,0,0],[0.5,0,1,0]]";
  std::string xs = "[0, \"sqrt(2)\"]";
  std::string cs = "[0.5, 0.5]";
  double xi = 0.3;
  double epsZero = kDefaultZeroThreshold;
  {
    auto* sub = app.add_subcommand("product", "orbit log-product ledger or diagonal-flow product trace");
    params.add(sub, "mode", mode, "torus | flow")->check(CLI::IsMember({"torus", "flow"}));
    params.add(sub, "terms", terms, "torus: JSON [[re, im, y, x], ...]");
    params.add(sub, "gamma-t", gammaT, "torus: t-component of the rotation");
    params.add(sub, "gamma-omega", gammaW, "torus: omega-component of the rotation");
    params.add(sub, "t0", t0, "torus: start t");
    params.add(sub, "omega0", w0, "torus: start omega");
    params.add(sub, "eps-zero", epsZero, "torus: zero-factor threshold");
    params.add(sub, "xs", xs, "flow: JSON translations");
    params.add(sub, "cs", cs, "flow: JSON coefficients (numbers or [re, im])");
    params.add(sub, "xi", xi, "flow: base point");
    params.add(sub, "n", n, "number of factors");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        std::ostringstream csv;
        if (mode == "torus") {
          const TrigPolynomial2 p = terms_from_json(terms);
          const Shift2 g{parse_real(gammaT).value(), parse_real(gammaW).value()};
          const auto ledger = orbit_log_product(p, TorusPoint(t0, w0), g, n, epsZero);
          write_ledger_csv(csv, ledger);
          out << "s_n " << format_double(ledger.logSums.back()) << "\n";
          out << "zero_hits " << ledger.zeroHits.size() << "\n";
        } else {
          const DiagonalFlow flow(doubles_from_json(xs, "xs"), CoefficientVector(complexes_from_json(cs, "cs")));
          const auto tr = product_trace(flow, xi, n);
          write_trace_csv(csv, tr);
          out << "forward " << to_string(tr.classification) << "\n";
          out << "backward " << to_string(tr.backwardClass) << "\n";
        }
        art.write("product.csv", csv.str());
      };
    });
  }

  // line -----------------------------------------------------------------
  std::size_t maxSegments = 64;
  std::size_t samples = 1000;
  std::string lineTerms;
  {
    auto* sub = app.add_subcommand("line", "toral line through a point and the constancy of |p| on it");
    params.add(sub, "gamma-t", gammaT, "t-component of the direction");
    params.add(sub, "gamma-omega", gammaW, "omega-component of the direction");
    params.add(sub, "t0", t0, "anchor t");
    params.add(sub, "omega0", w0, "anchor omega");
    params.add(sub, "max-segments", maxSegments, "segment cap for open lines");
    params.add(sub, "terms", lineTerms, "optional JSON [[re, im, y, x], ...] to sample along the line");
    params.add(sub, "samples", samples, "samples for the constancy check");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const ToralLine line = toral_line(TorusPoint(t0, w0), parse_real(gammaT), parse_real(gammaW), maxSegments);
        std::ostringstream csv;
        write_line_csv(csv, line);
        art.write("line.csv", csv.str());
        out << "closed " << (line.closed ? 1 : 0) << "\n";
        if (line.winding) out << "winding " << (*line.winding)[0] << " " << (*line.winding)[1] << "\n";
        out << "segments " << line.segments.size() << "\n";
        if (!lineTerms.empty()) {
          const auto rep = p_constancy_on_line(terms_from_json(lineTerms), line, samples);
          out << "max_variation " << format_double(rep.maxVariation) << "\n";
          out << "mean_modulus " << format_double(rep.meanModulus) << "\n";
        }
      };
    });
  }

  // relations ------------------------------------------------------------
  std::string values = "[\"sqrt(2)\", \"1+2*sqrt(2)\", \"1/3\"]";
  std::string relMode = "detect";
  std::int64_t maxDen = 64;
  double tol = 1e-12;
  {
    auto* sub = app.add_subcommand("relations", "rational relations among real numbers");
    params.add(sub, "values", values, "JSON array of numbers or exact expressions");
    params.add(sub, "mode", relMode, "detect | independence")->check(CLI::IsMember({"detect", "independence"}));
    params.add(sub, "max-den", maxDen, "denominator / coefficient bound");
    params.add(sub, "tol", tol, "verification tolerance");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const auto vals = reals_from_json(values, "values");
        std::string text;
        if (relMode == "detect") {
          const RelationBasis rb = detect_relations(vals, maxDen, tol);
          const GroupClosureDescriptor g = group_closure(rb);
          json j = json::parse(relation_basis_to_json(rb));
          j["torus_dimension"] = g.torusDimension;
          j["component_count"] = g.componentCount;
          j["exponents_of_AL"] = g.exponentsOfAL;
          text = j.dump(2);
        } else {
          const auto cert = is_rationally_independent(vals, maxDen, tol);
          json j;
          j["independent"] = cert.independent;
          j["relation"] = cert.relation ? json(cert.relation->coefficients) : json(nullptr);
          j["residual"] = cert.relation ? cert.relation->residual : 0.0;
          j["searched_bound"] = cert.searchedBound;
          j["norm_lower_bound"] = std::isfinite(cert.normLowerBound) ? json(cert.normLowerBound) : json("inf");
          j["exact"] = cert.exact;
          text = j.dump(2);
        }
        out << text << "\n";
        art.write("relations.json", text + "\n");
      };
    });
  }

  // independence ---------------------------------------------------------
  std::string base = "[[0,0],[0,1],[1,0]]";
  std::string alphaRange = "0:2:0.1";
  std::string betaRange = "0:2:0.1";
  std::string indStep = "1/64";
  {
    auto* sub = app.add_subcommand("independence", "smallest singular value over an (alpha, beta) grid");
    params.add(sub, "window", windowKind, "gaussian | box | exponential | hermite");
    params.add(sub, "step", indStep, "window step");
    params.add(sub, "K", K, "half support of the window");
    params.add(sub, "order", order, "Hermite order");
    params.add(sub, "base", base, "JSON base points [[x,y],...]");
    params.add(sub, "alpha", alphaRange, "frequency range start:stop:step");
    params.add(sub, "beta", betaRange, "time range start:stop:step");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const SampledWindow w = window_from_args(windowKind, indStep, K, order);
        const auto basePts = parse_points_json(base);
        const auto alphas = parse_range(alphaRange);
        const auto betas = parse_range(betaRange);
        const auto rows = independence_sweep(w, basePts, alphas, betas, threads_from_env());
        std::ostringstream csv;
        write_sweep_csv(csv, rows);
        art.write("independence.csv", csv.str());
        std::vector<double> heat;
        double lo = std::numeric_limits<double>::infinity();
        double leak = 0.0;
        for (const auto& r : rows) {
          heat.push_back(r.report.minSingular);
          lo = std::min(lo, r.report.minSingular);
          leak = std::max(leak, r.report.leakage);
        }
        std::ostringstream pgm;
        write_pgm(pgm, heat, betas.size());
        art.write("independence.pgm", pgm.str());
        out << "rows " << rows.size() << "\n";
        out << "min_singular " << format_double(lo) << "\n";
        out << "max_leakage " << format_double(leak) << "\n";
      };
    });
  }

  // flow -----------------------------------------------------------------
  double seedValue = 1.0;
  double delta = kDefaultSlopeThreshold;
  {
    auto* sub = app.add_subcommand("flow", "diagonal-flow product trace, classification and summability");
    params.add(sub, "xs", xs, "JSON translations");
    params.add(sub, "cs", cs, "JSON coefficients (numbers or [re, im])");
    params.add(sub, "xi", xi, "base point");
    params.add(sub, "n", n, "trace length");
    params.add(sub, "seed-value", seedValue, "|F(xi)| for the summability probe");
    params.add(sub, "delta", delta, "slope threshold per step");
    common_opts(sub);
    sub->callback([&] {
      action = [&](Artifacts& art) {
        const DiagonalFlow flow(doubles_from_json(xs, "xs"), CoefficientVector(complexes_from_json(cs, "cs")));
        const auto tr = product_trace(flow, xi, n, delta);
        const auto probe = summability_probe(flow, xi, seedValue, n);
        std::ostringstream csv;
        write_trace_csv(csv, tr);
        art.write("flow.csv", csv.str());
        json j;
        j["forward"] = to_string(tr.classification);
        j["backward"] = to_string(tr.backwardClass);
        j["l2_compatible"] = tr.l2Compatible;
        j["forward_slope"] = tr.forwardSlope;
        j["backward_slope"] = tr.backwardSlope;
        j["drift"] = tr.forwardLogs.back() / static_cast<double>(n);
        j["zero_hits"] = tr.zeroHits.size();
        auto num = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
        j["sum_forward"] = num(probe.forward.back());
        j["sum_backward"] = num(probe.backward.back());
        j["sum_total"] = num(probe.total.back());
        j["overflow"] = probe.overflow;
        art.write("flow.json", j.dump(2) + "\n");
        out << "forward " << to_string(tr.classification) << "\n";
        out << "backward " << to_string(tr.backwardClass) << "\n";
        out << "drift " << format_double(tr.forwardLogs.back() / static_cast<double>(n)) << "\n";
      };
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  const json echo = params.to_json(chosen);

  Artifacts art;
  art.dir = common.out;
  try {
    action(art);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ParseError ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  json manifest;
  manifest["command"] = command;
  manifest["params"] = echo;
  json inputs = json::object();
  if (configPath) inputs[*configPath] = fnv1a_hex(configBytes);
  manifest["inputs"] = inputs;
  json outputs = json::object();
  for (const auto& [name, contents] : art.files) outputs[name] = fnv1a_hex(contents);
  manifest["outputs"] = outputs;
  manifest["version"] = kVersion;
  manifest["seed"] = common.seed;
  manifest["timestamp"] = utc_timestamp();
  try {
    art.write(command + ".manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hrtlab::cli
