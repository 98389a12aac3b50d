#include "lorentz/cli.hpp"

#include "lorentz/invariant_tests.hpp"
#include "lorentz/io.hpp"
#include "lorentz/mc_verify.hpp"
#include "lorentz/random.hpp"
#include "lorentz/wishart.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace lorentz {

namespace {

using nlohmann::json;

// Input or argument problem; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<int> m;
  std::optional<int> m0;
  std::optional<double> eta;
  std::string sigma;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string in;
  std::string out;
  std::string format = "csv";
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Sigma from a JSON literal or @file; also accepts a full model config.
ConePoint parse_sigma(const std::string& text, std::optional<double> eta) {
  const std::string body = !text.empty() && text[0] == '@' ? slurp(text.substr(1)) : text;
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("--sigma: invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("sigma")) {
    const ModelConfig c = model_config_from_json(j);
    if (eta && std::abs(*eta - c.eta) > 0.0) {
      throw UsageError("--sigma: config eta " + format_double(c.eta) + " differs from --eta " + format_double(*eta));
    }
    return c.sigma;
  }
  return cone_point_from_json(j);
}

int resolve_m(const Options& o, const std::optional<ConePoint>& sigma) {
  if (sigma) {
    if (o.m && *o.m != sigma->m()) {
      throw UsageError("--m " + std::to_string(*o.m) + " does not match sigma dimension " +
                       std::to_string(sigma->m()));
    }
    return sigma->m();
  }
  if (!o.m) throw UsageError("one of --m or --sigma is required");
  return *o.m;
}

std::vector<ConePoint> read_points(const std::string& path, std::optional<int> m) {
  const std::string body = slurp(path);
  std::istringstream is(body);
  const auto first = body.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (body[first] == '[' || body[first] == '{')) return read_json_points(is, m);
  return read_csv(is, m);
}

void require_observations(const std::vector<ConePoint>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!contains(xs[i])) {
      throw ConeError("observation " + std::to_string(i + 1) + " not in Lorentz cone: " + to_string(xs[i]));
    }
  }
}

// Writes to --out if set, else to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : to_file_(!path.empty()) {
    if (to_file_) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    }
    os_ = to_file_ ? static_cast<std::ostream*>(&file_) : &fallback;
  }
  std::ostream& operator*() { return *os_; }
  bool to_file() const { return to_file_; }

 private:
  bool to_file_;
  std::ofstream file_;
  std::ostream* os_;
};

std::string point_text(const ConePoint& x) {
  std::string s = "(" + format_double(x.lambda) + ", (";
  for (int i = 0; i < x.m(); ++i) s += (i ? ", " : "") + format_double(x.w(i));
  return s + "))";
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<ConePoint> sigma;
  if (!o.sigma.empty()) sigma = parse_sigma(o.sigma, o.eta);
  const int m = resolve_m(o, sigma);
  AmbientSpace space(m);
  const WishartModel model(*o.eta, sigma.value_or(ConePoint::identity(m)));
  if (o.n < 1) throw UsageError("--n must be at least 1");
  Rng rng(o.seed);
  const auto xs = sample(model, o.n, rng);

  Sink sink(o.out, out);
  if (o.format == "json") {
    write_json_points(*sink, xs);
  } else {
    write_csv(*sink, xs);
  }
  ConePoint mean = ConePoint(0.0, Vector::Zero(m));
  for (const ConePoint& x : xs) mean += x;
  mean *= 1.0 / static_cast<double>(xs.size());
  std::ostream& summary = sink.to_file() ? out : err;
  summary << "n = " << xs.size() << ", seed = " << o.seed << "\n"
          << "sample mean = " << point_text(mean) << "\n"
          << "sigma       = " << point_text(model.sigma()) << "\n";
  return kExitOk;
}

int cmd_density(const Options& o, std::ostream& out) {
  std::optional<ConePoint> sigma;
  if (!o.sigma.empty()) sigma = parse_sigma(o.sigma, o.eta);
  const auto xs = read_points(o.in, o.m);
  if (xs.empty()) throw UsageError("no observations in '" + o.in + "'");
  const int m = xs.front().m();
  if (sigma && sigma->m() != m) throw UsageError("sigma dimension does not match the observations");
  const WishartModel model(*o.eta, sigma.value_or(ConePoint::identity(m)));

  Sink sink(o.out, out);
  if (o.format == "json") {
    json arr = json::array();
    for (const ConePoint& x : xs) {
      const double l = log_density(model, x);
      arr.push_back(json{{"point", to_json(x)},
                         {"log_density", std::isfinite(l) ? json(l) : json(nullptr)},
                         {"density", std::exp(l)}});
    }
    *sink << arr.dump() << '\n';
  } else {
    *sink << csv_header(m) << ",log_density,density\n";
    for (const ConePoint& x : xs) {
      const double l = log_density(model, x);
      *sink << format_double(x.lambda);
      for (int i = 0; i < m; ++i) *sink << ',' << format_double(x.w(i));
      *sink << ',' << (std::isfinite(l) ? format_double(l) : std::string("-inf")) << ','
            << format_double(std::exp(l)) << '\n';
    }
  }
  return kExitOk;
}

int cmd_test_t1(const Options& o, std::ostream& out) {
  const auto xs = read_points(o.in, o.m);
  if (xs.empty()) throw UsageError("no observations in '" + o.in + "'");
  require_observations(xs);
  const SubconeSplit split(xs.front().m(), *o.m0);
  Sink sink(o.out, out);
  for (const ConePoint& x : xs) {
    *sink << t1_report(subcone_test(x, split, *o.eta), x, split, *o.eta).dump() << '\n';
  }
  return kExitOk;
}

int cmd_test_t2(const Options& o, std::ostream& out) {
  const auto xs = read_points(o.in, o.m);
  if (xs.size() != 2) {
    throw UsageError("test-t2 needs exactly 2 observations, got " + std::to_string(xs.size()));
  }
  require_observations(xs);
  const int m = xs.front().m();
  require_shape(m, *o.eta);
  const NullCalibration calib = calibrate_null(m, *o.eta, o.n, o.seed);
  const EqualityTestResult r = equality_test(xs[0], xs[1], *o.eta, calib);
  const EigenpairDensity dens(m, *o.eta);
  json report = t2_report(r, m, *o.eta, calib, dens.anomalies());
  const double ld = dens.log_density(r.eigen);
  report["eigenpair_log_density"] = std::isfinite(ld) ? json(ld) : json(nullptr);
  Sink sink(o.out, out);
  *sink << report.dump() << '\n';
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const int given = (o.m ? 1 : 0) + (o.m0 ? 1 : 0) + (o.eta ? 1 : 0);
  if (given != 0 && given != 3) throw UsageError("verify takes either all of --m, --m0, --eta or none of them");
  const bool json_lines = o.format == "json";
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw UsageError("cannot open '" + o.out + "' for writing");
  }
  bool all = true;
  auto emit = [&](const CheckReport& r, std::optional<int> criterion) {
    json j = to_json(r);
    if (criterion) j["criterion"] = *criterion;
    if (file.is_open()) file << j.dump() << '\n';
    if (json_lines) {
      out << j.dump() << '\n';
      return;
    }
    if (criterion) {
      out << "    " << (r.passed ? "ok   " : "bad  ");
    } else {
      out << (r.passed ? "PASS  " : "FAIL  ");
    }
    out << r.name << "  statistic=" << format_double(r.statistic) << "  threshold=" << format_double(r.threshold)
        << '\n';
  };
  if (given == 0) {
    for (const CriterionResult& c : run_acceptance_suite(o.seed)) {
      if (!json_lines) out << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << '\n';
      for (const CheckReport& r : c.checks) emit(r, c.id);
      all = all && c.passed;
    }
  } else {
    for (const CheckReport& r : run_parametric_suite(*o.m, *o.m0, *o.eta, o.seed)) {
      emit(r, std::nullopt);
      all = all && r.passed;
    }
  }
  if (!json_lines) out << (all ? "all checks passed" : "some checks failed") << '\n';
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wishart distributions on the Lorentz cone: sampling, densities, invariant tests", "lorentz_cli"};
  app.require_subcommand(1);

  Options o;
  bool seed_given = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "dimension of W (the cone lives in R x R^m)")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output path (default: standard output)");
  };
  auto add_eta = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--eta", o.eta, "shape parameter, must exceed (m-1)/2");
    if (required) opt->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
          o.seed = s;
          seed_given = true;
        },
        "RNG seed");
  };

  auto* sample_cmd = app.add_subcommand("sample", "draw from W_{eta, sigma}");
  add_common(sample_cmd);
  add_eta(sample_cmd, true);
  add_format(sample_cmd);
  add_seed(sample_cmd);
  sample_cmd->add_option("--sigma", o.sigma, "scale point, JSON literal or @file (default e)");
  sample_cmd->add_option("--n", o.n, "number of draws")->default_val(100);

  auto* density_cmd = app.add_subcommand("density", "log density at each observation");
  add_common(density_cmd);
  add_eta(density_cmd, true);
  add_format(density_cmd);
  density_cmd->add_option("--sigma", o.sigma, "scale point, JSON literal or @file (default e)");
  density_cmd->add_option("--in", o.in, "observations, CSV or JSON")->required();

  auto* t1_cmd = app.add_subcommand("test-t1", "test sigma in the subcone over the first m0 coordinates");
  add_common(t1_cmd);
  add_eta(t1_cmd, true);
  t1_cmd->add_option("--m0", o.m0, "subcone dimension, 1 <= m0 < m")->required();
  t1_cmd->add_option("--in", o.in, "observations, CSV or JSON")->required();

  auto* t2_cmd = app.add_subcommand("test-t2", "test equality of the scales of two observations");
  add_common(t2_cmd);
  add_eta(t2_cmd, true);
  add_seed(t2_cmd);
  t2_cmd->add_option("--in", o.in, "exactly two observations, CSV or JSON")->required();
  t2_cmd->add_option("--n", o.n, "null calibration size")->default_val(20000);

  auto* verify_cmd = app.add_subcommand("verify", "run the Monte Carlo and quadrature checks");
  add_common(verify_cmd);
  add_eta(verify_cmd, false);
  add_format(verify_cmd);
  add_seed(verify_cmd);
  verify_cmd->add_option("--m0", o.m0, "subcone dimension");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (sample_cmd->parsed()) return cmd_sample(o, out, err);
    if (density_cmd->parsed()) return cmd_density(o, out);
    if (t1_cmd->parsed()) return cmd_test_t1(o, out);
    if (t2_cmd->parsed()) return cmd_test_t2(o, out);
    if (!seed_given) o.seed = kAcceptanceSeed;
    return cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace lorentz
