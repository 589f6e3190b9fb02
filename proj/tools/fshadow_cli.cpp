// fshadow: command-line harness for fermionic classical shadows.
//
// Exit codes: 0 ok, 2 usage, 3 data error, 4 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fshadow/coefficients.hpp"
#include "fshadow/errors.hpp"
#include "fshadow/io.hpp"
#include "fshadow/learner.hpp"
#include "fshadow/shadow.hpp"
#include "fshadow/verify.hpp"

namespace {

using namespace fshadow;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitVerify = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string m_range;
  int m = 0;
  int m_max = 0;
  int n = -1;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::string ensemble = "matchings";
  double epsilon = 0.05;
  double delta = 0.05;
  std::string state, shadows, out;
  std::string aggregation = "mean";
  std::optional<int> batches;
  int threads = 1;
  std::string level;
  bool inject_fault = false;
  double sample_constant = kDefaultSampleConstant;
};

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw UsageError("");
      return {v, v};
    }
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw UsageError("");
    const int hi = std::stoi(b, &used);
    if (used != b.size()) throw UsageError("");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("bad --m range '" + s + "' (expected A..B)");
  } catch (const UsageError&) {
    throw UsageError("bad --m range '" + s + "' (expected A..B)");
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DataError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

SlaterDescriptor read_state(const std::string& path) {
  if (path.empty()) throw UsageError("--state FILE is required");
  return slater_from_json(read_json_file(path));
}

std::vector<ShadowSample> read_shadows(const std::string& path) {
  if (path.empty()) throw UsageError("--shadows FILE is required");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  auto s = read_shadows_jsonl(in);
  if (s.empty()) throw DataError(path + ": no shadow records");
  return s;
}

EstimatorConfig make_config(const Options& o) {
  EstimatorConfig cfg;
  cfg.aggregation = parse_aggregation(o.aggregation);
  if (o.batches)
    cfg.batches = *o.batches;
  else
    cfg.batches = cfg.aggregation == Aggregation::mean ? 1 : EstimatorConfig::default_batches(o.delta);
  cfg.validate();
  return cfg;
}

// Evaluates f on every sample, splitting the index range over threads; output order is fixed.
template <class T, class F>
std::vector<T> evaluate(const std::vector<ShadowSample>& samples, int threads, F f) {
  if (threads < 1) throw UsageError("--threads must be positive");
  std::vector<T> out(samples.size());
  const std::size_t chunk = (samples.size() + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(samples.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = f(samples[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

void require_seed(const Options& o) {
  if (!o.seed) throw UsageError("--seed is required for sampling subcommands");
}

int cmd_coeffs(const Options& o) {
  const auto [lo, hi] = parse_range(o.m_range);
  if (lo < 1 || hi < lo) throw UsageError("empty or invalid --m range");
  if (hi > 200) throw UsageError("--m upper end exceeds 200");
  Output out(o.out);
  write_coefficients_csv(out.stream(), lo, hi);
  return 0;
}

int cmd_norm_scan(const Options& o) {
  if (o.m_max < 1) throw UsageError("--m-max must be positive");
  if (o.m_max > 100) throw UsageError("--m-max exceeds 100");
  Output out(o.out);
  write_norm_scan_csv(out.stream(), norm_scan(o.m_max));
  return 0;
}

int cmd_random_state(const Options& o) {
  require_seed(o);
  if (o.m < 1) throw UsageError("--m must be positive");
  if (o.n < 0 || o.n > o.m) throw UsageError("--n must lie in [0, m]");
  Rng rng(*o.seed);
  Output out(o.out);
  out.stream() << to_json(SlaterDescriptor(o.n, random_unitary(o.m, rng))).dump() << '\n';
  return 0;
}

int cmd_sample(const Options& o) {
  require_seed(o);
  if (!o.samples || *o.samples == 0) throw UsageError("--samples must be positive");
  const auto psi = read_state(o.state);
  const auto shadows =
      collect_shadows(covariance_of_slater(psi), *o.samples, parse_ensemble(o.ensemble), *o.seed, o.threads);
  Output out(o.out);
  write_shadows_jsonl(out.stream(), shadows);
  return 0;
}

void check_modes(const SlaterDescriptor& psi, const std::vector<ShadowSample>& s) {
  if (psi.m() != s.front().m())
    throw DataError("state has " + std::to_string(psi.m()) + " modes but shadows have " +
                    std::to_string(s.front().m()));
}

int cmd_estimate_rdm(const Options& o) {
  const auto shadows = read_shadows(o.shadows);
  Output out(o.out);
  out.stream() << to_json(estimate_R(shadows, o.delta)).dump(2) << '\n';
  return 0;
}

int cmd_estimate_fidelity(const Options& o) {
  const auto cfg = make_config(o);
  const auto psi = read_state(o.state);
  const auto shadows = read_shadows(o.shadows);
  check_modes(psi, shadows);
  const FidelityEstimator est(GaussianTarget::from_slater(psi));
  const auto values = evaluate<double>(shadows, o.threads, [&](const ShadowSample& s) { return est(s); });
  Output out(o.out);
  out.stream() << to_json(summarize(values, cfg)).dump(2) << '\n';
  return 0;
}

int cmd_estimate_xtype(const Options& o) {
  const auto cfg = make_config(o);
  const auto psi = read_state(o.state);
  const auto shadows = read_shadows(o.shadows);
  check_modes(psi, shadows);
  if (psi.n() % 2) throw UsageError("x-type estimation needs an even number of electrons");
  const XTypeEstimator est(psi);
  const auto values =
      evaluate<std::complex<double>>(shadows, o.threads, [&](const ShadowSample& s) { return est(s); });
  std::vector<double> re, im;
  for (const auto& v : values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  Output out(o.out);
  out.stream() << to_json(summarize(re, cfg), summarize(im, cfg)).dump(2) << '\n';
  return 0;
}

int cmd_learn(const Options& o) {
  require_seed(o);
  std::optional<SlaterDescriptor> truth;
  if (!o.state.empty()) {
    truth = read_state(o.state);
  } else {
    if (o.m < 1) throw UsageError("--m must be positive (or pass --state)");
    if (o.n < 0 || o.n > o.m) throw UsageError("--n must lie in [0, m]");
    Rng rng(derive_seed(*o.seed, 0x5eed));
    truth.emplace(o.n, random_unitary(o.m, rng));
  }
  LearnOptions lo;
  lo.sample_constant = o.sample_constant;
  lo.samples = o.samples;
  lo.ensemble = parse_ensemble(o.ensemble);
  lo.threads = o.threads;
  const auto report = end_to_end_learn(*truth, o.epsilon, o.delta, *o.seed, lo);
  Output out(o.out);
  nlohmann::json j = to_json(report);
  j["truth"] = to_json(*truth);
  out.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const Options& o) {
  std::string level = o.level;
  if (const char* env = std::getenv("MS_VERIFY_LEVEL"); env && *env) level = env;
  if (level.empty()) level = "fast";
  VerifyOptions vo;
  vo.level = parse_verify_level(level);
  vo.inject_lambda_fault = o.inject_fault;
  Output out(o.out);
  bool ok = true;
  for (const auto& r : run_verification(vo)) {
    out.stream() << (r.passed ? "PASS " : "FAIL ") << r.name << " max_error=" << format_double(r.max_error) << " ("
                 << r.detail << ")\n";
    ok = ok && r.passed;
  }
  out.stream() << (ok ? "verify: all checks passed" : "verify: FAILED") << '\n';
  return ok ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermionic classical shadows with random affine matchgates"};
  app.require_subcommand(1);
  Options o;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output file (default stdout)"); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed (required)"); };
  auto add_agg = [&](CLI::App* c) {
    c->add_option("--aggregation", o.aggregation, "mean | medians")->check(CLI::IsMember({"mean", "medians"}));
    c->add_option("--batches", o.batches, "Batch count for median of means (odd)");
    c->add_option("--delta", o.delta, "Failure probability used for the default batch count");
    c->add_option("--threads", o.threads, "Worker threads");
    c->add_option("--state", o.state, "Slater state JSON")->required();
    c->add_option("--shadows", o.shadows, "Shadow JSONL file")->required();
    add_out(c);
  };

  auto* coeffs = app.add_subcommand("coeffs", "Tables of channel eigenvalues, inverse weights and norm bounds (CSV)");
  coeffs->add_option("--m", o.m_range, "Mode range A..B")->required();
  add_out(coeffs);

  auto* scan = app.add_subcommand("norm-scan", "Shadow-norm scan of the x-type family (CSV)");
  scan->add_option("--m-max", o.m_max, "Largest mode count")->required();
  add_out(scan);

  auto* rstate = app.add_subcommand("random-state", "Haar-random Slater determinant (JSON)");
  rstate->add_option("--m", o.m, "Modes")->required();
  rstate->add_option("--n", o.n, "Electrons")->required();
  add_seed(rstate);
  add_out(rstate);

  auto* sample = app.add_subcommand("sample", "Draw shadows of a Slater state (JSONL)");
  sample->add_option("--state", o.state, "Slater state JSON")->required();
  sample->add_option("--samples", o.samples, "Number of shadows")->required();
  sample->add_option("--ensemble", o.ensemble, "full | matchings")->check(CLI::IsMember({"full", "matchings"}));
  sample->add_option("--threads", o.threads, "Worker threads");
  add_seed(sample);
  add_out(sample);

  auto* rdm = app.add_subcommand("estimate-rdm", "Estimate the one-body matrix from shadows (JSON)");
  rdm->add_option("--shadows", o.shadows, "Shadow JSONL file")->required();
  rdm->add_option("--delta", o.delta, "Failure probability of the error bound");
  add_out(rdm);

  auto* fid = app.add_subcommand("estimate-fidelity", "Estimate the fidelity with a Slater state (JSON)");
  add_agg(fid);
  auto* xt = app.add_subcommand("estimate-xtype", "Estimate <psi|rho|0> for an even Slater state (JSON)");
  add_agg(xt);

  auto* learn = app.add_subcommand("learn", "Learn a hidden Slater determinant end to end (JSON)");
  learn->add_option("--m", o.m, "Modes of a random hidden state");
  learn->add_option("--n", o.n, "Electrons of a random hidden state");
  learn->add_option("--state", o.state, "Hidden state JSON (instead of a random one)");
  learn->add_option("--epsilon", o.epsilon, "Target infidelity");
  learn->add_option("--delta", o.delta, "Failure probability");
  learn->add_option("--samples", o.samples, "Override the sample count");
  learn->add_option("--sample-constant", o.sample_constant, "Constant C in the sample count");
  learn->add_option("--ensemble", o.ensemble, "full | matchings")->check(CLI::IsMember({"full", "matchings"}));
  learn->add_option("--threads", o.threads, "Worker threads");
  add_seed(learn);
  add_out(learn);

  auto* verify = app.add_subcommand("verify", "Dense cross-checks of the implementation");
  verify->add_option("--level", o.level, "fast | full (MS_VERIFY_LEVEL overrides)");
  verify->add_flag("--inject-fault", o.inject_fault, "Test mode: corrupt the expected channel eigenvalues");
  add_out(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*coeffs) return cmd_coeffs(o);
    if (*scan) return cmd_norm_scan(o);
    if (*rstate) return cmd_random_state(o);
    if (*sample) return cmd_sample(o);
    if (*rdm) return cmd_estimate_rdm(o);
    if (*fid) return cmd_estimate_fidelity(o);
    if (*xt) return cmd_estimate_xtype(o);
    if (*learn) return cmd_learn(o);
    if (*verify) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error and guard violations: bad parameter values
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
