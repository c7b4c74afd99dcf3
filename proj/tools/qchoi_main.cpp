#include "qchoi/io.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>

using namespace qchoi;
using io::Json;

namespace {

class StageTimer {
 public:
  explicit StageTimer(bool enabled) : enabled_(enabled) {}
  template <class F>
  auto run(const char* stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = f();
    const auto t1 = std::chrono::steady_clock::now();
    if (enabled_) {
      const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      std::fprintf(stderr, "[time] %s %.1f ms\n", stage, ms);
    }
    return result;
  }

 private:
  bool enabled_;
};

std::uint64_t default_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CHOI_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

Json witness_to_json(const CVector& w) {
  Json arr = Json::array();
  for (Index i = 0; i < w.size(); ++i) arr.push_back(Json::array({w(i).real(), w(i).imag()}));
  return arr;
}

const char* verdict_name(VerdictStatus s) {
  return s == VerdictStatus::Violated ? "violated" : "no_violation_found";
}

const char* superpos_name(SuperposStatus s) {
  switch (s) {
    case SuperposStatus::Yes: return "yes";
    case SuperposStatus::No: return "no";
    default: return "unknown";
  }
}

Json sn_bounds_to_json(const SNBounds& b) {
  Json j;
  j["lower"] = b.lower;
  if (b.upper)
    j["upper"] = *b.upper;
  else
    j["upper"] = "unknown";
  j["upper_via_ppt_regime"] = b.upper_via_ppt_regime;
  if (b.lower_witness) {
    j["lower_witness"] = Json{{"k", b.lower_witness->k}, {"pairing", b.lower_witness->pairing}};
  }
  if (b.upper_decomposition) {
    j["upper_decomposition"] =
        Json{{"terms", b.upper_decomposition->weights.size()},
             {"residual", b.upper_decomposition->residual}};
  }
  return j;
}

Json superpos_to_json(const SuperposVerdict& v) {
  Json j;
  j["k"] = v.k;
  j["verdict"] = superpos_name(v.status);
  j["sn_lower_bound"] = v.sn_lower_bound;
  if (v.status == SuperposStatus::Yes) {
    j["kraus_terms"] = v.kraus_rank_k.size();
    j["reconstruction_error"] = v.reconstruction_error;
  }
  if (v.status == SuperposStatus::No && v.witness) {
    j["witness_k"] = v.witness->k;
    j["witness_pairing"] = v.witness->pairing;
  }
  if (v.sampled_violations > 0) j["sampled_violations"] = v.sampled_violations;
  return j;
}

struct AnalyzeFlags {
  std::string path;
  std::string x0_spec = "mes";
  Index kmax = 0;
  std::optional<std::uint64_t> seed;
  int restarts = 32;
  bool as_table = false;
  bool strict = false;
  bool timings = false;
};

void print_table(const Json& report) {
  const Json& r = report["results"];
  std::printf("%-26s %s\n", "digest", report["digest"].get<std::string>().c_str());
  std::printf("%-26s %s\n", "x0", report["x0"]["spec"].get<std::string>().c_str());
  if (r.contains("ppt")) {
    std::printf("%-26s %s\n", "ppt", r["ppt"].get<bool>() ? "true" : "false");
  }
  if (r.contains("cp")) {
    std::printf("%-26s %s (min_eig %.6g, via D %.6g)\n", "completely_positive",
                r["cp"]["is_cp"].get<bool>() ? "true" : "false",
                r["cp"]["min_eig"].get<double>(), r["cp"]["min_eig_D"].get<double>());
  }
  if (r.contains("d_norm")) std::printf("%-26s %.12g\n", "d_norm", r["d_norm"].get<double>());
  if (r.contains("k_positive"))
    for (const auto& kj : r["k_positive"])
      std::printf("%-26s k=%lld %s (achieved_min %.6g)\n", "k_positive",
                  static_cast<long long>(kj["k"].get<Index>()),
                  kj["status"].get<std::string>().c_str(), kj["achieved_min"].get<double>());
  if (r.contains("k_superpositive"))
    for (const auto& kj : r["k_superpositive"])
      std::printf("%-26s k=%lld %s\n", "k_superpositive",
                  static_cast<long long>(kj["k"].get<Index>()),
                  kj["verdict"].get<std::string>().c_str());
  if (r.contains("entanglement_breaking"))
    std::printf("%-26s %s\n", "entanglement_breaking",
                r["entanglement_breaking"]["verdict"].get<std::string>().c_str());
  if (r.contains("sn_bounds_D")) {
    const Json& b = r["sn_bounds_D"];
    std::printf("%-26s lower=%lld upper=%s\n", "sn_bounds_D",
                static_cast<long long>(b["lower"].get<Index>()),
                b["upper"].is_number() ? std::to_string(b["upper"].get<Index>()).c_str()
                                       : "unknown");
  }
  if (r.contains("sn_bounds")) {
    const Json& b = r["sn_bounds"];
    std::printf("%-26s lower=%lld upper=%s\n", "sn_bounds",
                static_cast<long long>(b["lower"].get<Index>()),
                b["upper"].is_number() ? std::to_string(b["upper"].get<Index>()).c_str()
                                       : "unknown");
  }
}

int run_analyze(const AnalyzeFlags& flags) {
  const std::string bytes = io::read_file(flags.path);
  const io::MapFile file = io::parse_map_file(bytes);

  SeeSawConfig cfg;
  cfg.restarts = flags.restarts;
  cfg.seed = default_seed(flags.seed);
  StageTimer timer(flags.timings);

  Json report;
  report["input"] = flags.path;
  report["digest"] = io::digest_hex(bytes);
  report["seed"] = cfg.seed;
  report["budget"] = Json{{"restarts", cfg.restarts}, {"max_iters", cfg.max_iters}, {"tol", cfg.tol}};

  bool any_unknown = false;
  Json results;

  if (file.rep == io::MapFile::Rep::State) {
    const BipartiteOperator& rho = *file.state;
    report["x0"] = Json{{"spec", "n/a"}};
    results["ppt"] = timer.run("ppt", [&] { return ppt_check(rho); });
    const SNBounds bounds = timer.run("sn_bounds", [&] { return sn_bounds(rho, cfg); });
    results["sn_bounds"] = sn_bounds_to_json(bounds);
    any_unknown = !bounds.upper.has_value();
  } else {
    const QuantumMap& phi = *file.map;
    const Index n = phi.dim();
    const Index kmax = (flags.kmax > 0 && flags.kmax <= n) ? flags.kmax : n;
    const CyclicVector x0 = io::parse_x0_spec(flags.x0_spec, n);
    report["x0"] = Json{{"spec", flags.x0_spec},
                       {"normalized", x0.normalized()},
                       {"hs_norm", x0.hs_norm()},
                       {"condition", x0.condition()}};

    const CpResult cp = timer.run("cp", [&] { return is_cp(phi, x0); });
    results["cp"] = Json{{"is_cp", cp.cp}, {"min_eig", cp.min_eig}, {"min_eig_D", cp.min_eig_D}};

    Json kpos = Json::array();
    for (Index k = 1; k <= kmax; ++k) {
      const Verdict v = timer.run("k_positive", [&] { return is_k_positive(phi, k, x0, cfg); });
      Json kj;
      kj["k"] = k;
      kj["status"] = verdict_name(v.status);
      kj["achieved_min"] = v.achieved_min;
      if (v.witness) kj["witness"] = witness_to_json(*v.witness);
      kpos.push_back(std::move(kj));
    }
    results["k_positive"] = std::move(kpos);

    results["d_norm"] = timer.run("d_norm", [&] { return d_norm(phi, x0).value; });

    if (cp.cp) {
      results["kraus_rank"] = timer.run("kraus", [&] { return kraus(phi).size(); });

      const BipartiteOperator d = choi_D(phi, x0);
      const double t = d.mat.trace().real();
      if (t > 1e-14) {
        BipartiteOperator rho(n, n, CMatrix(0.5 * (d.mat + CMatrix(d.mat.adjoint())) / t));
        const SNBounds bounds = timer.run("sn_bounds_D", [&] { return sn_bounds(rho, cfg); });
        results["sn_bounds_D"] = sn_bounds_to_json(bounds);
        if (!bounds.upper) any_unknown = true;
      }

      Json ksup = Json::array();
      for (Index k = 1; k <= kmax; ++k) {
        const SuperposVerdict v =
            timer.run("k_superpositive", [&] { return is_k_superpositive(phi, k, x0, cfg); });
        if (v.status == SuperposStatus::Unknown) any_unknown = true;
        ksup.push_back(superpos_to_json(v));
      }
      results["k_superpositive"] = std::move(ksup);

      const SuperposVerdict eb =
          timer.run("entanglement_breaking", [&] { return is_entanglement_breaking(phi, x0, cfg); });
      if (eb.status == SuperposStatus::Unknown) any_unknown = true;
      results["entanglement_breaking"] = superpos_to_json(eb);
    }
  }

  report["results"] = std::move(results);

  if (flags.as_table)
    print_table(report);
  else
    std::fputs(io::canonical_dump(report).c_str(), stdout);

  if (flags.strict && any_unknown) return 3;
  return 0;
}

int run_pair(const std::string& path_a, const std::string& path_b, const std::string& x0_spec) {
  const io::MapFile fa = io::parse_map_file(io::read_file(path_a));
  const io::MapFile fb = io::parse_map_file(io::read_file(path_b));
  if (!fa.map || !fb.map) throw std::invalid_argument("pair: both inputs must be maps");
  if (fa.map->dim() != fb.map->dim()) throw std::invalid_argument("pair: dimension mismatch");
  const CyclicVector x0 = io::parse_x0_spec(x0_spec, fa.map->dim());
  const Complex value = pair_trace(choi_C(*fa.map, x0), choi_D(*fb.map, x0));
  if (std::abs(value.imag()) <= 1e-12 * (1.0 + std::abs(value.real())))
    std::printf("%.17g\n", value.real());
  else
    std::printf("(%.17g, %.17g)\n", value.real(), value.imag());
  return 0;
}

int run_gen(const std::string& name, Index n, const std::string& out) {
  std::string base = name;
  double param = 0.0;
  bool has_param = false;
  if (const auto pos = name.find(':'); pos != std::string::npos) {
    base = name.substr(0, pos);
    param = std::stod(name.substr(pos + 1));
    has_param = true;
  }

  io::MapFile f;
  if (base == "identity") {
    f = io::from_map(identity_map(n), io::MapFile::Rep::Kraus, "identity");
  } else if (base == "transpose") {
    f = io::from_map(transpose_map(n), io::MapFile::Rep::Pairs, "transpose");
  } else if (base == "choi3") {
    if (n != 3) throw std::invalid_argument("gen: choi3 requires n = 3");
    f = io::from_map(choi3_map(), io::MapFile::Rep::Pairs, "choi3");
  } else if (base == "depolarizing") {
    if (!has_param) throw std::invalid_argument("gen: depolarizing needs :lambda");
    f = io::from_map(depolarizing(param, n), io::MapFile::Rep::Kraus, "depolarizing");
  } else if (base == "witness") {
    if (!has_param) throw std::invalid_argument("gen: witness needs :t");
    f = io::from_map(witness_map(param, n), io::MapFile::Rep::Pairs, "witness");
  } else if (base == "measure-prepare") {
    f = io::from_map(measure_prepare(n), io::MapFile::Rep::Kraus, "measure-prepare");
  } else if (base == "isotropic") {
    if (!has_param) throw std::invalid_argument("gen: isotropic needs :F");
    f = io::from_state(isotropic_state(param, n), "isotropic");
  } else {
    throw std::invalid_argument("gen: unknown generator " + base);
  }

  const std::string text = io::serialize(f);
  if (out.empty())
    std::fputs(text.c_str(), stdout);
  else
    io::write_file(out, text);
  return 0;
}

struct TruncateFlags {
  std::string family = "adseq";
  Index ambient = 16;
  double p = 2.0;
  double eps = 0.1;
  int steps = 16;
  std::string map_path;
  std::string maps_csv;
  std::string x0_spec = "mes";
  std::string out;
  Index test_set = 20;
  std::optional<std::uint64_t> seed;
};

int run_truncate(const TruncateFlags& flags) {
  ConvergenceFamily family;
  std::optional<CyclicVector> x0;
  if (flags.family == "adseq") {
    family.kind = ConvergenceFamily::Kind::AdSeq;
    family.p = flags.p;
    family.eps = flags.eps;
    x0 = diag_cyclic(flags.ambient, flags.p, false);
  } else if (flags.family == "constant" || flags.family == "interp") {
    family.kind = flags.family == "constant" ? ConvergenceFamily::Kind::Constant
                                             : ConvergenceFamily::Kind::Interpolation;
    family.steps = flags.steps;
    if (flags.map_path.empty()) throw std::invalid_argument("truncate: --map required");
    const io::MapFile f = io::parse_map_file(io::read_file(flags.map_path));
    if (!f.map) throw std::invalid_argument("truncate: --map must be a map file");
    family.maps.push_back(*f.map);
    x0 = io::parse_x0_spec(flags.x0_spec, f.map->dim());
  } else if (flags.family == "list") {
    family.kind = ConvergenceFamily::Kind::List;
    if (flags.maps_csv.empty()) throw std::invalid_argument("truncate: --maps required");
    std::stringstream ss(flags.maps_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const io::MapFile f = io::parse_map_file(io::read_file(item));
      if (!f.map) throw std::invalid_argument("truncate: list entries must be maps");
      family.maps.push_back(*f.map);
    }
    if (family.maps.empty()) throw std::invalid_argument("truncate: empty map list");
    x0 = io::parse_x0_spec(flags.x0_spec, family.maps[0].dim());
  } else {
    throw std::invalid_argument("truncate: unknown family " + flags.family);
  }

  const auto rows = convergence_run(family, *x0, flags.test_set, default_seed(flags.seed));
  const std::string table = convergence_table(rows);
  if (flags.out.empty())
    std::fputs(table.c_str(), stdout);
  else
    io::write_file(flags.out, table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Choi matrix toolkit: positivity, Schmidt numbers and "
               "entanglement breaking for maps on matrix algebras"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap the OpenMP thread pool");

  AnalyzeFlags an;
  auto* analyze = app.add_subcommand("analyze", "full report for a map or state file");
  analyze->add_option("file", an.path, "input file")->required();
  analyze->add_option("--x0", an.x0_spec, "cyclic vector: mes | diag:p=<real> | <json path>");
  analyze->add_option("--kmax", an.kmax, "largest k for the k-indexed tests");
  std::uint64_t an_seed = 0;
  auto* an_seed_opt = analyze->add_option("--seed", an_seed, "RNG seed (default CHOI_SEED or 0)");
  analyze->add_option("--restarts", an.restarts, "see-saw restarts");
  analyze->add_flag("--table", an.as_table, "aligned table instead of JSON");
  bool an_json = false;
  analyze->add_flag("--json", an_json, "JSON report (default)");
  analyze->add_flag("--strict", an.strict, "exit 3 when any verdict is unknown");
  analyze->add_flag("--timings", an.timings, "stage wall times on stderr");

  std::string pa, pb, pair_x0 = "mes";
  auto* pair_cmd = app.add_subcommand("pair", "Tr(choi_C(A) choi_D(B)) for two map files");
  pair_cmd->add_option("mapA", pa)->required();
  pair_cmd->add_option("mapB", pb)->required();
  pair_cmd->add_option("--x0", pair_x0);

  std::string gen_name, gen_out;
  Index gen_n = 2;
  auto* gen_cmd = app.add_subcommand(
      "gen", "write a built-in map/state: identity, transpose, choi3, depolarizing:l, "
             "witness:t, measure-prepare, isotropic:F");
  gen_cmd->add_option("name", gen_name)->required();
  gen_cmd->add_option("n", gen_n)->required();
  gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

  TruncateFlags tr;
  auto* tr_cmd = app.add_subcommand("truncate-experiment",
                                    "convergence table for a map sequence");
  tr_cmd->add_option("--family", tr.family, "adseq | constant | interp | list");
  tr_cmd->add_option("--N", tr.ambient, "ambient dimension (adseq)");
  tr_cmd->add_option("--p", tr.p, "x0 exponent (adseq)");
  tr_cmd->add_option("--eps", tr.eps, "V_m exponent (adseq)");
  tr_cmd->add_option("--steps", tr.steps, "sequence length (constant/interp)");
  tr_cmd->add_option("--map", tr.map_path, "target map file (constant/interp)");
  tr_cmd->add_option("--maps", tr.maps_csv, "comma-separated map files (list)");
  tr_cmd->add_option("--x0", tr.x0_spec, "cyclic vector spec (non-adseq families)");
  tr_cmd->add_option("--out", tr.out, "output path (default stdout)");
  tr_cmd->add_option("--test-set", tr.test_set, "random trace-class probes for the weak* column");
  std::uint64_t tr_seed = 0;
  auto* tr_seed_opt = tr_cmd->add_option("--seed", tr_seed);

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);
  if (*an_seed_opt) an.seed = an_seed;
  if (*tr_seed_opt) tr.seed = tr_seed;

  try {
    if (*analyze) return run_analyze(an);
    if (*pair_cmd) return run_pair(pa, pb, pair_x0);
    if (*gen_cmd) return run_gen(gen_name, gen_n, gen_out);
    if (*tr_cmd) return run_truncate(tr);
  } catch (const NotAState& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NotCompletelyPositive& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
