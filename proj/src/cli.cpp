#include "disclab/cli.hpp"

#include "disclab/certificate.hpp"
#include "disclab/instances.hpp"
#include "disclab/io.hpp"
#include "disclab/komlos.hpp"
#include "disclab/random.hpp"
#include "disclab/recursion.hpp"
#include "disclab/solvers.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

namespace disclab {

namespace {

using Clock = std::chrono::steady_clock;

struct BudgetFlags {
  SolverBudget budget;
  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-candidates", budget.max_candidates,
                    "Largest 3^n handled by exhaustive search")
        ->capture_default_str();
    cmd->add_option("--anneal-steps", budget.anneal_steps, "Annealing steps per restart")
        ->capture_default_str();
    cmd->add_option("--restarts", budget.restarts, "Annealing restarts")->capture_default_str();
    cmd->add_option("--retry-cap", budget.retry_cap,
                    "Random-coloring attempts (0: ceil(100 ln(n+1)))")
        ->capture_default_str();
    cmd->add_option("--workers", budget.workers, "Worker threads (0: all cores)")
        ->capture_default_str();
  }
  Json to_json() const {
    Json j;
    j["max_candidates"] = budget.max_candidates;
    j["anneal_steps"] = budget.anneal_steps;
    j["restarts"] = budget.restarts;
    j["retry_cap"] = budget.retry_cap;
    return j;
  }
};

struct Emitter {
  std::ostream& out;
  std::string path;  // empty: stdout

  void emit(const std::string& text) const {
    if (path.empty()) {
      out << text;
    } else {
      write_file_atomic(path, text);
    }
  }
};

Json run_report(const std::string& command, Json args, const std::string& hash,
                std::uint64_t seed, Json result, Clock::time_point start) {
  Json report;
  report["command"] = command;
  report["args"] = std::move(args);
  report["instance_hash"] = hash;
  report["seed"] = seed;
  report["result"] = std::move(result);
  Json timing;
  timing["wall_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  report["timing"] = std::move(timing);
  return report;
}

std::vector<Index> parse_sizes(const std::string& text) {
  std::vector<Index> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      sizes.push_back(static_cast<Index>(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Usage, "--sizes: '" + item + "' is not a positive integer");
    }
  }
  if (sizes.empty()) throw Error(ErrorKind::Usage, "--sizes is empty");
  return sizes;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size();
  return k % 2 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

std::string csv_real(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"disclab: partial colorings, certificates and discrepancy experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "disclab 1.0");

  std::string out_path;
  std::uint64_t seed = 0;
  BudgetFlags flags;

  // generate
  auto* gen = app.add_subcommand("generate", "Write a seeded instance file");
  std::string family_name;
  Index gen_n = 0;
  Index gen_m = 0;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--family", family_name,
                  "SetSystem01 | RandomSigns | RandomUnitColumns | Hadamard | ZeroRows")
      ->required();
  gen->add_option("--n", gen_n, "Coordinate dimension (number of vectors for Komlos)")->required();
  gen->add_option("--m", gen_m, "Number of rows (ambient dimension for Komlos)")->required();
  gen->add_option("--seed", gen_seed, "Seed (required for random families)");
  gen->add_option("--out", out_path, "Output path (default: stdout)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Find a partial coloring");
  std::string instance_path;
  std::optional<Index> min_support;
  std::string method_name = "auto";
  std::string coloring_out;
  solve_cmd->add_option("instance", instance_path, "Instance file")->required();
  solve_cmd->add_option("--min-support", min_support, "Required support (default ceil(n/6))");
  solve_cmd->add_option("--method", method_name, "auto | exhaustive | anneal")
      ->check(CLI::IsMember({"auto", "exhaustive", "anneal"}));
  solve_cmd->add_option("--seed", seed, "Seed")->required();
  solve_cmd->add_option("--out", out_path, "Report path (default: stdout)");
  solve_cmd->add_option("--coloring-out", coloring_out, "Also write the coloring here");
  flags.add_to(solve_cmd);

  // verify
  auto* verify = app.add_subcommand("verify", "Check a coloring against an instance");
  std::string coloring_path;
  std::optional<double> max_disc;
  verify->add_option("instance", instance_path, "Instance file")->required();
  verify->add_option("coloring", coloring_path, "Coloring file")->required();
  verify->add_option("--max-disc", max_disc, "Largest allowed max |<eps, x_i>|");
  verify->add_option("--min-support", min_support, "Required support (default ceil(n/6))");
  verify->add_option("--out", out_path, "Report path (default: stdout)");

  // certify
  auto* certify = app.add_subcommand("certify", "Build the counting certificate for an instance");
  double delta = kDefaultDelta;
  std::uint64_t samples = 0;
  std::optional<std::uint64_t> certify_seed;
  unsigned certify_workers = 0;
  certify->add_option("instance", instance_path, "KashinSumSq instance file")->required();
  certify->add_option("--delta", delta, "delta in (0, 1)")->capture_default_str();
  certify->add_option("--samples", samples, "Monte-Carlo volume samples (0: skip)")
      ->capture_default_str();
  certify->add_option("--seed", certify_seed, "Seed (required with --samples)");
  certify->add_option("--workers", certify_workers, "Worker threads (0: all cores)");
  certify->add_option("--out", out_path, "Certificate path (default: stdout)");

  // recurse
  auto* recurse = app.add_subcommand("recurse", "Full coloring by iterated partial coloring");
  recurse->add_option("instance", instance_path, "BoxInf instance file")->required();
  recurse->add_option("--seed", seed, "Seed")->required();
  recurse->add_option("--out", out_path, "Report path (default: stdout)");
  recurse->add_option("--coloring-out", coloring_out, "Also write the coloring here");
  flags.add_to(recurse);

  // komlos
  auto* komlos = app.add_subcommand("komlos", "Komlos partial coloring via the transpose reduction");
  std::string komlos_path;
  std::optional<int> iters;
  bool full = false;
  komlos->add_option("instance", komlos_path, "Komlos (columns) instance file")->required();
  komlos->add_option("--iters", iters, "Iterate s partial rounds on the uncolored columns");
  komlos->add_flag("--full", full, "Experiment: require a full coloring (support n)");
  komlos->add_option("--seed", seed, "Seed")->required();
  komlos->add_option("--out", out_path, "Report path (default: stdout)");
  flags.add_to(komlos);

  // convert
  auto* convert = app.add_subcommand("convert", "Switch a Komlos file between column and row layout");
  std::string convert_path;
  std::string layout;
  convert->add_option("input", convert_path, "Komlos columns file or KomlosUnit rows file")
      ->required();
  convert->add_option("--to", layout, "rows | columns")
      ->required()
      ->check(CLI::IsMember({"rows", "columns"}));
  convert->add_option("--out", out_path, "Output path (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Normalized discrepancy table as CSV");
  std::string sizes_text;
  std::uint32_t seeds = 0;
  double m_ratio = 1.0;
  std::string mode = "full";
  bench->add_option("--family", family_name, "Instance family")->required();
  bench->add_option("--sizes", sizes_text, "Comma-separated n values")->required();
  bench->add_option("--seeds", seeds, "Instances per size")->required()->check(CLI::PositiveNumber);
  bench->add_option("--m-ratio", m_ratio, "m = round(ratio * n)")->capture_default_str();
  bench->add_option("--mode", mode, "full | partial")
      ->check(CLI::IsMember({"full", "partial"}))
      ->capture_default_str();
  bench->add_option("--seed", seed, "Base seed")->required();
  bench->add_option("--out", out_path, "CSV path (default: stdout)");
  flags.add_to(bench);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = Clock::now();
  const Emitter emitter{out, out_path};

  try {
    if (*gen) {
      const Family family = family_from_string(family_name);
      const bool random = family != Family::Hadamard && family != Family::ZeroRows;
      if (random && !gen_seed) {
        err << "generate: --seed is required for family " << family_name << "\n";
        return kExitUsage;
      }
      const Generated g = generate({family, gen_n, gen_m, gen_seed.value_or(0)});
      if (const auto* inst = std::get_if<Instance>(&g)) {
        emitter.emit(instance_to_json(*inst));
      } else {
        emitter.emit(komlos_to_json(std::get<KomlosInstance>(g)));
      }
      return kExitOk;
    }

    if (*solve_cmd) {
      const Instance instance = read_instance(instance_path);
      const Index need = min_support.value_or(support_threshold(instance.n()));
      SolverBudget budget = flags.budget;
      budget.seed = seed;
      Json cmd_args;
      cmd_args["min_support"] = need;
      cmd_args["method"] = method_name;
      cmd_args["budget"] = flags.to_json();
      try {
        SolveResult result;
        if (method_name == "exhaustive") {
          result = solve_exhaustive(instance, need, budget.workers);
        } else if (method_name == "anneal") {
          result = solve_anneal(instance, need, budget);
        } else {
          result = solve(instance, need, budget);
        }
        if (!coloring_out.empty()) write_coloring(coloring_out, result.coloring);
        emitter.emit(run_report("solve", cmd_args, instance_hash(instance), seed, to_json(result),
                                start)
                         .dump(2) +
                     "\n");
        return kExitOk;
      } catch (const SolverError& e) {
        Json failure;
        failure["error"] = e.what();
        if (e.best()) failure["best"] = to_json(*e.best());
        emitter.emit(
            run_report("solve", cmd_args, instance_hash(instance), seed, failure, start).dump(2) +
            "\n");
        err << "solve: " << e.what() << "\n";
        return kExitSolverFailure;
      }
    }

    if (*verify) {
      const Instance instance = read_instance(instance_path);
      const Coloring coloring = read_coloring(coloring_path);
      const DiscrepancyReport report = evaluate(instance, coloring);
      const Index need = min_support.value_or(support_threshold(instance.n()));
      std::vector<std::string> failures;
      if (coloring.support() < need) {
        failures.push_back("support " + std::to_string(coloring.support()) + " < required " +
                           std::to_string(need));
      }
      if (max_disc && report.max_abs > *max_disc) {
        failures.push_back("max_abs " + csv_real(report.max_abs) + " > allowed " +
                           csv_real(*max_disc));
      }
      Json j;
      j["instance_hash"] = instance_hash(instance);
      j["support"] = coloring.support();
      j["required_support"] = need;
      if (max_disc) j["max_disc"] = *max_disc;
      j["verified"] = failures.empty();
      j["failures"] = failures;
      j["report"] = to_json(report);
      emitter.emit(j.dump(2) + "\n");
      for (const auto& f : failures) err << "verify: " << f << "\n";
      return failures.empty() ? kExitOk : kExitBoundViolated;
    }

    if (*certify) {
      const Instance instance = read_instance(instance_path);
      if (const std::string why = model_violation(instance.rows(), NormModel::KashinSumSq);
          !why.empty()) {
        err << "certify: instance does not satisfy the KashinSumSq bound: " << why << "\n";
        return kExitUsage;
      }
      if (samples > 0 && !certify_seed) {
        err << "certify: --seed is required when --samples > 0\n";
        return kExitUsage;
      }
      const Certificate cert = counting_verdict(instance.n(), delta);
      const DetBound det = det_upper_bound(instance, cert.lambda);
      Json j;
      j["schema"] = "disclab-certificate-v1";
      j["instance_hash"] = instance_hash(instance);
      j["m"] = instance.m();
      Json body = to_json(cert);
      for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
      j["lambda_provenance"] = "largest multiple of 1e-4 with 1 + lambda^2 < (1 - delta)^-2";
      j["delta_provenance"] = delta == kDefaultDelta ? "default" : "user";
      j["implied_constant"] = implied_constant(delta);
      j["trace_det_bound"] = det.trace_bound;
      j["log_trace_det_bound"] = det.log_trace_bound;
      j["closed_form_det_bound"] = det.closed_form;
      const SmallSupportCount count = count_small_support(std::min<Index>(instance.n(), 64));
      if (instance.n() <= 64) j["small_support_exact"] = count.exact.str();
      j["per_coordinate_verdict"] = per_coordinate_verdict(delta);
      bool scan = true;
      for (Index k = 1; k <= 10000 && scan; ++k) scan = counting_verdict(k, delta).verdict;
      j["scan_verdict_n_le_10000"] = scan;
      bool ok = cert.verdict;
      if (samples > 0) {
        const VolumeEstimate vol =
            volume_check(instance, cert.lambda, samples, *certify_seed, delta, certify_workers);
        j["seed"] = *certify_seed;
        j["volume_check"] = to_json(vol);
        ok = ok && !vol.violation;
      }
      emitter.emit(j.dump(2) + "\n");
      return ok ? kExitOk : kExitBoundViolated;
    }

    if (*recurse) {
      const Instance instance = read_instance(instance_path);
      SolverBudget budget = flags.budget;
      budget.seed = seed;
      Json cmd_args;
      cmd_args["budget"] = flags.to_json();
      try {
        const RecursionResult res = full_coloring(instance, budget);
        if (!coloring_out.empty()) write_coloring(coloring_out, res.coloring);
        Json result;
        result["max_abs"] = res.report.max_abs;
        result["support"] = res.coloring.support();
        result["normalized_sqrt_n_lnln_n"] =
            instance.n() >= 3 ? res.report.max_abs /
                                    (std::sqrt(static_cast<double>(instance.n())) *
                                     std::log(std::log(static_cast<double>(instance.n()))))
                              : std::nan("");
        result["trace"] = to_json(res.trace);
        result["coloring"] = values_json(res.coloring);
        emitter.emit(
            run_report("recurse", cmd_args, instance_hash(instance), seed, result, start).dump(2) +
            "\n");
        return kExitOk;
      } catch (const RecursionError& e) {
        Json failure;
        failure["error"] = e.what();
        failure["trace"] = to_json(e.trace());
        emitter.emit(
            run_report("recurse", cmd_args, instance_hash(instance), seed, failure, start).dump(2) +
            "\n");
        err << "recurse: " << e.what() << "\n";
        return kExitSolverFailure;
      }
    }

    if (*komlos) {
      const KomlosInstance kom = read_komlos(komlos_path);
      SolverBudget budget = flags.budget;
      budget.seed = seed;
      Json cmd_args;
      cmd_args["budget"] = flags.to_json();
      if (iters) cmd_args["iters"] = *iters;
      cmd_args["full"] = full;
      try {
        Json result;
        if (iters) {
          const RecursionResult res = iterate_partial(kom, *iters, budget);
          result["signed_sum_inf_norm"] = res.report.max_abs;
          result["support"] = res.coloring.support();
          result["zeros"] = kom.n() - res.coloring.support();
          result["certified_bound"] = kDiscrepancyConstant * *iters;
          result["trace"] = to_json(res.trace);
          result["coloring"] = values_json(res.coloring);
        } else {
          const KomlosResult res =
              solve_komlos_partial(kom, full ? kom.n() : support_threshold(kom.n()), budget);
          result = to_json(res);
        }
        emitter.emit(
            run_report("komlos", cmd_args, komlos_hash(kom), seed, result, start).dump(2) + "\n");
        return kExitOk;
      } catch (const SolverError& e) {
        err << "komlos: " << e.what() << "\n";
        return kExitSolverFailure;
      } catch (const RecursionError& e) {
        err << "komlos: " << e.what() << "\n";
        return kExitSolverFailure;
      }
    }

    if (*convert) {
      const auto any = any_instance_from_json(read_file(convert_path));
      if (layout == "rows") {
        const auto* kom = std::get_if<KomlosInstance>(&any);
        if (!kom) {
          err << "convert: --to rows expects a " << kKomlosSchema << " file\n";
          return kExitUsage;
        }
        emitter.emit(instance_to_json(to_row_layout(*kom)));
      } else {
        const auto* inst = std::get_if<Instance>(&any);
        if (!inst || inst->model() != NormModel::KomlosUnit) {
          err << "convert: --to columns expects a KomlosUnit " << kInstanceSchema << " file\n";
          return kExitUsage;
        }
        emitter.emit(komlos_to_json(from_row_layout(*inst)));
      }
      return kExitOk;
    }

    if (*bench) {
      const Family family = family_from_string(family_name);
      const std::vector<Index> sizes = parse_sizes(sizes_text);
      std::ostringstream csv;
      csv << "n,m,median_max_abs,max_abs_over_sqrt_m_over_n,max_abs_over_sqrt_n_lnln_n\n";
      for (const Index n : sizes) {
        const Index m = std::max<Index>(1, static_cast<Index>(std::llround(m_ratio * static_cast<double>(n))));
        std::vector<double> values;
        for (std::uint32_t t = 0; t < seeds; ++t) {
          const std::uint64_t case_id = static_cast<std::uint64_t>(n) * 100003 + t;
          const std::uint64_t instance_seed = derive_seed(seed, 2 * case_id);
          SolverBudget budget = flags.budget;
          budget.seed = derive_seed(seed, 2 * case_id + 1);
          const Generated g = generate({family, n, m, instance_seed});
          if (const auto* kom = std::get_if<KomlosInstance>(&g)) {
            const Index need = mode == "full" ? kom->n() : support_threshold(kom->n());
            values.push_back(solve_komlos_partial(*kom, need, budget).inf_norm);
          } else {
            const Instance& inst = std::get<Instance>(g);
            if (mode == "full") {
              values.push_back(full_coloring(inst, budget).report.max_abs);
            } else {
              const Instance kashin =
                  inst.model() == NormModel::KashinSumSq ? inst : box_to_kashin(inst);
              values.push_back(solve(kashin, support_threshold(n), budget).report.max_abs);
            }
          }
        }
        const double med = median(values);
        const double nd = static_cast<double>(n);
        const double lnln = n >= 3 ? std::log(std::log(nd)) : std::nan("");
        csv << n << "," << m << "," << csv_real(med) << ","
            << csv_real(med / std::sqrt(static_cast<double>(m) / nd)) << ","
            << csv_real(med / (std::sqrt(nd) * lnln)) << "\n";
      }
      emitter.emit(csv.str());
      return kExitOk;
    }
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const RecursionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::SolverFailure ? kExitSolverFailure : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace disclab
