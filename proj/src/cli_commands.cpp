#include "mimosa/cli_commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "mimosa/config.hpp"
#include "mimosa/corpus.hpp"
#include "mimosa/metrics.hpp"
#include "mimosa/models.hpp"
#include "mimosa/oracle.hpp"
#include "mimosa/smiles.hpp"

namespace mimosa {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct LoadedProfile {
  RunProfile rp;
  std::uint64_t seed;
};

LoadedProfile load_for_cli(const CliOptions& opt) {
  if (opt.profile_path.empty()) throw ConfigError("missing --profile");
  LoadedProfile lp{load_run_profile(opt.profile_path), 0};
  lp.seed = opt.seed.value_or(lp.rp.run.seed);
  lp.rp.run.seed = lp.seed;
  lp.rp.train.seed = lp.seed;
  return lp;
}

std::uint64_t file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return 0;
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return fnv1a64(data);
}

void write_manifest(const CliOptions& opt, const LoadedProfile& lp,
                    const std::string& command) {
  fs::create_directories(opt.out_dir);
  std::ofstream out(opt.out_dir + "/manifest.txt");
  out << "command\t" << command << "\n";
  out << "version\t" << kMimosaVersion << "\n";
  out << "profile\t" << opt.profile_path << "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(lp.rp.profile.content_hash()));
  out << "profile_hash\t" << buf << "\n";
  out << "seed\t" << lp.seed << "\n";
  if (!opt.inputs_path.empty()) {
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(file_hash(opt.inputs_path)));
    out << "inputs\t" << opt.inputs_path << "\n";
    out << "inputs_hash\t" << buf << "\n";
  }
}

int config_failure(const std::exception& e) {
  std::cerr << "configuration error: " << e.what() << "\n";
  return 2;
}

}  // namespace

int cmd_pretrain(const CliOptions& opt) {
  LoadedProfile lp;
  try {
    lp = load_for_cli(opt);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    std::vector<MolGraph> corpus;
    try {
      corpus = load_profile_corpus(lp.rp);
    } catch (const ConfigError& e) {
      return config_failure(e);
    }
    std::cout << "corpus: " << corpus.size() << " molecules\n";
    const auto t0 = Clock::now();
    PretrainResult result = pretrain(corpus, lp.rp.gnn, lp.rp.train);
    fs::create_directories(opt.out_dir);
    save_checkpoint(opt.out_dir + "/mgnn.ckpt", result.mgnn);
    save_checkpoint(opt.out_dir + "/bgnn.ckpt", result.bgnn);
    {
      std::ofstream curve(opt.out_dir + "/training_curve.tsv");
      curve << "#epoch\tmgnn_loss\tbgnn_loss\n";
      for (std::size_t e = 0; e < result.mgnn_epoch_loss.size(); ++e)
        curve << e << '\t' << result.mgnn_epoch_loss[e] << '\t'
              << result.bgnn_epoch_loss[e] << '\n';
    }
    write_manifest(opt, lp, "pretrain");
    std::cout << "mGNN loss: " << result.mgnn_epoch_loss.front() << " -> "
              << result.mgnn_epoch_loss.back() << "\n";
    std::cout << "bGNN loss: " << result.bgnn_epoch_loss.front() << " -> "
              << result.bgnn_epoch_loss.back() << "\n";
    std::cout << "checkpoints written to " << opt.out_dir << " ("
              << seconds_since(t0) << " s)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "pretrain failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_optimize(const CliOptions& opt) {
  LoadedProfile lp;
  try {
    lp = load_for_cli(opt);
    if (opt.inputs_path.empty()) throw ConfigError("missing --inputs");
    if (lp.rp.checkpoint_mgnn.empty() || lp.rp.checkpoint_bgnn.empty())
      throw ConfigError("profile must set [paths] checkpoint_mgnn/checkpoint_bgnn");
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    GnnParams mgnn, bgnn;
    try {
      mgnn = load_checkpoint(lp.rp.profile.resolve(lp.rp.checkpoint_mgnn));
      bgnn = load_checkpoint(lp.rp.profile.resolve(lp.rp.checkpoint_bgnn));
    } catch (const std::runtime_error& e) {
      return config_failure(e);
    }
    GnnModels models(std::move(mgnn), std::move(bgnn));

    std::vector<CorpusRecord> inputs = read_corpus_file(opt.inputs_path);
    fs::create_directories(opt.out_dir);
    std::ofstream trace_out(opt.out_dir + "/trace.txt");
    std::vector<ResultRow> rows;

    for (std::size_t idx = 0; idx < inputs.size(); ++idx) {
      const std::string& smi = inputs[idx].smiles;
      MolGraph x;
      try {
        x = parse_smiles(smi, *lp.rp.vocab);
      } catch (const ParseError& e) {
        ResultRow r;
        r.input_smiles = smi;
        r.error = true;
        r.error_message = e.what();
        rows.push_back(std::move(r));
        continue;
      }
      TargetDistConfig target = make_profile_target(lp.rp, x);
      RunConfig run = lp.rp.run;
      run.seed = derive_seed(lp.seed, 0x696e7075, idx);
      MimosaResult res = run_mimosa(run, lp.rp.kernel, target, models);

      for (std::size_t it = 0; it < res.trace.iterations.size(); ++it) {
        for (const PoolRecord& rec : res.trace.iterations[it].pool) {
          std::string rec_smiles;
          try {
            rec_smiles = write_smiles(rec.graph, *lp.rp.vocab);
          } catch (const std::exception&) {
            rec_smiles = rec.key;
          }
          trace_out << idx << '\t' << it << '\t' << op_name(rec.op) << '\t'
                    << rec_smiles << '\t' << rec.log_density << '\t'
                    << rec.log_weight << '\t' << (rec.accepted ? 1 : 0) << '\n';
        }
      }

      // T_max = 0 (or an empty run) echoes the input
      std::vector<MolGraph> outputs = res.phi;
      if (outputs.empty()) outputs.push_back(x);

      std::size_t best = 0;
      double best_density = kLogZero;
      std::vector<ResultRow> this_input;
      for (std::size_t oi = 0; oi < outputs.size(); ++oi) {
        const MolGraph& y = outputs[oi];
        ResultRow r;
        r.input_smiles = smi;
        try {
          r.output_smiles = write_smiles(y, *lp.rp.vocab);
        } catch (const std::exception&) {
          r.output_smiles = ordering_key(y);
        }
        r.similarity = tanimoto(target.input_fp,
                                fingerprint(y, target.fp_radius, target.fp_width));
        for (std::size_t si = 0; si < target.scorers.size(); ++si)
          r.deltas.push_back(target.scorers[si].score(y) -
                             target.input_scores[si]);
        r.log_density = log_target_density(target, y);
        if (r.log_density > best_density) {
          best_density = r.log_density;
          best = oi;
        }
        this_input.push_back(std::move(r));
      }
      this_input[best].best = true;
      for (auto& r : this_input) rows.push_back(std::move(r));
    }

    write_results_file(opt.out_dir + "/results.tsv", rows, lp.rp.scorer_names);
    write_manifest(opt, lp, "optimize");
    std::cout << "wrote " << rows.size() << " result rows for " << inputs.size()
              << " inputs to " << opt.out_dir << "/results.tsv\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "optimize failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const CliOptions& opt) {
  LoadedProfile lp;
  try {
    lp = load_for_cli(opt);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    const RunProfile& rp = lp.rp;
    auto vocab = std::make_shared<SubstructureVocab>(
        rp.vocab->subset(rp.oracle_vocab_labels));
    MolGraph x = parse_smiles(rp.oracle_input, *vocab);
    // similarity-only target isolates the kernel algebra
    TargetDistConfig target =
        make_target(vocab, x, {rp.eta.empty() ? 1.0 : rp.eta[0]}, {});
    UniformModels models(vocab->size());
    KernelConfig kernel = rp.kernel;
    kernel.mode = SamplerMode::MhChain;
    kernel.proposal.max_nodes = rp.oracle_max_nodes;

    nlohmann::json rep;
    std::vector<std::string> failures;
    rep["convention"] = kernel.convention == WeightConvention::TextbookMh
                            ? "textbook_mh"
                            : "paper";
    rep["gamma"] = {kernel.gamma_replace, kernel.gamma_add, kernel.gamma_delete};

    auto t0 = Clock::now();
    StateSpace space =
        enumerate_states(vocab, rp.oracle_max_nodes, kernel, target, models);
    rep["space_size"] = space.size();

    TransitionMatrix T = build_transition_matrix(space, kernel, target, models);
    rep["row_sum_error"] = T.max_row_sum_error();

    std::vector<double> p = target_probabilities(space, target);
    std::vector<double> pi = stationary_distribution(T);
    double linf = 0.0;
    for (int i = 0; i < space.size(); ++i)
      linf = std::max(linf, std::abs(pi[i] - p[i]));
    rep["stationary_linf"] = linf;
    if (linf > rp.oracle_stationary_tol) failures.push_back("stationarity");

    const double balance = detailed_balance_check(T, p);
    rep["balance_violation"] = balance;
    if (balance > rp.oracle_balance_tol) failures.push_back("detailed_balance");

    ReachabilityReport reach = reachability(T);
    rep["irreducible"] = reach.irreducible;
    rep["max_path_length"] = reach.max_distance;
    rep["path_length_bound"] = 2 * rp.oracle_max_nodes;
    if (!reach.irreducible || reach.max_distance > 2 * rp.oracle_max_nodes)
      failures.push_back("irreducibility");
    rep["matrix_seconds"] = seconds_since(t0);

    t0 = Clock::now();
    MhChain chain(kernel, target, models, lp.seed);
    std::vector<long> visits = chain_visit_counts(chain, space, rp.oracle_chain_steps);
    const double tv = empirical_vs_exact(visits, p);
    rep["chain_steps"] = rp.oracle_chain_steps;
    rep["tv_distance"] = tv;
    rep["chain_seconds"] = seconds_since(t0);
    if (tv > rp.oracle_tv_tol) failures.push_back("ergodic_convergence");

    rep["passed"] = failures.empty();
    rep["failures"] = failures;

    fs::create_directories(opt.out_dir);
    std::ofstream(opt.out_dir + "/verify_report.json") << rep.dump(2) << "\n";
    write_manifest(opt, lp, "verify");

    std::cout << "state space: " << space.size() << " states\n";
    std::cout << "row sum error: " << T.max_row_sum_error() << "\n";
    std::cout << "stationary Linf vs target: " << linf << " (tol "
              << rp.oracle_stationary_tol << ")\n";
    std::cout << "detailed balance violation: " << balance << " (tol "
              << rp.oracle_balance_tol << ")\n";
    std::cout << "irreducible: " << (reach.irreducible ? "yes" : "no")
              << ", max path " << reach.max_distance << " (bound "
              << 2 * rp.oracle_max_nodes << ")\n";
    std::cout << "chain TV after " << rp.oracle_chain_steps << " steps: " << tv
              << " (tol " << rp.oracle_tv_tol << ")\n";
    if (failures.empty()) {
      std::cout << "verify: PASS\n";
      return 0;
    }
    std::cout << "verify: FAIL:";
    for (const auto& f : failures) std::cout << ' ' << f;
    std::cout << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "verify failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_metrics(const CliOptions& opt) {
  LoadedProfile lp;
  try {
    lp = load_for_cli(opt);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    const std::string results_path = opt.results_path.empty()
                                         ? opt.out_dir + "/results.tsv"
                                         : opt.results_path;
    std::vector<ResultRow> rows = read_results_file(results_path);
    MetricReport report = compute_metrics(rows, lp.rp.thresholds);
    fs::create_directories(opt.out_dir);
    {
      std::ofstream out(opt.out_dir + "/metrics.tsv");
      out << "#input\tsimilarity";
      for (const auto& n : lp.rp.scorer_names) out << "\tdelta_" << n;
      out << "\tsuccess\n";
      for (const auto& row : report.rows) {
        out << row.input_smiles << '\t' << row.similarity;
        for (double d : row.deltas) out << '\t' << d;
        out << '\t' << (row.success ? 1 : 0) << '\n';
      }
    }
    write_manifest(opt, lp, "metrics");
    std::cout << format_report(report, lp.rp.scorer_names);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "metrics failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mimosa
