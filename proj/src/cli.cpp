#include "noderank/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "noderank/centrality.hpp"
#include "noderank/error.hpp"
#include "noderank/evalcorr.hpp"
#include "noderank/explorer.hpp"
#include "noderank/ingest.hpp"
#include "noderank/rerank.hpp"

namespace noderank::cli {

namespace {

struct GraphInput {
  std::string path;
  std::string format = "tsv";
  bool gzip = false;
  bool drop_self_loops = false;
};

struct Globals {
  std::size_t threads = 1;
  bool quiet = false;
};

void add_graph_input(CLI::App* cmd, GraphInput& in) {
  cmd->add_option("input", in.path, "Graph file")->required();
  cmd->add_option("--format", in.format, "Graph file format")
      ->check(CLI::IsMember({"tsv", "gml"}))
      ->capture_default_str();
  cmd->add_flag("--gzip", in.gzip, "Require gzip-compressed input (detected automatically otherwise)");
  cmd->add_flag("--drop-self-loops", in.drop_self_loops, "Discard self-loops while building");
}

SparseGraph load_graph(const GraphInput& in) {
  GraphOptions options;
  options.drop_self_loops = in.drop_self_loops;
  if (in.format == "gml") return read_gml(in.path, in.gzip, options);
  return read_edge_tsv(in.path, options);
}

// Validates a number in (lo, hi) before conversion.
CLI::Validator open_interval(const std::string& name, double lo, double hi) {
  std::ostringstream desc;
  desc << lo << "<" << name << "<" << hi;
  return CLI::Validator(
      [name, lo, hi](std::string& text) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(text, v)) return name + " must be a number";
        if (!(v > lo && v < hi)) {
          std::ostringstream msg;
          msg << name << " must satisfy " << lo << " < " << name << " < " << hi << " (got " << text << ")";
          return msg.str();
        }
        return {};
      },
      desc.str());
}

CLI::Validator lower_bound(const std::string& name, double lo, bool strict) {
  return CLI::Validator(
      [name, lo, strict](std::string& text) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(text, v)) return name + " must be a number";
        if (strict ? !(v > lo) : !(v >= lo)) {
          std::ostringstream msg;
          msg << name << " must satisfy " << name << (strict ? " > " : " >= ") << lo << " (got " << text << ")";
          return msg.str();
        }
        return {};
      },
      std::string(strict ? ">" : ">=") + std::to_string(lo));
}

// Writes through a temporary buffer so a failed run leaves no partial file.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ostringstream buffer;
  write(buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open '" + path + "' for writing");
  file << buffer.str();
  if (!file) throw DataError("write error on '" + path + "'");
}

std::string report_line(std::string_view metric, const ConvergenceReport& r) {
  std::ostringstream s;
  s << "metric=" << metric << " iterations=" << r.iterations_used
    << " residual=" << format_score(r.final_residual) << " converged=" << (r.converged ? "true" : "false");
  return s.str();
}

std::unordered_map<std::string, double> as_map(const LabeledScores& scores) {
  std::unordered_map<std::string, double> m;
  m.reserve(scores.labels.size());
  for (std::size_t i = 0; i < scores.labels.size(); ++i) {
    if (!m.emplace(scores.labels[i], scores.values[i]).second) {
      throw DataError("duplicate label '" + scores.labels[i] + "' in score file");
    }
  }
  return m;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse link-analysis ranking: PageRank, Fatigued PageRank, HITS and evaluation"};
  app.name("noderank");
  app.set_version_flag("--version", std::string(NODERANK_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--threads", globals.threads, "Worker threads for block-parallel kernels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("-q,--quiet", globals.quiet, "Only print warnings and errors");

  std::function<void()> action;

  // ingest
  GraphInput ingest_in;
  std::string clickstream;
  std::string link_type = "link";
  std::string ingest_out = "-";
  std::string ingest_out_format = "tsv";
  bool ingest_out_gzip = false;
  std::string visits_out;
  auto* ingest = app.add_subcommand("ingest", "Read a graph, optionally join clickstream counts, re-emit it");
  add_graph_input(ingest, ingest_in);
  ingest->add_option("--clickstream", clickstream, "Clickstream TSV (prev, curr, type, n) to join as edge weights");
  ingest->add_option("--link-type-filter", link_type, "Clickstream row type to keep; empty keeps all")
      ->capture_default_str();
  ingest->add_option("--out", ingest_out, "Output graph file ('-' for stdout)")->capture_default_str();
  ingest->add_option("--out-format", ingest_out_format, "Output graph format")
      ->check(CLI::IsMember({"tsv", "gml"}))
      ->capture_default_str();
  ingest->add_flag("--out-gzip", ingest_out_gzip, "Gzip the GML output (requires --out FILE)");
  ingest->add_option("--visits-out", visits_out, "Write per-node visits (sum of incoming weights) as TSV");
  ingest->callback([&] {
    action = [&] {
      SparseGraph g = load_graph(ingest_in);
      if (!clickstream.empty()) {
        ClickstreamOptions options;
        options.link_type_filter = link_type;
        JoinResult joined = join_clickstream(g, clickstream, options);
        if (!globals.quiet) {
          err << "clickstream: matched=" << joined.matched << " unmatched=" << joined.unmatched
              << " filtered=" << joined.filtered_type << '\n';
        }
        g = std::move(joined.graph);
      }
      if (!globals.quiet) err << "graph: nodes=" << g.num_nodes() << " edges=" << g.num_edges() << '\n';
      if (ingest_out_format == "gml" && ingest_out_gzip) {
        if (ingest_out == "-") throw std::invalid_argument("--out-gzip needs --out FILE");
        write_gml(ingest_out, g, true);
      } else {
        emit(ingest_out, out, [&](std::ostream& s) {
          if (ingest_out_format == "gml") write_gml(s, g);
          else write_edge_tsv(s, g);
        });
      }
      if (!visits_out.empty()) {
        const ScoreVector v = visits(g);
        emit(visits_out, out, [&](std::ostream& s) { write_score_tsv(s, g, v.values); });
      }
    };
  });

  // rank
  GraphInput rank_in;
  RankingConfig cfg;
  std::string metric = "pagerank";
  std::string sink_mode = "uniform";
  std::string smoothing = "ratio";
  bool no_normalize = false;
  std::string rank_out = "-";
  auto* rank = app.add_subcommand("rank", "Score every node with one metric");
  add_graph_input(rank, rank_in);
  rank->add_option("--metric", metric, "Ranking metric")
      ->check(CLI::IsMember({"indegree", "pagerank", "reverse-pagerank", "fatigued-pagerank",
                             "hits-authority", "hits-hub"}))
      ->capture_default_str();
  rank->add_option("--alpha", cfg.alpha, "Damping factor")->check(open_interval("alpha", 0, 1))->capture_default_str();
  rank->add_option("--beta", cfg.beta, "Fatigue smoothing constant")
      ->check(lower_bound("beta", 0, false))
      ->capture_default_str();
  rank->add_option("--epsilon", cfg.epsilon, "Convergence tolerance on the L2 residual")
      ->check(lower_bound("epsilon", 0, true))
      ->capture_default_str();
  rank->add_option("--max-iter", cfg.max_iterations, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rank->add_option("--sink-mode", sink_mode, "Sink handling")
      ->check(CLI::IsMember({"uniform", "paper-literal"}))
      ->capture_default_str();
  rank->add_option("--fatigue-smoothing", smoothing, "Fatigue vector smoothing")
      ->check(CLI::IsMember({"ratio", "offset"}))
      ->capture_default_str();
  rank->add_flag("--no-normalize", no_normalize, "Skip per-step L1 normalization");
  rank->add_option("--blocks", cfg.schedule.blocks, "Row blocks per power-iteration step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rank->add_option("--out", rank_out, "Output TSV ('-' for stdout)")->capture_default_str();
  rank->callback([&] {
    cfg.sink_mode = sink_mode == "uniform" ? SinkMode::UniformTeleport : SinkMode::PaperLiteral;
    cfg.fatigue_smoothing = smoothing == "ratio" ? FatigueSmoothing::Ratio : FatigueSmoothing::Offset;
    cfg.normalize_each_step = !no_normalize;
    cfg.schedule.threads = globals.threads;
    cfg.validate();
    action = [&] {
      const SparseGraph g = load_graph(rank_in);
      std::vector<double> scores;
      if (metric == "indegree") {
        scores = indegree_score(g).values;
      } else if (metric == "hits-authority" || metric == "hits-hub") {
        HitsResult h = hits(g, cfg.epsilon, cfg.max_iterations);
        if (!globals.quiet) err << report_line(metric, h.report) << '\n';
        scores = metric == "hits-authority" ? std::move(h.authority.values) : std::move(h.hub.values);
      } else {
        RankingResult r = metric == "pagerank"           ? pagerank(g, cfg)
                          : metric == "reverse-pagerank" ? reverse_pagerank(g, cfg)
                                                         : fatigued_pagerank(g, cfg);
        if (!globals.quiet) err << report_line(metric, r.report) << '\n';
        if (!r.report.converged) err << "warning: " << metric << " did not converge\n";
        scores = std::move(r.scores.values);
      }
      emit(rank_out, out, [&](std::ostream& s) { write_score_tsv(s, g, scores); });
    };
  });

  // simulate
  GraphInput sim_in;
  ExplorerConfig sim;
  std::string mode = "surfer";
  std::size_t walks = 1;
  std::string sim_out = "-";
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo surfer or explorer visit frequencies");
  add_graph_input(simulate, sim_in);
  simulate->add_option("--mode", mode, "Walker model")->check(CLI::IsMember({"surfer", "explorer"}))->capture_default_str();
  simulate->add_option("--steps", sim.steps, "Steps per walk")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--span", sim.fatigue_span, "Explorer memory: distinct recent nodes avoided")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--seed", sim.rng_seed, "Seed for mt19937_64")->capture_default_str();
  simulate->add_option("--alpha", sim.alpha, "Probability of following a link")
      ->check(open_interval("alpha", 0, 1))
      ->capture_default_str();
  simulate->add_option("--walks", walks, "Independent walks (seeds seed, seed+1, ...)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--out", sim_out, "Output TSV ('-' for stdout)")->capture_default_str();
  simulate->callback([&] {
    sim.validate();
    action = [&] {
      const SparseGraph g = load_graph(sim_in);
      const WalkMode m = mode == "surfer" ? WalkMode::Surfer : WalkMode::Explorer;
      const ScoreVector freq = simulate_walks(g, sim, m, walks, globals.threads);
      emit(sim_out, out, [&](std::ostream& s) { write_score_tsv(s, g, freq.values); });
    };
  });

  // correlate
  std::vector<std::string> score_files;
  std::string visits_file;
  std::vector<std::size_t> cuts(kDefaultCuts.begin(), kDefaultCuts.end());
  std::string corr_out = "-";
  auto* correlate = app.add_subcommand("correlate", "Pearson/Spearman of score files against visits, per top-k cut");
  correlate->add_option("--scores", score_files, "Score TSV (repeatable; one metric per file)")->required();
  correlate->add_option("--visits", visits_file, "Visits TSV")->required();
  correlate->add_option("--cuts", cuts, "Ascending cut sizes")->delimiter(',')->capture_default_str();
  correlate->add_option("--out", corr_out, "Output CSV ('-' for stdout)")->capture_default_str();
  correlate->callback([&] {
    if (!std::is_sorted(cuts.begin(), cuts.end())) throw CLI::ValidationError("--cuts", "cuts must be ascending");
    action = [&] {
      const auto visit_map = as_map(read_score_tsv(visits_file));
      std::vector<CorrelationReport> reports;
      for (const auto& file : score_files) {
        const LabeledScores scores = read_score_tsv(file);
        std::vector<double> x;
        std::vector<double> y;
        std::size_t missing = 0;
        for (std::size_t i = 0; i < scores.labels.size(); ++i) {
          const auto it = visit_map.find(scores.labels[i]);
          if (it == visit_map.end()) {
            ++missing;
            continue;
          }
          x.push_back(scores.values[i]);
          y.push_back(it->second);
        }
        if (missing > 0) err << "warning: " << file << ": " << missing << " labels without visits skipped\n";
        reports.push_back(
            correlation_at_cuts(x, y, cuts, std::filesystem::path(file).stem().string()));
        for (const auto& w : reports.back().warnings) err << "warning: " << w << '\n';
      }
      emit(corr_out, out, [&](std::ostream& s) { write_correlation_csv(s, reports); });
    };
  });

  // rerank
  std::string run_file;
  std::string rerank_scores;
  std::string transform_name = "sigm";
  RerankOptions rerank_opts;
  std::string rerank_out = "-";
  auto* rerank = app.add_subcommand("rerank", "Add a transformed graph score to a baseline TREC run");
  rerank->add_option("--run", run_file, "Baseline run file")->required();
  rerank->add_option("--scores", rerank_scores, "Graph score TSV keyed by document id")->required();
  rerank->add_option("--transform", transform_name, "Score transform")
      ->check(CLI::IsMember({"sigm", "log", "satu"}))
      ->capture_default_str();
  rerank->add_option("--w", rerank_opts.transform.w, "Transform weight")->check(lower_bound("w", 0, true))->capture_default_str();
  rerank->add_option("--k", rerank_opts.transform.k, "Transform constant")->check(lower_bound("k", 0, true))->capture_default_str();
  rerank->add_option("--a", rerank_opts.transform.a, "sigm exponent")->check(lower_bound("a", 0, true))->capture_default_str();
  rerank->add_option("--scale", rerank_opts.scale, "Multiplier applied to graph scores before the transform")
      ->check(lower_bound("scale", 0, false))
      ->capture_default_str();
  rerank->add_option("--tag-suffix", rerank_opts.tag_suffix, "Appended to the run tag (default +<transform>)");
  rerank->add_option("--out", rerank_out, "Output run ('-' for stdout)")->capture_default_str();
  rerank->callback([&] {
    rerank_opts.transform.kind = transform_name == "sigm"  ? TransformKind::Sigm
                                 : transform_name == "log" ? TransformKind::Log
                                                           : TransformKind::Satu;
    rerank_opts.transform.validate();
    action = [&] {
      const RunFile baseline = read_run(run_file);
      const auto graph_scores = as_map(read_score_tsv(rerank_scores));
      const RunFile reranked = rerank_run(baseline, graph_scores, rerank_opts);
      emit(rerank_out, out, [&](std::ostream& s) { write_run(s, reranked); });
    };
  });

  // eval
  std::string eval_run;
  std::string qrels_file;
  std::string eval_out = "-";
  auto* eval = app.add_subcommand("eval", "MAP, GMAP, NDCG@10 and P@10 of a run");
  eval->add_option("--run", eval_run, "Run file")->required();
  eval->add_option("--qrels", qrels_file, "Relevance judgments")->required();
  eval->add_option("--out", eval_out, "Output CSV ('-' for stdout)")->capture_default_str();
  eval->callback([&] {
    action = [&] {
      const EffectivenessReport report = evaluate_run(read_run(eval_run), read_qrels(qrels_file));
      for (const auto& w : report.warnings) err << "warning: " << w << '\n';
      emit(eval_out, out, [&](std::ostream& s) { write_effectiveness_csv(s, report); });
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (action) action();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace noderank::cli
