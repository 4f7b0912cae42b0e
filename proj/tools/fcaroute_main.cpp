// fcaroute: generate synthetic P2P workloads, run routing simulations, and
// emit CSV metrics. See README.md for the file formats.

#include <CLI11.hpp>

#include <optional>
#include <string>
#include <vector>

#include "fcaroute/cli.hpp"

namespace fr = fcaroute;

namespace {

struct ConfigFlags {
    std::optional<int> ttl, pmax;
    std::optional<std::size_t> warmup_queries, interval;
    std::optional<std::string> update_schedule;
    std::optional<std::string> strategy, intermediate_strategy, maintenance_mode;
    std::optional<std::string> update_count_mode;
    std::optional<std::uint64_t> seed;
    std::optional<double> sqpc_min_overlap;
    std::optional<bool> fallback_fill;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--ttl", f.ttl, "Search depth (hops)");
    cmd->add_option("--pmax", f.pmax, "Peers contacted per selection point");
    cmd->add_option("--warmup-queries", f.warmup_queries,
                    "Flooding-only queries before B0 is built");
    cmd->add_option("--update-schedule", f.update_schedule,
                    "Comma-separated post-warmup query counts triggering updates");
    cmd->add_option("--interval", f.interval, "Metrics bucket size in queries");
    cmd->add_option("--strategy", f.strategy, "flooding|lps_v1|lps_v2");
    cmd->add_option("--intermediate-strategy", f.intermediate_strategy,
                    "Strategy at non-origin peers (defaults to --strategy)");
    cmd->add_option("--maintenance-mode", f.maintenance_mode, "static|incremental");
    cmd->add_option("--update-count-mode", f.update_count_mode, "global|per_peer");
    cmd->add_option("--seed", f.seed, "Run seed (flag > FCAROUTE_SEED > config)");
    cmd->add_option("--sqpc-min-overlap", f.sqpc_min_overlap,
                    "Minimum extent overlap for SQPC membership");
    cmd->add_option("--fallback-fill", f.fallback_fill,
                    "Pad short selections with random neighbors");
}

// flag > env > config-file precedence; throws fcaroute::DataError on bad input
fr::SimConfig resolve_config(const std::string& config_path, const ConfigFlags& f) {
    fr::SimConfig cfg;
    if (!config_path.empty()) cfg = fr::load_sim_config(config_path);
    if (f.ttl) cfg.ttl = *f.ttl;
    if (f.pmax) cfg.pmax = *f.pmax;
    if (f.warmup_queries) cfg.warmup_queries = *f.warmup_queries;
    if (f.update_schedule)
        cfg.update_schedule = fr::detail::parse_size_list(*f.update_schedule);
    if (f.interval) cfg.interval = *f.interval;
    if (f.strategy) cfg.strategy = fr::parse_strategy(*f.strategy);
    if (f.intermediate_strategy) {
        cfg.intermediate_strategy = fr::parse_strategy(*f.intermediate_strategy);
        cfg.intermediate_strategy_set = true;
    }
    if (f.maintenance_mode)
        cfg.maintenance_mode = fr::parse_maintenance_mode(*f.maintenance_mode);
    if (f.update_count_mode) {
        if (*f.update_count_mode == "global")
            cfg.update_count_mode = fr::UpdateCountMode::Global;
        else if (*f.update_count_mode == "per_peer")
            cfg.update_count_mode = fr::UpdateCountMode::PerPeer;
        else
            throw fr::DataError("unknown update_count_mode '" + *f.update_count_mode + "'");
    }
    if (f.sqpc_min_overlap) cfg.sqpc_min_overlap = *f.sqpc_min_overlap;
    if (f.fallback_fill) cfg.fallback_fill = *f.fallback_fill;
    fr::cli::apply_seed_precedence(cfg, f.seed);
    fr::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Query-routing simulator for unstructured P2P overlays"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset directory");
    struct GenFlags {
        std::optional<std::size_t> peers, docs, queries, topics, terms_per_topic,
            doc_terms, query_terms, replication_factor, degree;
        std::optional<double> zipf, locality, bias;
        std::optional<std::uint64_t> seed;
    } gf;
    std::string gen_out, params_file;
    gen->add_option("--out", gen_out, "Output dataset directory")->required();
    gen->add_option("--params-file", params_file, "key=value GenParams file");
    gen->add_option("--peers", gf.peers, "Number of peers");
    gen->add_option("--docs", gf.docs, "Number of distinct documents");
    gen->add_option("--queries", gf.queries, "Number of queries");
    gen->add_option("--topics", gf.topics, "Number of topics");
    gen->add_option("--terms-per-topic", gf.terms_per_topic, "Terms per topic pool");
    gen->add_option("--doc-terms", gf.doc_terms, "Terms per document");
    gen->add_option("--query-terms", gf.query_terms, "Terms per query");
    gen->add_option("--replication-factor", gf.replication_factor,
                    "Hosting peers per document");
    gen->add_option("--degree", gf.degree, "Topology degree (random regular)");
    gen->add_option("--zipf-exponent", gf.zipf, "Topic/doc popularity skew");
    gen->add_option("--doc-topic-locality", gf.locality,
                    "P(document drawn from host's home topic)");
    gen->add_option("--replica-topic-bias", gf.bias,
                    "P(replica placed on a same-topic peer)");
    gen->add_option("--seed", gf.seed, "Generation seed");

    // --- run ---
    auto* run = app.add_subcommand("run", "Simulate one configuration");
    std::string run_config, run_dataset, run_out;
    bool run_progress = false;
    ConfigFlags run_flags;
    run->add_option("config", run_config, "key=value simulation config file")
        ->required();
    run->add_option("dataset", run_dataset, "dataset directory")->required();
    run->add_option("out", run_out, "output CSV path")->required();
    run->add_flag("--progress", run_progress, "print interval summaries to stderr");
    add_config_flags(run, run_flags);

    // --- compare ---
    auto* cmp = app.add_subcommand("compare", "Run a strategy x ttl grid");
    std::string cmp_config, cmp_dataset, cmp_out;
    std::vector<std::string> cmp_strategies{"flooding", "lps_v2"};
    std::vector<int> cmp_ttls{3, 4, 5};
    unsigned cmp_jobs = 0;
    bool cmp_progress = false;
    ConfigFlags cmp_flags;
    cmp->add_option("dataset", cmp_dataset, "dataset directory")->required();
    cmp->add_option("out", cmp_out, "output CSV path")->required();
    cmp->add_option("--config", cmp_config, "base key=value config file");
    cmp->add_option("--strategies", cmp_strategies, "strategies to compare")
        ->delimiter(',');
    cmp->add_option("--ttls", cmp_ttls, "ttl values to sweep")->delimiter(',');
    cmp->add_option("--jobs", cmp_jobs, "parallel grid cells (0 = hardware)");
    cmp->add_flag("--progress", cmp_progress, "print interval summaries to stderr");
    add_config_flags(cmp, cmp_flags);

    // --- kb-stats ---
    auto* kbs = app.add_subcommand(
        "kb-stats", "Per-round maintenance statistics, static vs incremental");
    std::string kbs_config, kbs_dataset, kbs_out;
    ConfigFlags kbs_flags;
    kbs->add_option("config", kbs_config, "key=value simulation config file")
        ->required();
    kbs->add_option("dataset", kbs_dataset, "dataset directory")->required();
    kbs->add_option("out", kbs_out, "output CSV path")->required();
    add_config_flags(kbs, kbs_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : fr::cli::kExitUsage;
    }

    try {
        if (gen->parsed()) {
            fr::GenParams p;
            if (!params_file.empty()) p = fr::cli::load_gen_params(params_file);
            if (gf.peers) p.n_peers = *gf.peers;
            if (gf.docs) p.n_docs = *gf.docs;
            if (gf.queries) p.n_queries = *gf.queries;
            if (gf.topics) p.n_topics = *gf.topics;
            if (gf.terms_per_topic) p.terms_per_topic = *gf.terms_per_topic;
            if (gf.doc_terms) p.doc_terms = *gf.doc_terms;
            if (gf.query_terms) p.query_terms = *gf.query_terms;
            if (gf.replication_factor) p.replication_factor = *gf.replication_factor;
            if (gf.degree) p.degree = *gf.degree;
            if (gf.zipf) p.zipf_exponent = *gf.zipf;
            if (gf.locality) p.doc_topic_locality = *gf.locality;
            if (gf.bias) p.replica_topic_bias = *gf.bias;
            if (gf.seed) p.seed = *gf.seed;
            return fr::cli::cmd_gen(p, gen_out);
        }
        if (run->parsed()) {
            fr::SimConfig cfg = resolve_config(run_config, run_flags);
            return fr::cli::cmd_run(run_dataset, cfg, run_out, run_progress);
        }
        if (cmp->parsed()) {
            fr::SimConfig cfg = resolve_config(cmp_config, cmp_flags);
            std::vector<fr::Strategy> strategies;
            for (const auto& s : cmp_strategies) strategies.push_back(fr::parse_strategy(s));
            return fr::cli::cmd_compare(cmp_dataset, cfg, strategies, cmp_ttls, cmp_out,
                                        cmp_jobs, cmp_progress);
        }
        if (kbs->parsed()) {
            fr::SimConfig cfg = resolve_config(kbs_config, kbs_flags);
            return fr::cli::cmd_kb_stats(kbs_dataset, cfg, kbs_out);
        }
    } catch (const fr::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fr::cli::kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return fr::cli::kExitInternal;
    }
    return fr::cli::kExitUsage;
}
