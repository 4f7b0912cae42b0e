#pragma once
// Command implementations behind the fcaroute binary. Kept as library
// functions so the test suites can drive them directly; main() only parses
// flags. Exit codes: 0 ok, 1 usage, 2 data/config error, 3 internal.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fcaroute/csv.hpp"
#include "fcaroute/dataset.hpp"
#include "fcaroute/simulator.hpp"

namespace fcaroute::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return kExitOk;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

// Seed precedence: explicit flag > FCAROUTE_SEED > config file value.
inline void apply_seed_precedence(SimConfig& cfg, std::optional<std::uint64_t> flag_seed) {
    if (flag_seed) {
        cfg.seed = *flag_seed;
        return;
    }
    if (const char* env = std::getenv("FCAROUTE_SEED")) {
        try {
            std::size_t used = 0;
            cfg.seed = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw DataError(std::string("FCAROUTE_SEED is not an integer: '") + env + "'");
        }
    }
}

inline GenParams load_gen_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    GenParams p;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(path, lineno, "expected key=value");
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        try {
            if (key == "n_peers") p.n_peers = std::stoull(value);
            else if (key == "n_docs") p.n_docs = std::stoull(value);
            else if (key == "n_queries") p.n_queries = std::stoull(value);
            else if (key == "n_topics") p.n_topics = std::stoull(value);
            else if (key == "terms_per_topic") p.terms_per_topic = std::stoull(value);
            else if (key == "doc_terms") p.doc_terms = std::stoull(value);
            else if (key == "query_terms") p.query_terms = std::stoull(value);
            else if (key == "replication_factor") p.replication_factor = std::stoull(value);
            else if (key == "degree") p.degree = std::stoull(value);
            else if (key == "zipf_exponent") p.zipf_exponent = std::stod(value);
            else if (key == "doc_topic_locality") p.doc_topic_locality = std::stod(value);
            else if (key == "replica_topic_bias") p.replica_topic_bias = std::stod(value);
            else if (key == "seed") p.seed = std::stoull(value);
            else throw ParseError(path, lineno, "unknown gen param '" + key + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(path, lineno, "bad value for " + key + ": '" + value + "'");
        }
    }
    return p;
}

inline int cmd_gen(const GenParams& params, const std::string& out_dir) {
    return guarded([&] {
        Dataset ds = generate(params);
        save_dataset(ds, out_dir);
    });
}

namespace detail {

inline const char* kMetricsHeader =
    "interval,strategy,ttl,maintenance_mode,mean_recall,mean_messages,"
    "kb_concepts_mean,maintenance_work,queries_answered\n";

inline void write_metric_rows(std::ostream& out, const SimConfig& cfg,
                              const std::vector<IntervalMetrics>& metrics) {
    for (const auto& m : metrics) {
        out << m.interval_index << ',' << to_string(cfg.strategy) << ',' << cfg.ttl
            << ',' << to_string(cfg.maintenance_mode) << ','
            << format_double(m.mean_recall) << ',' << format_double(m.mean_messages)
            << ',' << format_double(m.kb_concepts_mean) << ',' << m.maintenance_work
            << ',' << m.queries_answered << '\n';
    }
}

inline void print_progress(const SimConfig& cfg,
                           const std::vector<IntervalMetrics>& metrics) {
    for (const auto& m : metrics)
        std::cerr << "[" << to_string(cfg.strategy) << " ttl=" << cfg.ttl
                  << " interval=" << m.interval_index
                  << "] recall=" << format_double(m.mean_recall, 4)
                  << " messages=" << format_double(m.mean_messages, 2)
                  << " kb=" << format_double(m.kb_concepts_mean, 1) << "\n";
}

struct Summary {
    double mean_recall = 0.0;
    double mean_messages = 0.0;
    std::uint64_t total_work = 0;
};

inline Summary summarize(const std::vector<IntervalMetrics>& metrics) {
    Summary s;
    double recall_w = 0.0, msg_w = 0.0, recall_n = 0.0, msg_n = 0.0;
    for (const auto& m : metrics) {
        recall_w += m.mean_recall * static_cast<double>(m.recall_samples);
        recall_n += static_cast<double>(m.recall_samples);
        msg_w += m.mean_messages * static_cast<double>(m.queries_total);
        msg_n += static_cast<double>(m.queries_total);
        s.total_work += m.maintenance_work;
    }
    s.mean_recall = recall_n > 0 ? recall_w / recall_n : 0.0;
    s.mean_messages = msg_n > 0 ? msg_w / msg_n : 0.0;
    return s;
}

inline void warn_unusual_ttl(int ttl) {
    if (ttl < 2 || ttl > 5)
        std::cerr << "warning: ttl " << ttl
                  << " lies outside the usual 2-5 sweep; accepting it anyway\n";
}

}  // namespace detail

inline int cmd_run(const std::string& dataset_dir, const SimConfig& cfg,
                   const std::string& out_csv, bool progress = false) {
    return guarded([&] {
        validate_config(cfg);
        Dataset ds = load_dataset(dataset_dir);
        Simulator sim(ds, cfg);
        const auto& metrics = sim.run();
        std::ofstream out(out_csv, std::ios::binary);
        if (!out) throw DataError("cannot write " + out_csv);
        out << detail::kMetricsHeader;
        detail::write_metric_rows(out, cfg, metrics);
        if (progress) detail::print_progress(cfg, metrics);
    });
}

// Full {strategy} x {ttl} grid on one dataset and seed. Cells may run
// concurrently; rows are sorted before emission so the bytes never depend on
// scheduling.
inline int cmd_compare(const std::string& dataset_dir, const SimConfig& base,
                       std::vector<Strategy> strategies, std::vector<int> ttls,
                       const std::string& out_csv, unsigned jobs = 0,
                       bool progress = false) {
    if (strategies.empty()) {
        std::cerr << "error: compare needs at least one strategy\n";
        return kExitUsage;
    }
    if (ttls.empty()) {
        std::cerr << "error: compare needs at least one ttl\n";
        return kExitUsage;
    }
    return guarded([&] {
        validate_config(base);
        for (int t : ttls) detail::warn_unusual_ttl(t);
        Dataset ds = load_dataset(dataset_dir);

        struct Cell {
            SimConfig cfg;
            std::vector<IntervalMetrics> metrics;
        };
        std::vector<Cell> cells;
        for (Strategy s : strategies)
            for (int t : ttls) {
                SimConfig cfg = base;
                cfg.strategy = s;
                cfg.ttl = t;
                cells.push_back({cfg, {}});
            }

        if (jobs == 0) jobs = std::thread::hardware_concurrency();
        if (jobs <= 1) {
            for (auto& c : cells) {
                Simulator sim(ds, c.cfg);
                c.metrics = sim.run();
            }
        } else {
            std::vector<std::future<std::vector<IntervalMetrics>>> futures;
            futures.reserve(cells.size());
            // bounded fan-out: at most `jobs` simulators alive at once
            for (std::size_t i = 0; i < cells.size(); i += jobs) {
                std::size_t hi = std::min(cells.size(), i + jobs);
                for (std::size_t k = i; k < hi; ++k)
                    futures.push_back(std::async(std::launch::async, [&ds, &cells, k] {
                        Simulator sim(ds, cells[k].cfg);
                        return std::vector<IntervalMetrics>(sim.run());
                    }));
                for (std::size_t k = i; k < hi; ++k) cells[k].metrics = futures[k].get();
            }
        }

        std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
            std::string an = to_string(a.cfg.strategy), bn = to_string(b.cfg.strategy);
            if (an != bn) return an < bn;
            return a.cfg.ttl < b.cfg.ttl;
        });

        std::ofstream out(out_csv, std::ios::binary);
        if (!out) throw DataError("cannot write " + out_csv);
        out << detail::kMetricsHeader;
        for (const auto& c : cells) {
            detail::write_metric_rows(out, c.cfg, c.metrics);
            if (progress) detail::print_progress(c.cfg, c.metrics);
        }
        out << "# summary\n";
        out << "strategy,ttl,maintenance_mode,mean_recall,mean_messages,"
               "total_maintenance_work\n";
        for (const auto& c : cells) {
            auto s = detail::summarize(c.metrics);
            out << to_string(c.cfg.strategy) << ',' << c.cfg.ttl << ','
                << to_string(c.cfg.maintenance_mode) << ','
                << format_double(s.mean_recall) << ','
                << format_double(s.mean_messages) << ',' << s.total_work << '\n';
        }
    });
}

// Per-maintenance-round statistics for both maintenance modes on the same
// dataset, seed, and schedule.
inline int cmd_kb_stats(const std::string& dataset_dir, const SimConfig& base,
                        const std::string& out_csv) {
    return guarded([&] {
        validate_config(base);
        Dataset ds = load_dataset(dataset_dir);
        std::ofstream out(out_csv, std::ios::binary);
        if (!out) throw DataError("cannot write " + out_csv);
        out << "round,mode,mean_e1_concepts,mean_e2_concepts,mean_work,"
               "total_work,cumulative_work,wall_ms\n";
        for (MaintenanceMode mode :
             {MaintenanceMode::Static, MaintenanceMode::Incremental}) {
            SimConfig cfg = base;
            cfg.maintenance_mode = mode;
            Simulator sim(ds, cfg);
            sim.run();
            std::uint64_t cum = 0;
            for (const auto& r : sim.maintenance_rounds()) {
                cum += r.total_work;
                double mean_work = static_cast<double>(r.total_work) /
                                   static_cast<double>(sim.peer_count());
                out << r.round << ',' << to_string(mode) << ','
                    << format_double(r.mean_e1_concepts) << ','
                    << format_double(r.mean_e2_concepts) << ','
                    << format_double(mean_work) << ',' << r.total_work << ',' << cum
                    << ',' << format_double(r.wall_ms, 3) << '\n';
            }
        }
    });
}

}  // namespace fcaroute::cli
