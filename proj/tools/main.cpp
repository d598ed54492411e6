#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tspga/tspga.hpp"

namespace {

using namespace tspga;

constexpr int kExitBadFlags = 2;
constexpr int kExitParseFailure = 3;
constexpr int kExitIoFailure = 4;
constexpr int kExitInvalidTour = 5;

std::string fmt_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

core::Strategy make_strategy(const std::string& name, const std::string& pool_spec) {
    std::vector<ops::CrossoverKind> pool;
    if (!pool_spec.empty()) {
        for (const auto& token : split_list(pool_spec)) {
            const auto kind = ops::parse_crossover_kind(token);
            if (!kind) throw CLI::ValidationError("--pool", "unknown operator '" + token + "'");
            pool.push_back(*kind);
        }
    }
    if (name == "sbc") return pool.empty() ? core::Strategy::sbc() : core::Strategy::sbc(pool);
    if (name == "sac") return pool.empty() ? core::Strategy::sac() : core::Strategy::sac(pool);
    const auto kind = ops::parse_crossover_kind(name);
    if (!kind) throw CLI::ValidationError("--strategy", "unknown strategy '" + name + "'");
    return core::Strategy::single(*kind);
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io::IoError("cannot open output file: " + path);
    out << contents;
    if (!out) throw io::IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io::IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string convergence_csv(const core::RunRecord& record) {
    std::ostringstream out;
    out << "generation,best,mean,elapsed_ms\n";
    for (const auto& row : record.per_generation)
        out << row.generation << ',' << fmt_number(row.best) << ',' << fmt_number(row.mean)
            << ',' << row.elapsed_ms << '\n';
    return out.str();
}

struct SolveArgs {
    std::string instance;
    std::string strategy;
    std::string pool;
    int pop = 100;
    int generations = 1000;
    double pc = 0.9;
    double pm = 0.02;
    std::uint64_t seed = 0;
    std::string out;
    std::string tour_out;
};

int run_solve(const SolveArgs& args) {
    const auto inst = io::load_instance(args.instance);
    core::GaConfig config;
    config.population_size = args.pop;
    config.max_generations = args.generations;
    config.crossover_prob = args.pc;
    config.mutation_prob = args.pm;
    config.seed = args.seed;
    config.strategy = make_strategy(args.strategy, args.pool);

    const auto record = core::run_ga(inst, config);
    write_file(args.out, convergence_csv(record));
    if (!args.tour_out.empty())
        write_file(args.tour_out, io::write_tour(record.best_tour, inst.name()));
    std::cout << fmt_number(record.best_fitness) << "\n";
    return 0;
}

struct BenchArgs {
    std::vector<std::string> instances;
    std::string strategies;
    std::string pool;
    int reps = 1;
    int pop = 100;
    int generations = 1000;
    double pc = 0.9;
    double pm = 0.02;
    std::uint64_t base_seed = 0;
    std::string csv;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

struct BenchRow {
    std::string instance;
    std::string strategy;
    std::uint64_t seed;
    double best;
    std::optional<double> optimum;
    std::int64_t elapsed_ms;
    int generations;
};

int run_bench(const BenchArgs& args) {
    const auto strategy_names = split_list(args.strategies);
    if (strategy_names.empty()) throw CLI::ValidationError("--strategies", "empty strategy list");
    std::vector<core::Strategy> strategies;
    for (const auto& name : strategy_names) strategies.push_back(make_strategy(name, args.pool));

    std::vector<io::TspInstance> instances;
    instances.reserve(args.instances.size());
    for (const auto& path : args.instances) instances.push_back(io::load_instance(path));

    struct Cell {
        std::size_t instance;
        std::size_t strategy;
        int rep;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t s = 0; s < strategies.size(); ++s)
            for (int r = 0; r < args.reps; ++r) cells.push_back({i, s, r});

    std::vector<BenchRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string error_message;

    const auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size() || failed.load()) return;
            const auto& cell = cells[k];
            const auto& inst = instances[cell.instance];
            try {
                core::GaConfig config;
                config.population_size = args.pop;
                config.max_generations = args.generations;
                config.crossover_prob = args.pc;
                config.mutation_prob = args.pm;
                config.seed = args.base_seed + static_cast<std::uint64_t>(cell.rep);
                config.strategy = strategies[cell.strategy];
                const auto record = core::run_ga(inst, config);
                const auto optimum = bench::known_optimum(inst.name());
                if (optimum && record.best_fitness < *optimum)
                    throw std::logic_error("best " + fmt_number(record.best_fitness) +
                                           " below known optimum " + fmt_number(*optimum));
                rows[k] = {inst.name(), strategy_names[cell.strategy], config.seed,
                           record.best_fitness, optimum, record.total_ms, args.generations};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    error_message = "cell (" + inst.name() + ", " + strategy_names[cell.strategy] +
                                    ", rep " + std::to_string(cell.rep) + "): " + e.what();
                return;
            }
        }
    };

    const unsigned thread_count =
        std::max(1u, std::min<unsigned>(args.threads, static_cast<unsigned>(cells.size())));
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < thread_count; ++t) workers.emplace_back(worker);
        for (auto& t : workers) t.join();
    }
    if (failed.load()) throw std::runtime_error(error_message);

    std::ostringstream csv;
    csv << "instance,strategy,seed,best,optimum,elapsed_ms\n";
    for (const auto& row : rows) {
        csv << row.instance << ',' << row.strategy << ',' << row.seed << ','
            << fmt_number(row.best) << ',' << (row.optimum ? fmt_number(*row.optimum) : "")
            << ',' << row.elapsed_ms << '\n';
    }
    write_file(args.csv, csv.str());

    // Mean-best pivot, instances as rows and strategies as columns.
    const auto mean_best = [&](std::size_t inst_idx, std::size_t strat_idx) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (cells[k].instance == inst_idx && cells[k].strategy == strat_idx) {
                sum += rows[k].best;
                ++count;
            }
        }
        return sum / count;
    };
    std::cout << std::left << std::setw(14) << "instance";
    for (const auto& name : strategy_names) std::cout << std::right << std::setw(14) << name;
    std::cout << "\n";
    std::vector<double> column_sums(strategies.size(), 0.0);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::cout << std::left << std::setw(14) << instances[i].name();
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            const double mean = mean_best(i, s);
            column_sums[s] += mean;
            std::cout << std::right << std::setw(14) << std::fixed << std::setprecision(1) << mean;
        }
        std::cout << "\n";
    }
    std::cout << std::left << std::setw(14) << "Average";
    for (std::size_t s = 0; s < strategies.size(); ++s)
        std::cout << std::right << std::setw(14) << std::fixed << std::setprecision(1)
                  << column_sums[s] / static_cast<double>(instances.size());
    std::cout << "\n\n";

    std::cout << std::left << std::setw(14) << "strategy" << std::right << std::setw(14)
              << "mean_gen_ms" << "\n";
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        std::int64_t ms = 0;
        std::int64_t gens = 0;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (cells[k].strategy != s) continue;
            ms += rows[k].elapsed_ms;
            gens += rows[k].generations;
        }
        std::cout << std::left << std::setw(14) << strategy_names[s] << std::right << std::setw(14)
                  << std::fixed << std::setprecision(3)
                  << static_cast<double>(ms) / static_cast<double>(gens) << "\n";
    }
    return 0;
}

int run_eval(const std::string& instance_path, const std::string& tour_path) {
    const auto inst = io::load_instance(instance_path);
    const auto tour = io::parse_tour(read_file(tour_path));
    if (!core::valid_tour(tour, inst.n())) {
        std::cerr << "invalid tour: not a permutation of 1.." << inst.n() << "\n";
        return kExitInvalidTour;
    }
    std::cout << fmt_number(core::tour_length(inst, tour)) << "\n";
    return 0;
}

int run_info(const std::string& instance_path) {
    const auto inst = io::load_instance(instance_path);
    std::cout << "name: " << inst.name() << "\n";
    std::cout << "cities: " << inst.n() << "\n";
    std::cout << "edge weights: " << io::to_string(inst.weight_kind()) << "\n";
    if (const auto optimum = bench::known_optimum(inst.name()))
        std::cout << "known optimum: " << fmt_number(*optimum) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genetic-algorithm TSP solver and benchmark harness"};
    app.require_subcommand(1);

    const std::string strategy_help =
        "one of modified|pmx|cowgc|cowlrgc|collision|sbc|sac";

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Run one seeded GA and write its convergence trace");
    solve->add_option("--instance", solve_args.instance, "TSPLIB file or :figure2")->required();
    solve->add_option("--strategy", solve_args.strategy, strategy_help)->required();
    solve->add_option("--pool", solve_args.pool, "comma-separated operator pool for sbc/sac");
    solve->add_option("--pop", solve_args.pop, "population size");
    solve->add_option("--generations", solve_args.generations, "generation budget");
    solve->add_option("--pc", solve_args.pc, "crossover probability");
    solve->add_option("--pm", solve_args.pm, "mutation probability");
    solve->add_option("--seed", solve_args.seed, "random seed");
    solve->add_option("--out", solve_args.out, "convergence CSV path")->required();
    solve->add_option("--tour-out", solve_args.tour_out, "write the best tour here (.tour)");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Sweep instances x strategies x repetitions");
    bench->add_option("--instances", bench_args.instances, "TSPLIB files or :figure2")
        ->required()
        ->expected(-1);
    bench->add_option("--strategies", bench_args.strategies, "comma-separated strategy list")
        ->required();
    bench->add_option("--pool", bench_args.pool, "operator pool for sbc/sac");
    bench->add_option("--reps", bench_args.reps, "repetitions per cell")
        ->check(CLI::PositiveNumber);
    bench->add_option("--pop", bench_args.pop, "population size");
    bench->add_option("--generations", bench_args.generations, "generation budget");
    bench->add_option("--pc", bench_args.pc, "crossover probability");
    bench->add_option("--pm", bench_args.pm, "mutation probability");
    bench->add_option("--base-seed", bench_args.base_seed, "seed of rep 0; rep r uses base+r");
    bench->add_option("--csv", bench_args.csv, "summary CSV path")->required();
    bench->add_option("--threads", bench_args.threads, "worker threads for the sweep");

    std::string eval_instance, eval_tour;
    auto* eval = app.add_subcommand("eval", "Print the closed-cycle length of a stored tour");
    eval->add_option("--instance", eval_instance, "TSPLIB file or :figure2")->required();
    eval->add_option("--tour", eval_tour, "TSPLIB .tour file")->required();

    std::string info_instance;
    auto* info = app.add_subcommand("info", "Print instance facts");
    info->add_option("--instance", info_instance, "TSPLIB file or :figure2")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadFlags;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (bench->parsed()) return run_bench(bench_args);
        if (eval->parsed()) return run_eval(eval_instance, eval_tour);
        if (info->parsed()) return run_info(info_instance);
    } catch (const io::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParseFailure;
    } catch (const io::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIoFailure;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitBadFlags;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
