#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tspga/core/rng.hpp"
#include "tspga/core/tour.hpp"
#include "tspga/io/tsplib.hpp"
#include "tspga/operators/crossover.hpp"

namespace tspga::core {

/// How offspring are produced per crossover event: one fixed operator, the
/// best offspring across a pool of operators (SBC), or one operator drawn at
/// random from a pool per event (SAC).
struct Strategy {
    enum class Mode { Single, Sbc, Sac };

    Mode mode = Mode::Single;
    ops::CrossoverKind op = ops::CrossoverKind::Modified;
    std::vector<ops::CrossoverKind> pool;

    static std::vector<ops::CrossoverKind> default_pool() {
        return {ops::CrossoverKind::Cowgc, ops::CrossoverKind::Cowlrgc,
                ops::CrossoverKind::Collision};
    }

    static Strategy single(ops::CrossoverKind kind) {
        Strategy s;
        s.mode = Mode::Single;
        s.op = kind;
        return s;
    }

    static Strategy sbc(std::vector<ops::CrossoverKind> pool = default_pool()) {
        return pooled(Mode::Sbc, std::move(pool));
    }

    static Strategy sac(std::vector<ops::CrossoverKind> pool = default_pool()) {
        return pooled(Mode::Sac, std::move(pool));
    }

    void validate() const {
        if (mode == Mode::Single) return;
        if (pool.empty()) throw std::invalid_argument("operator pool must not be empty");
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j)
                if (pool[i] == pool[j])
                    throw std::invalid_argument("operator pool must be duplicate-free");
    }

  private:
    static Strategy pooled(Mode mode, std::vector<ops::CrossoverKind> pool) {
        Strategy s;
        s.mode = mode;
        s.pool = std::move(pool);
        s.validate();
        return s;
    }
};

struct GaConfig {
    int population_size = 100;
    double crossover_prob = 0.9;  ///< fraction of the population replaced by offspring per generation
    double mutation_prob = 0.02;  ///< per-offspring exchange mutation probability
    int max_generations = 1000;
    Strategy strategy = Strategy::sbc();
    std::uint64_t seed = 0;

    void validate() const {
        if (population_size < 4) throw std::invalid_argument("population_size must be >= 4");
        if (crossover_prob < 0.0 || crossover_prob > 1.0)
            throw std::invalid_argument("crossover_prob must be in [0, 1]");
        if (mutation_prob < 0.0 || mutation_prob > 1.0)
            throw std::invalid_argument("mutation_prob must be in [0, 1]");
        if (max_generations < 1) throw std::invalid_argument("max_generations must be >= 1");
        strategy.validate();
    }
};

/// Fixed-size population kept sorted by ascending fitness, with a hash index
/// for exact-tour membership tests.
class Population {
  public:
    Population() = default;
    explicit Population(std::vector<Individual> members) { reset(std::move(members)); }

    /// Takes ownership, stable-sorts by fitness and rebuilds the index.
    void reset(std::vector<Individual> members) {
        members_ = std::move(members);
        std::stable_sort(members_.begin(), members_.end(),
                         [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
        hashes_.clear();
        hashes_.reserve(members_.size() * 2);
        for (const auto& ind : members_) hashes_.insert(tour_hash(ind.tour));
    }

    const std::vector<Individual>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    const Individual& best() const { return members_.front(); }

    /// True iff some member's tour is positionally identical to t.
    bool contains(const Tour& t) const {
        if (hashes_.find(tour_hash(t)) == hashes_.end()) return false;
        for (const auto& ind : members_)
            if (ind.tour == t) return true;
        return false;
    }

    static std::uint64_t tour_hash(const Tour& t) {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (const int city : t) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(city));
            h *= 1099511628211ull;
        }
        return h;
    }

  private:
    std::vector<Individual> members_;
    std::unordered_set<std::uint64_t> hashes_;
};

struct GenerationStat {
    int generation;
    double best;
    double mean;
    std::int64_t elapsed_ms;  ///< cumulative since the run started
};

struct RunRecord {
    std::vector<GenerationStat> per_generation;
    Tour best_tour;
    double best_fitness = 0.0;
    std::int64_t total_ms = 0;
    std::map<ops::CrossoverKind, std::uint64_t> operator_invocations;
};

inline Population init_population(const io::TspInstance& inst, int size, Rng& rng) {
    if (size < 4) throw std::invalid_argument("population size must be >= 4");
    const int n = inst.n();
    std::vector<Individual> members;
    members.reserve(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) {
        Tour t(static_cast<std::size_t>(n));
        std::iota(t.begin(), t.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
            std::swap(t[static_cast<std::size_t>(i)], t[j]);
        }
        members.push_back(make_individual(inst, std::move(t)));
    }
    return Population(std::move(members));
}

/// Swaps the cities at two distinct uniformly drawn positions. Consumes
/// exactly two draws.
inline Tour exchange_mutation(const Tour& t, Rng& rng) {
    const std::size_t n = t.size();
    Tour out = t;
    const auto i = static_cast<std::size_t>(rng.uniform_index(n));
    auto j = static_cast<std::size_t>(rng.uniform_index(n - 1));
    if (j >= i) ++j;
    std::swap(out[i], out[j]);
    return out;
}

/// Runs one crossover operator, drawing any cut points it needs from the
/// stream: a cut in [1, n-1] for the one-point operator, an ordered distinct
/// pair over [0, n] for PMX, nothing for the worst-gene operators, and two
/// velocity draws inside the collision operator.
inline std::pair<Tour, Tour> invoke_crossover(ops::CrossoverKind kind, const io::TspInstance& inst,
                                              const Tour& p1, const Tour& p2, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(p1.size());
    switch (kind) {
        case ops::CrossoverKind::Modified: {
            const int cut = 1 + static_cast<int>(rng.uniform_index(n - 1));
            return ops::modified_crossover(p1, p2, cut);
        }
        case ops::CrossoverKind::Pmx: {
            const auto a = rng.uniform_index(n + 1);
            auto b = rng.uniform_index(n);
            if (b >= a) ++b;
            return ops::pmx(p1, p2, static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b)));
        }
        case ops::CrossoverKind::Cowgc: return ops::cowgc(inst, p1, p2);
        case ops::CrossoverKind::Cowlrgc: return ops::cowlrgc(inst, p1, p2);
        case ops::CrossoverKind::Collision: return ops::collision(inst, p1, p2, rng);
    }
    throw std::logic_error("unreachable");
}

/// Applies every pool operator to the same parents and returns the best two
/// offspring whose tours are not already in the population and differ from
/// each other; when fewer than two candidates pass the filter the remaining
/// slots are taken by the best duplicates, so two offspring always come back.
inline std::pair<Individual, Individual> sbc_step(const io::TspInstance& inst, const Tour& p1,
                                                  const Tour& p2,
                                                  const std::vector<ops::CrossoverKind>& pool,
                                                  const Population& population, Rng& rng) {
    std::vector<Individual> candidates;
    candidates.reserve(pool.size() * 2);
    for (const auto kind : pool) {
        auto [c1, c2] = invoke_crossover(kind, inst, p1, p2, rng);
        candidates.push_back(make_individual(inst, std::move(c1)));
        candidates.push_back(make_individual(inst, std::move(c2)));
    }
    std::vector<std::size_t> rank(candidates.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        return candidates[a].fitness < candidates[b].fitness;
    });

    std::vector<std::size_t> picked;
    std::vector<std::size_t> skipped;
    for (const auto idx : rank) {
        if (picked.size() == 2) break;
        const bool duplicate =
            population.contains(candidates[idx].tour) ||
            (picked.size() == 1 && candidates[picked[0]].tour == candidates[idx].tour);
        (duplicate ? skipped : picked).push_back(idx);
    }
    for (std::size_t k = 0; picked.size() < 2; ++k) picked.push_back(skipped[k]);
    return {std::move(candidates[picked[0]]), std::move(candidates[picked[1]])};
}

struct SacResult {
    Individual first;
    Individual second;
    ops::CrossoverKind chosen;
};

/// Draws one pool operator uniformly and returns its two offspring unfiltered.
inline SacResult sac_step(const io::TspInstance& inst, const Tour& p1, const Tour& p2,
                          const std::vector<ops::CrossoverKind>& pool, Rng& rng) {
    const auto kind = pool[static_cast<std::size_t>(rng.uniform_index(pool.size()))];
    auto [c1, c2] = invoke_crossover(kind, inst, p1, p2, rng);
    return {make_individual(inst, std::move(c1)), make_individual(inst, std::move(c2)), kind};
}

/// Truncation over distinct tours. The pool is stable-sorted by fitness (so
/// earlier entries win exact ties) and the best `size` pairwise distinct
/// tours survive; only when the pool holds fewer distinct tours than that do
/// the best duplicates fill the remainder.
inline std::vector<Individual> select_survivors(std::vector<Individual> pool, int size) {
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
    std::vector<Individual> kept;
    kept.reserve(static_cast<std::size_t>(size));
    std::vector<std::size_t> duplicates;
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (static_cast<int>(kept.size()) == size) break;
        const auto hash = Population::tour_hash(pool[i].tour);
        bool duplicate = false;
        if (seen.count(hash) != 0) {
            for (const auto& ind : kept)
                if (ind.tour == pool[i].tour) {
                    duplicate = true;
                    break;
                }
        }
        if (duplicate) {
            duplicates.push_back(i);
        } else {
            seen.insert(hash);
            kept.push_back(std::move(pool[i]));
        }
    }
    for (std::size_t d = 0; static_cast<int>(kept.size()) < size; ++d)
        kept.push_back(std::move(pool[duplicates[d]]));
    return kept;
}

/// Generational loop. Per generation, round(crossover_prob * N / 2) events
/// each pick two distinct parents uniformly, produce two offspring via the
/// strategy and put them through the per-offspring mutation coin. The next
/// generation is rebuilt from the best max(1, N - 2E) incumbents plus all
/// offspring through select_survivors(), so at full crossover rate the
/// population is replaced wholesale apart from the best tour. The per-event
/// draw order is fixed: parent 1, parent 2 (redrawn on collision), the SAC
/// operator pick when applicable, operator-internal draws, then mutation
/// coin and swap positions for each offspring in turn.
inline RunRecord run_ga(const io::TspInstance& inst, const GaConfig& config) {
    using Clock = std::chrono::steady_clock;
    config.validate();

    const int population_size = config.population_size;
    const auto events =
        std::lround(config.crossover_prob * static_cast<double>(population_size) / 2.0);
    const auto elite_count = std::max<long>(1, population_size - 2 * events);

    Rng rng(config.seed);
    RunRecord record;
    record.per_generation.reserve(static_cast<std::size_t>(config.max_generations));
    const auto start = Clock::now();

    Population population = init_population(inst, population_size, rng);

    std::vector<Individual> offspring;
    std::vector<Individual> merged;
    for (int gen = 1; gen <= config.max_generations; ++gen) {
        offspring.clear();
        for (long event = 0; event < events; ++event) {
            const auto size = static_cast<std::uint64_t>(population.size());
            const auto i = static_cast<std::size_t>(rng.uniform_index(size));
            std::size_t j = static_cast<std::size_t>(rng.uniform_index(size));
            while (j == i) j = static_cast<std::size_t>(rng.uniform_index(size));
            const Tour& p1 = population.members()[i].tour;
            const Tour& p2 = population.members()[j].tour;

            Individual kid1, kid2;
            switch (config.strategy.mode) {
                case Strategy::Mode::Single: {
                    auto [c1, c2] = invoke_crossover(config.strategy.op, inst, p1, p2, rng);
                    kid1 = make_individual(inst, std::move(c1));
                    kid2 = make_individual(inst, std::move(c2));
                    ++record.operator_invocations[config.strategy.op];
                    break;
                }
                case Strategy::Mode::Sbc: {
                    auto pair = sbc_step(inst, p1, p2, config.strategy.pool, population, rng);
                    kid1 = std::move(pair.first);
                    kid2 = std::move(pair.second);
                    for (const auto kind : config.strategy.pool) ++record.operator_invocations[kind];
                    break;
                }
                case Strategy::Mode::Sac: {
                    auto result = sac_step(inst, p1, p2, config.strategy.pool, rng);
                    kid1 = std::move(result.first);
                    kid2 = std::move(result.second);
                    ++record.operator_invocations[result.chosen];
                    break;
                }
            }
            for (Individual* kid : {&kid1, &kid2}) {
                if (rng.coin(config.mutation_prob)) {
                    kid->tour = exchange_mutation(kid->tour, rng);
                    kid->fitness = tour_length(inst, kid->tour);
                }
            }
            offspring.push_back(std::move(kid1));
            offspring.push_back(std::move(kid2));
        }

        // Elites precede offspring, so exact fitness ties favour incumbents
        // and then earlier-produced offspring.
        merged.clear();
        merged.reserve(static_cast<std::size_t>(elite_count) + offspring.size());
        for (long k = 0; k < elite_count && k < static_cast<long>(population.size()); ++k)
            merged.push_back(population.members()[static_cast<std::size_t>(k)]);
        for (auto& ind : offspring) merged.push_back(std::move(ind));
        population.reset(select_survivors(std::move(merged), population_size));
        merged = {};

        double sum = 0.0;
        for (const auto& ind : population.members()) sum += ind.fitness;
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
        record.per_generation.push_back(
            {gen, population.best().fitness, sum / static_cast<double>(population_size), elapsed});
    }

    record.best_tour = population.best().tour;
    record.best_fitness = population.best().fitness;
    record.total_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    return record;
}

}  // namespace tspga::core
