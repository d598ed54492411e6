#pragma once

#include <stdexcept>
#include <vector>

#include "tspga/io/tsplib.hpp"

namespace tspga::core {

/// A tour is a permutation of the city indices 0..n-1 (path representation).
using Tour = std::vector<int>;

inline bool valid_tour(const Tour& t, int n) {
    if (static_cast<int>(t.size()) != n) return false;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (const int city : t) {
        if (city < 0 || city >= n || seen[static_cast<std::size_t>(city)]) return false;
        seen[static_cast<std::size_t>(city)] = true;
    }
    return true;
}

/// Closed-cycle tour length, including the edge back to the start.
inline double tour_length(const io::TspInstance& inst, const Tour& t) {
    const std::size_t n = t.size();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) total += inst.distance(t[i], t[i + 1]);
    total += inst.distance(t[n - 1], t[0]);
    return total;
}

struct WorstGene {
    int position;  ///< index of the gene within the tour
    double value;
};

/// Gene whose incoming edge from its left neighbour is the longest, i.e. the
/// right endpoint of the longest edge in the open-path scan. Ties go to the
/// smallest position. The closing edge does not take part.
inline WorstGene worst_gene_edge(const io::TspInstance& inst, const Tour& t) {
    const int n = static_cast<int>(t.size());
    int best = 0;
    double best_d = inst.distance(t[0], t[1]);
    for (int i = 1; i + 1 < n; ++i) {
        const double d = inst.distance(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i) + 1]);
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best + 1, best_d};
}

/// Interior gene with the largest sum of distances to its left and right
/// neighbours. Endpoints are excluded; ties go to the smallest position.
inline WorstGene worst_gene_lr(const io::TspInstance& inst, const Tour& t) {
    const int n = static_cast<int>(t.size());
    if (n < 3) throw std::invalid_argument("worst_gene_lr needs at least 3 cities");
    int best = 1;
    double best_sum = -1.0;
    for (int i = 1; i + 1 < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double sum = inst.distance(t[k], t[k - 1]) + inst.distance(t[k], t[k + 1]);
        if (sum > best_sum) {
            best_sum = sum;
            best = i;
        }
    }
    return {best, best_sum};
}

/// Per-gene mass: distance to the left plus distance to the right neighbour
/// along the open path; the two endpoints have a single neighbour each.
inline std::vector<double> gene_masses(const io::TspInstance& inst, const Tour& t) {
    const std::size_t n = t.size();
    std::vector<double> mass(n);
    mass[0] = inst.distance(t[0], t[1]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        mass[i] = inst.distance(t[i], t[i - 1]) + inst.distance(t[i], t[i + 1]);
    mass[n - 1] = inst.distance(t[n - 2], t[n - 1]);
    return mass;
}

/// A tour with its cached closed-cycle length.
struct Individual {
    Tour tour;
    double fitness = 0.0;
};

inline Individual make_individual(const io::TspInstance& inst, Tour t) {
    const double f = tour_length(inst, t);
    return {std::move(t), f};
}

}  // namespace tspga::core
