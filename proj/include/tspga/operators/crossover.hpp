#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "tspga/core/rng.hpp"
#include "tspga/core/tour.hpp"
#include "tspga/io/tsplib.hpp"

namespace tspga::ops {

using core::Tour;

enum class CrossoverKind { Modified, Pmx, Cowgc, Cowlrgc, Collision };

inline constexpr CrossoverKind all_crossover_kinds[] = {
    CrossoverKind::Modified, CrossoverKind::Pmx, CrossoverKind::Cowgc,
    CrossoverKind::Cowlrgc, CrossoverKind::Collision};

inline std::string_view to_string(CrossoverKind kind) {
    switch (kind) {
        case CrossoverKind::Modified: return "modified";
        case CrossoverKind::Pmx: return "pmx";
        case CrossoverKind::Cowgc: return "cowgc";
        case CrossoverKind::Cowlrgc: return "cowlrgc";
        case CrossoverKind::Collision: return "collision";
    }
    return "?";
}

inline std::optional<CrossoverKind> parse_crossover_kind(std::string_view name) {
    for (const auto kind : all_crossover_kinds)
        if (name == to_string(kind)) return kind;
    return std::nullopt;
}

/// Head-on elastic collision velocity update. Masses must be non-negative;
/// the degenerate massless pair yields two stationary objects. Results within
/// 1e-12 of zero are clamped to exactly zero so the stationary case is
/// reachable in floating point.
inline std::pair<double, double> elastic_collision(double m1, double v1, double m2, double v2) {
    const double total = m1 + m2;
    if (total <= 0.0) return {0.0, 0.0};
    const double diff = (m1 - m2) / total;
    double v1_new = diff * v1 + (2.0 * m2 / total) * v2;
    double v2_new = (2.0 * m1 / total) * v1 - diff * v2;
    if (std::abs(v1_new) <= 1e-12) v1_new = 0.0;
    if (std::abs(v2_new) <= 1e-12) v2_new = 0.0;
    return {v1_new, v2_new};
}

/// Post-collision state of one gene pair under the sign convention v1 > 0,
/// v2 < 0: a gene stays in place when it was reflected or became stationary.
struct CollisionOutcome {
    double v1_new;
    double v2_new;
    bool stays_1;
    bool stays_2;
};

inline CollisionOutcome collide_gene(double m1, double v1, double m2, double v2) {
    const auto [v1_new, v2_new] = elastic_collision(m1, v1, m2, v2);
    return {v1_new, v2_new, v1_new <= 0.0, v2_new >= 0.0};
}

namespace detail {

/// Keeps the marked positions of `keeper` and fills the gaps left-to-right
/// with the unused cities in `donor` order.
inline Tour fill_gaps(const Tour& keeper, const std::vector<char>& keep, const Tour& donor) {
    const std::size_t n = keeper.size();
    Tour child(n, -1);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) {
            child[i] = keeper[i];
            used[static_cast<std::size_t>(keeper[i])] = true;
        }
    }
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) continue;
        while (used[static_cast<std::size_t>(donor[next])]) ++next;
        child[i] = donor[next];
        used[static_cast<std::size_t>(donor[next])] = true;
    }
    return child;
}

inline Tour one_point_child(const Tour& prefix_parent, const Tour& donor, int cut) {
    const std::size_t n = prefix_parent.size();
    Tour child;
    child.reserve(n);
    std::vector<bool> used(n, false);
    for (int i = 0; i < cut; ++i) {
        child.push_back(prefix_parent[static_cast<std::size_t>(i)]);
        used[static_cast<std::size_t>(prefix_parent[static_cast<std::size_t>(i)])] = true;
    }
    for (const int city : donor)
        if (!used[static_cast<std::size_t>(city)]) child.push_back(city);
    return child;
}

inline Tour pmx_child(const Tour& base, const Tour& donor, int cut1, int cut2) {
    const int n = static_cast<int>(base.size());
    Tour child = base;
    // mapping donor[k] -> base[k] over the copied segment
    std::vector<int> mapped(static_cast<std::size_t>(n), -1);
    for (int k = cut1; k < cut2; ++k) {
        child[static_cast<std::size_t>(k)] = donor[static_cast<std::size_t>(k)];
        mapped[static_cast<std::size_t>(donor[static_cast<std::size_t>(k)])] = base[static_cast<std::size_t>(k)];
    }
    for (int i = 0; i < n; ++i) {
        if (i >= cut1 && i < cut2) continue;
        int city = base[static_cast<std::size_t>(i)];
        while (mapped[static_cast<std::size_t>(city)] != -1) city = mapped[static_cast<std::size_t>(city)];
        child[static_cast<std::size_t>(i)] = city;
    }
    return child;
}

}  // namespace detail

/// One-point order crossover: each child keeps one parent's prefix before
/// `cut` and takes the remaining cities in the other parent's order.
inline std::pair<Tour, Tour> modified_crossover(const Tour& p1, const Tour& p2, int cut) {
    const int n = static_cast<int>(p1.size());
    if (cut < 0 || cut > n) throw std::out_of_range("crossover cut out of range");
    return {detail::one_point_child(p1, p2, cut), detail::one_point_child(p2, p1, cut)};
}

/// Partially mapped crossover over the segment [cut1, cut2).
inline std::pair<Tour, Tour> pmx(const Tour& p1, const Tour& p2, int cut1, int cut2) {
    const int n = static_cast<int>(p1.size());
    if (cut1 < 0 || cut2 > n || cut1 >= cut2) throw std::out_of_range("bad PMX cut pair");
    return {detail::pmx_child(p1, p2, cut1, cut2), detail::pmx_child(p2, p1, cut1, cut2)};
}

/// Cuts both parents where the parent with the longer worst edge has its
/// worst gene, so that edge is severed, then applies the one-point order
/// crossover. Ties on the worst-edge length go to the first parent.
inline std::pair<Tour, Tour> cowgc(const io::TspInstance& inst, const Tour& p1, const Tour& p2) {
    const auto w1 = core::worst_gene_edge(inst, p1);
    const auto w2 = core::worst_gene_edge(inst, p2);
    const int cut = w2.value > w1.value ? w2.position : w1.position;
    return modified_crossover(p1, p2, cut);
}

/// Like cowgc but the worst gene is the one with the largest left+right
/// neighbour distance sum.
inline std::pair<Tour, Tour> cowlrgc(const io::TspInstance& inst, const Tour& p1, const Tour& p2) {
    const auto w1 = core::worst_gene_lr(inst, p1);
    const auto w2 = core::worst_gene_lr(inst, p2);
    const int cut = w2.value > w1.value ? w2.position : w1.position;
    return modified_crossover(p1, p2, cut);
}

/// Collision crossover. The parents move towards each other with velocities
/// drawn from [1, tour length] (positive for parent 1, negative for parent
/// 2) and every gene pair undergoes an elastic collision weighted by the
/// genes' neighbour-distance masses. Genes that are reflected or become
/// stationary stay in place; the gaps are filled from the other parent in
/// order. Consumes exactly two draws from the stream.
inline std::pair<Tour, Tour> collision(const io::TspInstance& inst, const Tour& p1,
                                       const Tour& p2, core::Rng& rng) {
    const std::size_t n = p1.size();
    const auto masses1 = core::gene_masses(inst, p1);
    const auto masses2 = core::gene_masses(inst, p2);
    const double v1 = rng.uniform_real(1.0, std::max(1.0, core::tour_length(inst, p1)));
    const double v2 = -rng.uniform_real(1.0, std::max(1.0, core::tour_length(inst, p2)));
    std::vector<char> keep1(n), keep2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto outcome = collide_gene(masses1[i], v1, masses2[i], v2);
        keep1[i] = outcome.stays_1;
        keep2[i] = outcome.stays_2;
    }
    return {detail::fill_gaps(p1, keep1, p2), detail::fill_gaps(p2, keep2, p1)};
}

}  // namespace tspga::ops
