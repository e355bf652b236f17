#include "liftdp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "liftdp/errors.hpp"

namespace liftdp {

double pair_cost(const ParticleState& x, const ParticleState& y, double lambda) {
    if (x.feature.size() != y.feature.size())
        throw ValidationError("pair_cost: feature dimensions differ");
    const double dp = x.pe - y.pe;
    return squared_distance(x.feature, y.feature) + lambda * dp * dp;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> cost_matrix(const DiscreteMeasure& p, const DiscreteMeasure& q,
                                double lambda) {
    std::vector<double> cost(p.size() * q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            cost[i * q.size() + j] = pair_cost(p.atoms[i], q.atoms[j], lambda);
        }
    }
    return cost;
}

/// Shortest-augmenting-path assignment on an n x n cost matrix. Returns the
/// column matched to each row. Scan order is fixed, so ties resolve the same
/// way on every run.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n) {
    std::vector<double> pot_row(n + 1, 0.0);
    std::vector<double> pot_col(n + 1, 0.0);
    std::vector<int> match_col(n + 1, n); // row matched to each column, n = free
    std::vector<int> prev_col(n + 1, n);

    for (int row = 0; row < n; ++row) {
        std::vector<double> min_cost(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        int col = n;
        match_col[n] = row;
        do {
            used[col] = true;
            const int cur_row = match_col[col];
            double delta = kInf;
            int next_col = n;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double reduced = cost[static_cast<std::size_t>(cur_row) * n + j] -
                                       pot_row[cur_row] - pot_col[j];
                if (reduced < min_cost[j]) {
                    min_cost[j] = reduced;
                    prev_col[j] = col;
                }
                if (min_cost[j] < delta) {
                    delta = min_cost[j];
                    next_col = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    pot_row[match_col[j]] += delta;
                    pot_col[j] -= delta;
                } else {
                    min_cost[j] -= delta;
                }
            }
            col = next_col;
        } while (match_col[col] != n);
        while (col != n) {
            const int pc = prev_col[col];
            match_col[col] = match_col[pc];
            col = pc;
        }
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 0; j < n; ++j) {
        if (match_col[j] != n) row_to_col[match_col[j]] = j;
    }
    return row_to_col;
}

TransportResult solve_uniform_matching(const DiscreteMeasure& p, const DiscreteMeasure& q,
                                       double lambda) {
    const int n = static_cast<int>(p.size());
    const auto cost = cost_matrix(p, q, lambda);
    const auto row_to_col = solve_assignment(cost, n);

    TransportResult result;
    result.plan.rows = p.size();
    result.plan.cols = q.size();
    result.plan.flow_den = n;
    result.plan.flow_num.assign(p.size() * q.size(), 0);
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
        const int j = row_to_col[i];
        result.plan.flow_num[static_cast<std::size_t>(i) * q.size() + j] = 1;
        value += cost[static_cast<std::size_t>(i) * q.size() + j];
    }
    result.value = value / static_cast<double>(n);
    return result;
}

/// Successive shortest paths on the bipartite transportation graph with
/// integer supplies/demands. Arcs are uncapacitated forward, so each
/// augmentation exhausts a supply or a demand node and the loop terminates
/// after at most rows + cols rounds.
TransportResult solve_transportation(const DiscreteMeasure& p, const DiscreteMeasure& q,
                                     double lambda) {
    const long long den = std::lcm(p.mass_den, q.mass_den);
    const std::size_t rows = p.size();
    const std::size_t cols = q.size();
    std::vector<long long> supply(rows);
    std::vector<long long> demand(cols);
    for (std::size_t i = 0; i < rows; ++i) supply[i] = p.mass_num[i] * (den / p.mass_den);
    for (std::size_t j = 0; j < cols; ++j) demand[j] = q.mass_num[j] * (den / q.mass_den);

    const auto cost = cost_matrix(p, q, lambda);
    std::vector<long long> flow(rows * cols, 0);
    std::vector<double> pot(rows + cols, 0.0); // node potentials, sources then sinks

    long long remaining = den;
    std::vector<double> dist(rows + cols);
    std::vector<int> parent(rows + cols);
    std::vector<bool> done(rows + cols);

    while (remaining > 0) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(done.begin(), done.end(), false);
        for (std::size_t i = 0; i < rows; ++i) {
            if (supply[i] > 0) dist[i] = 0.0;
        }

        // Dense Dijkstra over the residual graph with reduced costs.
        for (std::size_t round = 0; round < rows + cols; ++round) {
            int u = -1;
            double best = kInf;
            for (std::size_t v = 0; v < rows + cols; ++v) {
                if (!done[v] && dist[v] < best) {
                    best = dist[v];
                    u = static_cast<int>(v);
                }
            }
            if (u < 0) break;
            done[u] = true;
            if (static_cast<std::size_t>(u) < rows) {
                const std::size_t i = static_cast<std::size_t>(u);
                for (std::size_t j = 0; j < cols; ++j) {
                    const double reduced =
                        std::max(cost[i * cols + j] + pot[i] - pot[rows + j], 0.0);
                    if (dist[u] + reduced < dist[rows + j]) {
                        dist[rows + j] = dist[u] + reduced;
                        parent[rows + j] = u;
                    }
                }
            } else {
                const std::size_t j = static_cast<std::size_t>(u) - rows;
                for (std::size_t i = 0; i < rows; ++i) {
                    if (flow[i * cols + j] <= 0) continue;
                    const double reduced =
                        std::max(-cost[i * cols + j] + pot[rows + j] - pot[i], 0.0);
                    if (dist[u] + reduced < dist[i]) {
                        dist[i] = dist[u] + reduced;
                        parent[i] = u;
                    }
                }
            }
        }

        // Closest reachable sink with open demand; distance ties keep the
        // lower index.
        int sink = -1;
        for (std::size_t j = 0; j < cols; ++j) {
            if (demand[j] > 0 && dist[rows + j] < kInf) {
                if (sink < 0 || dist[rows + j] < dist[static_cast<std::size_t>(sink)])
                    sink = static_cast<int>(rows + j);
            }
        }
        if (sink < 0) throw ValidationError("transportation problem is infeasible");

        long long bottleneck = demand[static_cast<std::size_t>(sink) - rows];
        int node = sink;
        while (parent[node] >= 0) {
            const int prev = parent[node];
            if (static_cast<std::size_t>(node) >= rows) {
                // forward arc prev(source) -> node(sink): uncapacitated
            } else {
                const std::size_t i = static_cast<std::size_t>(node);
                const std::size_t j = static_cast<std::size_t>(prev) - rows;
                bottleneck = std::min(bottleneck, flow[i * cols + j]);
            }
            node = prev;
        }
        bottleneck = std::min(bottleneck, supply[static_cast<std::size_t>(node)]);

        node = sink;
        while (parent[node] >= 0) {
            const int prev = parent[node];
            if (static_cast<std::size_t>(node) >= rows) {
                const std::size_t i = static_cast<std::size_t>(prev);
                const std::size_t j = static_cast<std::size_t>(node) - rows;
                flow[i * cols + j] += bottleneck;
            } else {
                const std::size_t i = static_cast<std::size_t>(node);
                const std::size_t j = static_cast<std::size_t>(prev) - rows;
                flow[i * cols + j] -= bottleneck;
            }
            node = prev;
        }
        supply[static_cast<std::size_t>(node)] -= bottleneck;
        demand[static_cast<std::size_t>(sink) - rows] -= bottleneck;
        remaining -= bottleneck;

        for (std::size_t v = 0; v < rows + cols; ++v) {
            if (dist[v] < kInf) pot[v] += dist[v];
        }
    }

    TransportResult result;
    result.plan.rows = rows;
    result.plan.cols = cols;
    result.plan.flow_den = den;
    result.plan.flow_num = std::move(flow);
    double value = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (result.plan.flow_num[i * cols + j] > 0) {
                value += static_cast<double>(result.plan.flow_num[i * cols + j]) /
                         static_cast<double>(den) * cost[i * cols + j];
            }
        }
    }
    result.value = value;
    return result;
}

} // namespace

TransportResult wasserstein2_sq(const DiscreteMeasure& p, const DiscreteMeasure& q,
                                double lambda) {
    p.validate();
    q.validate();

    if (p == q) {
        TransportResult identity;
        identity.value = 0.0;
        identity.plan.rows = p.size();
        identity.plan.cols = q.size();
        identity.plan.flow_den = p.mass_den;
        identity.plan.flow_num.assign(p.size() * q.size(), 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            identity.plan.flow_num[i * q.size() + i] = p.mass_num[i];
        }
        return identity;
    }

    if (p.is_uniform() && q.is_uniform() && p.size() == q.size()) {
        return solve_uniform_matching(p, q, lambda);
    }
    return solve_transportation(p, q, lambda);
}

double wasserstein_bruteforce(const DiscreteMeasure& p, const DiscreteMeasure& q, double lambda) {
    p.validate();
    q.validate();
    if (!p.is_uniform() || !q.is_uniform() || p.size() != q.size())
        throw ValidationError("bruteforce oracle requires uniform measures with equal atom count");
    const std::size_t n = p.size();
    if (n > 8) throw ValidationError("bruteforce oracle refuses more than 8 atoms");

    const auto cost = cost_matrix(p, q, lambda);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = kInf;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += cost[i * n + perm[i]];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(n);
}

} // namespace liftdp
