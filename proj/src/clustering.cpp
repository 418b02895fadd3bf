#include "dendrodist/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dd {

namespace {

void validate_distance_matrix(const Matrix& dist, const char* op) {
    if (dist.rows() != dist.cols()) {
        throw ValidationError(std::string(op) + ": distance matrix must be square, got " +
                              std::to_string(dist.rows()) + "x" +
                              std::to_string(dist.cols()));
    }
    if (dist.rows() < 2) {
        throw ValidationError(std::string(op) + ": need at least 2 points, got " +
                              std::to_string(dist.rows()));
    }
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
        if (dist(i, i) != 0.0) {
            throw ValidationError(std::string(op) + ": nonzero diagonal at index " +
                                  std::to_string(i));
        }
        for (Eigen::Index j = i + 1; j < dist.cols(); ++j) {
            const double v = dist(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw ValidationError(std::string(op) + ": invalid distance at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (v != dist(j, i)) {
                throw ValidationError(std::string(op) + ": asymmetric entries at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

struct MstEdge {
    double weight;
    std::size_t a; // a < b
    std::size_t b;
};

std::vector<MstEdge> prim_mst(const Matrix& dist) {
    const std::size_t n = static_cast<std::size_t>(dist.rows());
    std::vector<char> in_tree(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> closest(n, 0);
    std::vector<MstEdge> edges;
    edges.reserve(n - 1);
    in_tree[0] = 1;
    for (std::size_t j = 1; j < n; ++j) {
        best[j] = dist(0, static_cast<Eigen::Index>(j));
    }
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t pick = 0;
        double weight = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_tree[j] && best[j] < weight) {
                weight = best[j];
                pick = j;
            }
        }
        in_tree[pick] = 1;
        edges.push_back({weight, std::min(closest[pick], pick),
                         std::max(closest[pick], pick)});
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_tree[j]) {
                const double d = dist(static_cast<Eigen::Index>(pick),
                                      static_cast<Eigen::Index>(j));
                if (d < best[j]) {
                    best[j] = d;
                    closest[j] = pick;
                }
            }
        }
    }
    return edges;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    std::size_t unite(std::size_t root_a, std::size_t root_b) {
        parent_[root_b] = root_a;
        return root_a;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

Matrix pairwise_distances(const PointSet& x, std::size_t max_points) {
    const std::size_t n = x.size();
    if (n > max_points) {
        throw CapacityError("pairwise_distances: n = " + std::to_string(n) +
                            " exceeds the dense-matrix capacity limit of " +
                            std::to_string(max_points) + " points");
    }
    const Matrix& p = x.points();
    Matrix dist(n, n);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        dist(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < static_cast<Eigen::Index>(n); ++j) {
            const double d = (p.row(i) - p.row(j)).norm();
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return dist;
}

Dendrogram single_linkage(const Matrix& dist) {
    validate_distance_matrix(dist, "single_linkage");
    const std::size_t n = static_cast<std::size_t>(dist.rows());

    std::vector<MstEdge> edges = prim_mst(dist);
    std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
        if (x.weight != y.weight) return x.weight < y.weight;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    UnionFind uf(n);
    std::vector<std::size_t> cluster_id(n);
    std::iota(cluster_id.begin(), cluster_id.end(), std::size_t{0});
    std::vector<std::size_t> cluster_size(n, 1);

    std::vector<MergeRecord> merges;
    merges.reserve(n - 1);
    for (std::size_t m = 0; m < edges.size(); ++m) {
        const MstEdge& e = edges[m];
        const std::size_t root_a = uf.find(e.a);
        const std::size_t root_b = uf.find(e.b);
        std::size_t left = cluster_id[root_a];
        std::size_t right = cluster_id[root_b];
        if (left > right) {
            std::swap(left, right);
        }
        const std::size_t merged_size = cluster_size[root_a] + cluster_size[root_b];
        merges.push_back({left, right, e.weight, merged_size});
        const std::size_t root = uf.unite(root_a, root_b);
        cluster_id[root] = n + m;
        cluster_size[root] = merged_size;
    }
    return Dendrogram(n, std::move(merges));
}

Dendrogram naive_single_linkage(const Matrix& dist) {
    validate_distance_matrix(dist, "naive_single_linkage");
    const std::size_t n = static_cast<std::size_t>(dist.rows());

    struct Cluster {
        std::size_t id;
        std::vector<std::size_t> members;
    };
    std::vector<Cluster> active;
    active.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        active.push_back({i, {i}});
    }

    std::vector<MergeRecord> merges;
    merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        std::size_t best_j = 1;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                double link = std::numeric_limits<double>::infinity();
                for (std::size_t p : active[i].members) {
                    for (std::size_t q : active[j].members) {
                        link = std::min(link, dist(static_cast<Eigen::Index>(p),
                                                   static_cast<Eigen::Index>(q)));
                    }
                }
                if (link < best) {
                    best = link;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        std::size_t left = active[best_i].id;
        std::size_t right = active[best_j].id;
        if (left > right) {
            std::swap(left, right);
        }
        Cluster merged;
        merged.id = n + step;
        merged.members = std::move(active[best_i].members);
        merged.members.insert(merged.members.end(), active[best_j].members.begin(),
                              active[best_j].members.end());
        merges.push_back({left, right, best, merged.members.size()});
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_i));
        active.push_back(std::move(merged));
    }
    return Dendrogram(n, std::move(merges));
}

UltrametricMatrix to_ultrametric(const Dendrogram& dendro) {
    const std::size_t n = dendro.n_leaves();
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    std::vector<std::vector<std::size_t>> members(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        members[i] = {i};
    }
    for (std::size_t m = 0; m < dendro.merges().size(); ++m) {
        const MergeRecord& rec = dendro.merges()[m];
        for (std::size_t a : members[rec.left_id]) {
            for (std::size_t b : members[rec.right_id]) {
                u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rec.height;
                u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = rec.height;
            }
        }
        std::vector<std::size_t> joined = std::move(members[rec.left_id]);
        joined.insert(joined.end(), members[rec.right_id].begin(),
                      members[rec.right_id].end());
        members[n + m] = std::move(joined);
        members[rec.right_id].clear();
    }
    return UltrametricMatrix(std::move(u), UltrametricMatrix::Trusted{});
}

} // namespace dd
