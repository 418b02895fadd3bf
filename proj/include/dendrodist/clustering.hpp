#pragma once

#include "dendrodist/types.hpp"

namespace dd {

/// Dense-matrix capacity guard for pairwise distances (n^2 doubles).
inline constexpr std::size_t kDefaultMaxPairwisePoints = 20000;

/// Full n x n Euclidean distance matrix. Exactly symmetric (each pair is
/// computed once and mirrored) with an exactly zero diagonal.
Matrix pairwise_distances(const PointSet& x,
                          std::size_t max_points = kDefaultMaxPairwisePoints);

/// Single-linkage clustering of a distance matrix.
///
/// Computed as Prim's minimum spanning tree on the dense matrix, after
/// which the MST edges are sorted by (weight, smaller index, larger index)
/// and agglomerated with a union-find: the merge heights are exactly the
/// MST edge weights. Under tied distances the merge structure may differ
/// from other implementations, but the multiset of heights -- and hence
/// the agglomerative distances -- is tie-invariant.
Dendrogram single_linkage(const Matrix& dist);

/// O(n^3) reference agglomeration: repeatedly merge the two clusters with
/// the minimum single-linkage distance. Same contract as single_linkage;
/// kept as an independent cross-check and intended for small n.
Dendrogram naive_single_linkage(const Matrix& dist);

/// Ultrametric space equivalent to a dendrogram: u(i,j) is the height of
/// the merge at which leaves i and j first fall in the same cluster.
UltrametricMatrix to_ultrametric(const Dendrogram& dendro);

} // namespace dd
