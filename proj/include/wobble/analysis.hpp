#pragma once

// Quantities read off run logs: best-of-epoch curves, ancestry chains,
// search distances in genome space and the search tree used for the PCA view.

#include <optional>
#include <vector>

#include "wobble/runlog.hpp"

namespace wobble {

/// Highest fitness of each epoch.
std::vector<double> best_per_epoch(const RunLog& log);
/// Best fitness of the last epoch.
double final_best_fitness(const RunLog& log);

/// Euclidean distance between genomes. With `wrap`, offset genes are
/// differenced on the circle (min(|d|, 2 pi - |d|)).
double genome_distance(const Genome& a, const Genome& b, bool wrap = true);

/// A member of a logged epoch; epoch -1 addresses the run's root genomes.
struct NodeRef {
  int epoch = -1;
  int member = 0;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

const Genome& genome_at(const RunLog& log, NodeRef node);
/// The logged parent of a non-root node.
NodeRef parent_of(const RunLog& log, NodeRef node);

/// Nodes from a root genome to `target`, root first. Throws LogError when a
/// parent index is out of range.
std::vector<NodeRef> ancestry_chain(const RunLog& log, NodeRef target);

/// The best member of `epoch`.
NodeRef best_node(const RunLog& log, int epoch);

/// Sum of genome distances along the ancestry chain of the best member of
/// `target_epoch` (default: the last epoch), counting only links whose child
/// belongs to an epoch in [from_epoch, to_epoch).
double search_distance(const RunLog& log, int from_epoch, int to_epoch,
                       std::optional<int> target_epoch = std::nullopt, bool wrap = true);

/// Distance between the best genomes of consecutive epochs (length N - 1).
std::vector<double> timestep_search_distance(const RunLog& log, bool wrap = true);

/// Union of the ancestry chains of every epoch's best member. Genomes are
/// unwrapped along the tree: each offset gene is its parent's value plus the
/// wrapped difference, so steps across 0 / 2 pi stay short.
struct SearchTree {
  std::vector<NodeRef> nodes;             // parents precede children
  std::vector<int> parent;                // index into nodes, -1 for the root
  std::vector<std::vector<double>> coordinates;
  std::vector<int> best_of_epoch;         // per node: epoch it is best of, or -1
};

SearchTree best_ancestry_tree(const RunLog& log);

}  // namespace wobble
