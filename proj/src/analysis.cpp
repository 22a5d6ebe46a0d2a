#include "wobble/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wobble/errors.hpp"

namespace wobble {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double circular_delta(double from, double to) { return std::remainder(to - from, kTwoPi); }
}  // namespace

std::vector<double> best_per_epoch(const RunLog& log) {
  std::vector<double> out;
  out.reserve(log.epochs.size());
  for (const auto& r : log.epochs) {
    double best = r.evaluations.front().fitness;
    for (const auto& ev : r.evaluations) best = std::max(best, ev.fitness);
    out.push_back(best);
  }
  return out;
}

double final_best_fitness(const RunLog& log) {
  if (log.epochs.empty()) throw LogError("run has no epochs");
  return best_per_epoch(log).back();
}

double genome_distance(const Genome& a, const Genome& b, bool wrap) {
  double sum = 0.0;
  for (int i = 0; i < kGenomeSize; ++i) {
    const auto k = static_cast<std::size_t>(i);
    double d = b.values()[k] - a.values()[k];
    if (wrap && Genome::is_offset_gene(i)) d = circular_delta(a.values()[k], b.values()[k]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

const Genome& genome_at(const RunLog& log, NodeRef node) {
  if (node.epoch < 0) {
    if (node.member < 0 || node.member >= static_cast<int>(log.header.roots.size()))
      throw LogError("root index " + std::to_string(node.member) + " out of range");
    return log.header.roots[static_cast<std::size_t>(node.member)];
  }
  if (node.epoch >= static_cast<int>(log.epochs.size()))
    throw LogError("epoch " + std::to_string(node.epoch) + " not in log");
  const auto& evs = log.epochs[static_cast<std::size_t>(node.epoch)].evaluations;
  if (node.member < 0 || node.member >= static_cast<int>(evs.size()))
    throw LogError("epoch " + std::to_string(node.epoch) + ": member index out of range");
  return evs[static_cast<std::size_t>(node.member)].genome;
}

NodeRef parent_of(const RunLog& log, NodeRef node) {
  genome_at(log, node);
  if (node.epoch < 0) throw LogError("root genomes have no parent");
  const int p = log.epochs[static_cast<std::size_t>(node.epoch)]
                    .evaluations[static_cast<std::size_t>(node.member)]
                    .parent;
  const NodeRef parent{node.epoch - 1, p};
  genome_at(log, parent);  // range check
  return parent;
}

std::vector<NodeRef> ancestry_chain(const RunLog& log, NodeRef target) {
  std::vector<NodeRef> chain{target};
  genome_at(log, target);
  while (chain.back().epoch >= 0) chain.push_back(parent_of(log, chain.back()));
  std::reverse(chain.begin(), chain.end());
  return chain;
}

NodeRef best_node(const RunLog& log, int epoch) {
  if (epoch < 0 || epoch >= static_cast<int>(log.epochs.size()))
    throw LogError("epoch " + std::to_string(epoch) + " not in log");
  return {epoch, log.epochs[static_cast<std::size_t>(epoch)].best()};
}

double search_distance(const RunLog& log, int from_epoch, int to_epoch,
                       std::optional<int> target_epoch, bool wrap) {
  const int target = target_epoch.value_or(static_cast<int>(log.epochs.size()) - 1);
  const auto chain = ancestry_chain(log, best_node(log, target));
  double total = 0.0;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const int epoch = chain[i].epoch;
    if (epoch < from_epoch || epoch >= to_epoch) continue;
    total += genome_distance(genome_at(log, chain[i - 1]), genome_at(log, chain[i]), wrap);
  }
  return total;
}

std::vector<double> timestep_search_distance(const RunLog& log, bool wrap) {
  std::vector<double> out;
  for (std::size_t e = 1; e < log.epochs.size(); ++e) {
    const auto& a = genome_at(log, best_node(log, static_cast<int>(e) - 1));
    const auto& b = genome_at(log, best_node(log, static_cast<int>(e)));
    out.push_back(genome_distance(a, b, wrap));
  }
  return out;
}

SearchTree best_ancestry_tree(const RunLog& log) {
  SearchTree tree;
  // index[epoch + 1][member] -> node index, -1 if absent.
  std::vector<std::vector<int>> index(log.epochs.size() + 1);
  index[0].assign(log.header.roots.size(), -1);
  for (std::size_t e = 0; e < log.epochs.size(); ++e)
    index[e + 1].assign(log.epochs[e].evaluations.size(), -1);
  const auto slot = [&](NodeRef n) -> int& {
    return index[static_cast<std::size_t>(n.epoch + 1)][static_cast<std::size_t>(n.member)];
  };

  for (std::size_t e = 0; e < log.epochs.size(); ++e) {
    const NodeRef best = best_node(log, static_cast<int>(e));
    // Walk up to the first node already in the tree, then add the path top-down.
    std::vector<NodeRef> path;
    NodeRef n = best;
    genome_at(log, n);
    while (slot(n) < 0) {
      path.push_back(n);
      if (n.epoch < 0) break;
      n = parent_of(log, n);
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const NodeRef node = *it;
      const int parent = node.epoch < 0 ? -1 : slot(parent_of(log, node));
      const auto& values = genome_at(log, node).values();
      std::vector<double> coords(values.begin(), values.end());
      if (parent >= 0) {
        const auto& pc = tree.coordinates[static_cast<std::size_t>(parent)];
        const auto& pv = genome_at(log, tree.nodes[static_cast<std::size_t>(parent)]).values();
        for (int i = 0; i < kGenomeSize; i += 2) {
          const auto k = static_cast<std::size_t>(i);
          coords[k] = pc[k] + circular_delta(pv[k], values[k]);
        }
      }
      slot(node) = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(node);
      tree.parent.push_back(parent);
      tree.coordinates.push_back(std::move(coords));
      tree.best_of_epoch.push_back(-1);
    }
    tree.best_of_epoch[static_cast<std::size_t>(slot(best))] = static_cast<int>(e);
  }
  return tree;
}

}  // namespace wobble
