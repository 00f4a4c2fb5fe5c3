#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace termnet {

/// Item labels with their embedding vectors; all vectors share dimension d.
struct EmbeddingMatrix {
  std::vector<std::string> items;
  std::vector<std::vector<double>> vectors;
  std::size_t dim = 0;
};

/// One agglomeration step. Cluster references follow the usual convention:
/// 0..n-1 are the input items, merge k creates cluster n+k. left < right.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;  // Ward distance at merge time
  int size = 0;         // size(left) + size(right)
};

struct Dendrogram {
  std::vector<std::string> leaves;  // input order
  std::vector<Merge> merges;        // n-1 records, heights non-decreasing
  int num_leaves() const { return static_cast<int>(leaves.size()); }
};

enum class TreeFormat { newick, records };

TreeFormat parse_tree_format(const std::string& name);

/// Tab-separated input: label, then d numeric columns. Throws with the
/// offending line (and column) on dimension mismatches, non-numeric fields
/// and duplicate labels.
EmbeddingMatrix load_embeddings(const std::string& path);

/// Agglomerative clustering under the Ward objective: every step merges the
/// cluster pair whose merge least increases the total within-cluster sum of
/// squared distances. Heights are Ward distances (for singletons, the plain
/// Euclidean distance); cluster-cluster distances follow the Lance-Williams
/// update. Ties pick the smallest (left, right) cluster-id pair.
Dendrogram hac_ward(const EmbeddingMatrix& m);

/// Flat clusters from removing the k-1 highest merges. Returns one cluster
/// id per leaf (input order); ids are numbered by first appearance.
std::vector<int> cut_dendrogram(const Dendrogram& dg, int k);

std::string export_dendrogram(const Dendrogram& dg, TreeFormat format);

/// Parses the records format written by export_dendrogram.
Dendrogram import_dendrogram_records(std::istream& in);

}  // namespace termnet
