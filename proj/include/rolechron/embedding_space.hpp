#ifndef ROLECHRON_EMBEDDING_SPACE_HPP
#define ROLECHRON_EMBEDDING_SPACE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rolechron/graph.hpp"

namespace rolechron {

struct Provenance {
  std::uint64_t seed = 0;
  std::string snapshot_id;
  std::map<std::string, std::string> hyperparameters;
};

/// Node-to-vector map for one snapshot. Row i of `vectors()` belongs to ids()[i].
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  EmbeddingSpace(std::vector<UserId> ids, Eigen::MatrixXd vectors, Provenance provenance = {});

  Eigen::Index rows() const { return vectors_.rows(); }
  Eigen::Index dim() const { return vectors_.cols(); }
  bool empty() const { return ids_.empty(); }

  const std::vector<UserId>& ids() const { return ids_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  const Provenance& provenance() const { return provenance_; }
  Provenance& provenance() { return provenance_; }

  bool contains(const UserId& id) const { return index_.contains(id); }
  std::optional<Eigen::Index> index_of(const UserId& id) const;
  /// Throws std::out_of_range for unknown ids.
  Eigen::Index row_index(const UserId& id) const;
  auto row(const UserId& id) const { return vectors_.row(row_index(id)); }

  /// Rows for `ids`, in that order. Throws listing every missing id.
  Eigen::MatrixXd gather(std::span<const UserId> ids) const;

  /// Same ids and provenance, new coordinates.
  EmbeddingSpace with_vectors(Eigen::MatrixXd vectors) const;

 private:
  std::vector<UserId> ids_;
  std::unordered_map<UserId, Eigen::Index> index_;
  Eigen::MatrixXd vectors_;
  Provenance provenance_;
};

/// Ids present in both spaces, in the row order of `a`.
std::vector<UserId> shared_ids(const EmbeddingSpace& a, const EmbeddingSpace& b);

/// Text form: header `node_count d seed`, then `user_id v1 ... vd` per row.
/// Values are written with round-trip precision.
void write_text(std::ostream& out, const EmbeddingSpace& space);
EmbeddingSpace read_text(std::istream& in);

/// Binary form, little-endian: "RCEMB1\0\0", u64 rows, u64 dim, u64 seed,
/// index table (u32 length + bytes per id), then rows*dim float32 values.
void write_binary(std::ostream& out, const EmbeddingSpace& space);
EmbeddingSpace read_binary(std::istream& in);

void save_text(const std::filesystem::path& path, const EmbeddingSpace& space);
EmbeddingSpace load_text(const std::filesystem::path& path);

}  // namespace rolechron

#endif
