#include "rolechron/embedding_space.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace rolechron {

EmbeddingSpace::EmbeddingSpace(std::vector<UserId> ids, Eigen::MatrixXd vectors, Provenance provenance)
    : ids_(std::move(ids)), vectors_(std::move(vectors)), provenance_(std::move(provenance)) {
  if (static_cast<Eigen::Index>(ids_.size()) != vectors_.rows())
    throw std::invalid_argument(
        fmt::format("EmbeddingSpace: {} ids but {} rows", ids_.size(), vectors_.rows()));
  if (!vectors_.allFinite()) throw std::invalid_argument("EmbeddingSpace: non-finite entries");
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (!index_.emplace(ids_[i], static_cast<Eigen::Index>(i)).second)
      throw std::invalid_argument("EmbeddingSpace: duplicate id " + ids_[i]);
}

std::optional<Eigen::Index> EmbeddingSpace::index_of(const UserId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::Index EmbeddingSpace::row_index(const UserId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown user id " + id);
  return it->second;
}

Eigen::MatrixXd EmbeddingSpace::gather(std::span<const UserId> ids) const {
  std::vector<std::string> missing;
  for (const auto& id : ids)
    if (!contains(id)) missing.push_back(id);
  if (!missing.empty())
    throw std::out_of_range(fmt::format("ids missing from space: {}", fmt::join(missing, ", ")));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), dim());
  for (std::size_t i = 0; i < ids.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = row(ids[i]);
  return out;
}

EmbeddingSpace EmbeddingSpace::with_vectors(Eigen::MatrixXd vectors) const {
  return EmbeddingSpace(ids_, std::move(vectors), provenance_);
}

std::vector<UserId> shared_ids(const EmbeddingSpace& a, const EmbeddingSpace& b) {
  std::vector<UserId> out;
  for (const auto& id : a.ids())
    if (b.contains(id)) out.push_back(id);
  return out;
}

void write_text(std::ostream& out, const EmbeddingSpace& space) {
  out << fmt::format("{} {} {}\n", space.rows(), space.dim(), space.provenance().seed);
  const auto& v = space.vectors();
  std::string line;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    line = space.ids()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < v.cols(); ++j) fmt::format_to(std::back_inserter(line), " {}", v(i, j));
    line += '\n';
    out << line;
  }
}

EmbeddingSpace read_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("embedding file: missing header");
  std::istringstream hs(header);
  long long rows = 0, dim = 0;
  std::uint64_t seed = 0;
  if (!(hs >> rows >> dim >> seed) || rows < 0 || dim < 0)
    throw std::runtime_error("embedding file: malformed header '" + header + "'");
  std::vector<UserId> ids;
  ids.reserve(static_cast<std::size_t>(rows));
  Eigen::MatrixXd v(rows, dim);
  std::string line;
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error(fmt::format("embedding file: expected {} rows", rows));
    std::istringstream ls(line);
    std::string id;
    ls >> id;
    for (long long j = 0; j < dim; ++j)
      if (!(ls >> v(i, j))) throw std::runtime_error(fmt::format("embedding file: row {} too short", i + 1));
    ids.push_back(std::move(id));
  }
  Provenance p;
  p.seed = seed;
  return EmbeddingSpace(std::move(ids), std::move(v), std::move(p));
}

namespace {

constexpr char kMagic[8] = {'R', 'C', 'E', 'M', 'B', '1', '\0', '\0'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw std::runtime_error("binary embedding: truncated");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

}  // namespace

void write_binary(std::ostream& out, const EmbeddingSpace& space) {
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(space.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(space.dim()));
  put_le<std::uint64_t>(out, space.provenance().seed);
  for (const auto& id : space.ids()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  const auto& v = space.vectors();
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j)
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v(i, j))));
}

EmbeddingSpace read_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw std::runtime_error("binary embedding: bad magic");
  const auto rows = static_cast<Eigen::Index>(get_le<std::uint64_t>(in));
  const auto dim = static_cast<Eigen::Index>(get_le<std::uint64_t>(in));
  Provenance p;
  p.seed = get_le<std::uint64_t>(in);
  std::vector<UserId> ids(static_cast<std::size_t>(rows));
  for (auto& id : ids) {
    id.resize(get_le<std::uint32_t>(in));
    if (!in.read(id.data(), static_cast<std::streamsize>(id.size())))
      throw std::runtime_error("binary embedding: truncated index table");
  }
  Eigen::MatrixXd v(rows, dim);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) v(i, j) = std::bit_cast<float>(get_le<std::uint32_t>(in));
  return EmbeddingSpace(std::move(ids), std::move(v), std::move(p));
}

void save_text(const std::filesystem::path& path, const EmbeddingSpace& space) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_text(out, space);
}

EmbeddingSpace load_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_text(in);
}

}  // namespace rolechron
