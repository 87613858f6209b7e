#include <doctest.h>

#include <sstream>

#include "rolechron/embedding_space.hpp"
#include "support.hpp"

using namespace rolechron;

namespace {

EmbeddingSpace sample(std::uint64_t seed, Eigen::Index n = 12, Eigen::Index d = 5) {
  auto rng = make_engine(seed);
  std::vector<UserId> ids;
  for (Eigen::Index i = 0; i < n; ++i) ids.push_back("user_" + std::to_string(i * 7 + 1));
  Provenance p;
  p.seed = seed;
  return EmbeddingSpace(ids, testing::gaussian(rng, n, d) / 3.0, p);
}

}  // namespace

TEST_CASE("text round-trip is exact") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = sample(seed);
    std::stringstream buf;
    write_text(buf, s);
    const auto back = read_text(buf);
    CHECK(back.ids() == s.ids());
    CHECK(back.vectors() == s.vectors());
    CHECK(back.provenance().seed == seed);
  }
}

TEST_CASE("binary round-trip keeps float precision") {
  const auto s = sample(3, 40, 16);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_binary(buf, s);
  CHECK(buf.str().substr(0, 6) == "RCEMB1");
  const auto back = read_binary(buf);
  CHECK(back.ids() == s.ids());
  CHECK((back.vectors() - s.vectors()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(back.provenance().seed == 3);
}

TEST_CASE("save and load through a nested path") {
  testing::TempDir dir("emb");
  const auto s = sample(5);
  save_text(dir.path() / "a" / "b" / "T1.emb", s);
  const auto back = load_text(dir.path() / "a" / "b" / "T1.emb");
  CHECK(back.vectors() == s.vectors());
  CHECK_THROWS(load_text(dir.path() / "missing.emb"));
}

TEST_CASE("malformed text is rejected") {
  for (const char* text : {"", "2 2 0\na 1 2\n", "1 2 0\na 1 x\n", "1 2 0\na 1\n", "2 1 0\na 1\na 2\n", "x y z\n"}) {
    CAPTURE(text);
    std::istringstream in(text);
    CHECK_THROWS(read_text(in));
  }
}

TEST_CASE("malformed binary is rejected") {
  std::istringstream bad_magic("NOTEMB\0\0", std::ios::binary);
  CHECK_THROWS(read_binary(bad_magic));

  const auto s = sample(6);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_binary(buf, s);
  const auto full = buf.str();
  std::istringstream truncated(full.substr(0, full.size() - 3), std::ios::binary);
  CHECK_THROWS(read_binary(truncated));
}

TEST_CASE("lookups and gather") {
  const auto s = sample(7);
  CHECK(s.contains("user_1"));
  CHECK_FALSE(s.contains("nobody"));
  CHECK_THROWS_AS(s.row_index("nobody"), std::out_of_range);
  const std::vector<UserId> pick{"user_8", "user_1"};
  const auto g = s.gather(pick);
  CHECK(g.row(0) == s.vectors().row(1));
  CHECK(g.row(1) == s.vectors().row(0));
  try {
    s.gather(std::vector<UserId>{"user_1", "ghost_a", "ghost_b"});
    FAIL("expected an error");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ghost_a") != std::string::npos);
    CHECK(msg.find("ghost_b") != std::string::npos);
  }
  CHECK_THROWS(EmbeddingSpace({"a", "a"}, Eigen::MatrixXd::Zero(2, 2)));
}

TEST_CASE("shared ids follow the first space's order") {
  const EmbeddingSpace a({"c", "a", "b"}, Eigen::MatrixXd::Zero(3, 2));
  const EmbeddingSpace b({"b", "c", "d"}, Eigen::MatrixXd::Zero(3, 2));
  CHECK(shared_ids(a, b) == std::vector<UserId>{"c", "b"});
}
