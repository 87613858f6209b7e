#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "rolechron/dataset.hpp"
#include "rolechron/graph.hpp"
#include "support.hpp"

using namespace rolechron;

TEST_CASE("parallel edges are merged by summing weights") {
  const auto s = testing::parse("a,b,2\nb,a,1\na,b,3\n");
  CHECK(s.graph.node_count() == 2);
  CHECK(s.graph.edge_count() == 2);
  CHECK(s.graph.weight("a", "b") == 5.0);
  CHECK(s.graph.weight("b", "a") == 1.0);
  CHECK_FALSE(s.empty_warning);
}

TEST_CASE("empty input gives an empty snapshot with a warning") {
  const auto s = testing::parse("");
  CHECK(s.graph.node_count() == 0);
  CHECK(s.graph.edge_count() == 0);
  CHECK(s.empty_warning);
}

TEST_CASE("malformed weight is a parse error carrying the line") {
  try {
    testing::parse("a,b,x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    testing::parse("# comment\na\tb\t1\nc,d,-2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("tabs, commas, comments and missing weights") {
  const auto s = testing::parse("# header\n\na\tb\t2.5\nb,c\n");
  CHECK(s.graph.weight("a", "b") == 2.5);
  CHECK(s.graph.weight("b", "c") == 1.0);
}

TEST_CASE("self-loops are kept and flagged") {
  const auto s = testing::parse("a,a,2\na,b,1\n");
  CHECK(s.graph.has_self_loops());
  CHECK(s.graph.weight("a", "a") == 2.0);
}

TEST_CASE("parse, write, parse round-trips the graph") {
  auto rng = make_engine(11);
  for (int trial = 0; trial < 50; ++trial) {
    InteractionGraph g = testing::random_graph(rng, 12, 30);
    // Non-integer weights exercise the exact-precision writer.
    InteractionGraph h;
    for (const auto& e : g.edge_list()) h.add_edge(e.source, e.target, e.weight / 7.0);
    std::ostringstream out;
    write_edge_list(out, h);
    const auto back = testing::parse(out.str());
    CHECK(back.graph == h);
  }
}

TEST_CASE("merge_months adds weights across months") {
  std::vector<TemporalSnapshot> months(3);
  months[0] = testing::parse("a,b,1\n");
  months[1] = testing::parse("a,b,2\n");
  months[2] = testing::parse("b,c,1\n");
  months[0].months_covered = {"2014-02"};
  months[1].months_covered = {"2014-03"};
  months[2].months_covered = {"2014-04"};
  const auto w = merge_months(months, 1);
  CHECK(w.graph.edge_count() == 2);
  CHECK(w.graph.weight("a", "b") == 3.0);
  CHECK(w.graph.weight("b", "c") == 1.0);
  CHECK(w.months_covered.size() == 3);
}

TEST_CASE("merge_months of one month is a copy") {
  std::vector<TemporalSnapshot> one{testing::parse("a,b,1\nc,a,4\n")};
  one[0].months_covered = {"2014-02"};
  CHECK(merge_months(one, 1).graph == one[0].graph);
}

TEST_CASE("merge_months rejects a repeated month") {
  std::vector<TemporalSnapshot> months{testing::parse("a,b,1\n"), testing::parse("a,c,1\n")};
  months[0].months_covered = {"2014-02"};
  months[1].months_covered = {"2014-02"};
  CHECK_THROWS(merge_months(months, 1));
}

TEST_CASE("merge_months is order independent") {
  auto rng = make_engine(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<TemporalSnapshot> months;
    for (int m = 0; m < 4; ++m) {
      TemporalSnapshot s;
      s.subreddit = "sub";
      s.graph = testing::random_graph(rng, 8, 10);
      s.months_covered = {"2014-0" + std::to_string(m + 2)};
      months.push_back(s);
    }
    const auto reference = merge_months(months, 1).graph;
    for (int p = 0; p < 5; ++p) {
      for (std::size_t i = months.size(); i > 1; --i) std::swap(months[i - 1], months[uniform_index(rng, i)]);
      CHECK(merge_months(months, 1).graph == reference);
    }
  }
}

TEST_CASE("top_k orders by strength with lexicographic ties") {
  TemporalSnapshot s;
  s.graph.add_edge("a", "hub", 5);
  s.graph.add_edge("b", "hub", 3);
  s.graph.add_edge("c", "hub", 1);
  // a 5, b 3, c 1; hub 9 leads.
  CHECK(top_k_users(s, 3).users == std::vector<UserId>{"hub", "a", "b"});

  TemporalSnapshot t;
  t.graph.add_edge("a", "c", 5);
  t.graph.add_edge("b", "c", 3);
  t.graph.add_edge("c", "d", 0.5);
  // c has 8.5, a 5, b 3
  const auto r = top_k_users(t, 3);
  CHECK(r.users == std::vector<UserId>{"c", "a", "b"});

  TemporalSnapshot tie;
  tie.graph.add_edge("b", "a", 2);
  CHECK(top_k_users(tie, 1).users == std::vector<UserId>{"a"});
}

TEST_CASE("top_k shortfall") {
  const auto s = testing::parse("a,b\nb,c\n");
  const auto r = top_k_users(s, 100);
  CHECK(r.users.size() == 3);
  CHECK(r.shortfall);
  CHECK_FALSE(top_k_users(s, 3).shortfall);
}

TEST_CASE("top_k prefix property") {
  auto rng = make_engine(9);
  for (int trial = 0; trial < 40; ++trial) {
    TemporalSnapshot s;
    s.graph = testing::random_graph(rng, 15, 25);
    for (std::size_t k = 1; k < s.graph.node_count(); ++k) {
      const auto a = top_k_users(s, k).users;
      const auto b = top_k_users(s, k + 1).users;
      REQUIRE(b.size() >= a.size());
      CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
  }
}

TEST_CASE("anchor overlap") {
  std::vector<std::vector<UserId>> sets{{"a", "b", "c"}, {"b", "c", "d"}, {"c", "e"}};
  CHECK(anchor_overlap(sets).users == std::vector<UserId>{"c"});

  std::vector<std::vector<UserId>> same{{"b", "a"}, {"a", "b"}};
  CHECK(anchor_overlap(same).users == std::vector<UserId>{"a", "b"});

  std::vector<std::vector<UserId>> disjoint{{"a"}, {"b"}};
  const auto none = anchor_overlap(disjoint);
  CHECK(none.users.empty());
  CHECK(none.empty_warning);
}

TEST_CASE("anchor overlap is a subset of every input") {
  auto rng = make_engine(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<UserId>> sets(2 + uniform_index(rng, 3));
    for (auto& s : sets)
      for (int i = 0; i < 8; ++i) s.push_back("u" + std::to_string(uniform_index(rng, 12)));
    const auto anchors = anchor_overlap(sets);
    for (const auto& s : sets)
      for (const auto& u : anchors.users) CHECK(std::find(s.begin(), s.end(), u) != s.end());
  }
}

TEST_CASE("summarize matches a recount") {
  CHECK(summarize(std::vector<TemporalSnapshot>{}).cells.empty());
  CHECK(summarize(std::vector<TemporalSnapshot>{}).at(ClassLabel::loyal, 1) == SummaryCounts{});

  auto rng = make_engine(21);
  std::vector<TemporalSnapshot> snaps;
  for (int i = 0; i < 12; ++i) {
    TemporalSnapshot s;
    s.subreddit = "s" + std::to_string(i % 4);
    s.class_label = i % 2 ? ClassLabel::loyal : ClassLabel::vagrant;
    s.window_index = 1 + i / 4;
    s.graph = testing::random_graph(rng, 10, 14);
    snaps.push_back(s);
  }
  const auto summary = summarize(snaps);
  for (auto label : {ClassLabel::loyal, ClassLabel::vagrant})
    for (int w = 1; w <= 3; ++w) {
      SummaryCounts expect;
      for (const auto& s : snaps)
        if (s.class_label == label && s.window_index == w) {
          ++expect.subreddits;
          expect.nodes += s.graph.nodes().size();
          expect.edges += s.graph.edges().size();
        }
      CHECK(summary.at(label, w) == expect);
    }
  std::ostringstream csv;
  write_summary_csv(csv, summary);
  CHECK(csv.str().rfind("class,window,subreddits,nodes,edges\n", 0) == 0);
}

TEST_CASE("manifest round-trip and missing files") {
  testing::TempDir dir("manifest");
  Manifest m;
  m.subreddits = {{"ACMilan", ClassLabel::loyal}, {"CityPorn", ClassLabel::vagrant}};
  m.windows = {{1, {"2014-02", "2014-03"}}, {2, {"2014-04", "2014-05"}}};
  write_manifest(dir.path() / "m.ini", m);
  const auto back = read_manifest(dir.path() / "m.ini");
  CHECK(back.subreddits == m.subreddits);
  REQUIRE(back.windows.size() == 2);
  CHECK(back.windows[1].months == m.windows[1].months);

  try {
    read_manifest(dir.path() / "nope.ini");
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("nope.ini") != std::string::npos);
  }
  CHECK_THROWS(load_month(dir.path(), "ACMilan", "2014-02", ClassLabel::loyal));
}
