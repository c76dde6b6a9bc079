#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rulemine/data/csv.hpp"
#include "rulemine/data/encode.hpp"
#include "rulemine/data/fetch.hpp"
#include "rulemine/data/imputer.hpp"
#include "rulemine/data/quantizer.hpp"
#include "rulemine/data/schema.hpp"
#include "rulemine/data/synthetic.hpp"
#include "rulemine/error.hpp"
#include "test_util.hpp"

using namespace rulemine;
using namespace rulemine::data;

namespace {

FeatureSchema small_schema() {
  return FeatureSchema::parse(
      "target y no yes\n"
      "feature a continuous\n"
      "feature c categorical red green blue\n");
}

Dataset parse(const std::string& text, const FeatureSchema& schema) {
  std::istringstream in(text);
  return parse_csv(in, schema);
}

}  // namespace

TEST_SUITE("schema") {
  TEST_CASE("text round trip") {
    auto s = small_schema();
    CHECK(FeatureSchema::parse(s.to_text()) == s);
    CHECK(s.n_features() == 2);
    CHECK(s.n_classes() == 2);
    CHECK(*s.category_index(1, "blue") == 2);
    CHECK(!s.category_index(1, "pink"));
  }

  TEST_CASE("invariants are enforced") {
    CHECK_THROWS_AS(FeatureSchema::parse("target y a b\nfeature x continuous\nfeature x continuous\n"),
                    ConfigError);
    CHECK_THROWS_AS(FeatureSchema::parse("target y a b\nfeature c categorical only\n"), ConfigError);
    CHECK_THROWS_AS(FeatureSchema::parse("target y a\nfeature x continuous\n"), ConfigError);
    CHECK_THROWS_AS(FeatureSchema::parse("feature x continuous\n"), ConfigError);
  }
}

TEST_SUITE("csv") {
  TEST_CASE("missing token marks a cell and keeps the row") {
    auto ds = parse("a,c,y\n1.5,red,no\n?,blue,yes\n3,?,no\n", small_schema());
    REQUIRE(ds.n_samples() == 3);
    CHECK(ds.value(0, 0) == 1.5);
    CHECK(is_missing(ds.value(1, 0)));
    CHECK(ds.value(1, 1) == 2.0);
    CHECK(is_missing(ds.value(2, 1)));
    CHECK(ds.missing_count() == 2);
    CHECK(ds.label(1) == 1);
  }

  TEST_CASE("columns are matched by header name") {
    auto ds = parse("y,c,a\nyes,green,4\n", small_schema());
    CHECK(ds.value(0, 0) == 4.0);
    CHECK(ds.value(0, 1) == 1.0);
    CHECK(ds.label(0) == 1);
  }

  TEST_CASE("malformed input is rejected") {
    auto s = small_schema();
    CHECK_THROWS_AS(parse("a,c,y\n", s), DataError);
    CHECK_THROWS_AS(parse("a,c,y\n1,red\n", s), DataError);
    CHECK_THROWS_AS(parse("a,c,y\nx,red,no\n", s), DataError);
    CHECK_THROWS_AS(parse("a,c,y\n1,pink,no\n", s), DataError);
    CHECK_THROWS_AS(parse("a,c,y\n1,red,maybe\n", s), DataError);
    CHECK_THROWS_AS(parse("a,y\n1,no\n", s), DataError);
  }

  TEST_CASE("write then read is the identity") {
    auto ds = parse("a,c,y\n0.1,red,no\n?,blue,yes\n1e-300,?,no\n", small_schema());
    std::ostringstream out;
    write_csv(ds, out);
    auto back = parse(out.str(), small_schema());
    CHECK(back.same_cells(ds));
  }

  TEST_CASE("bundled WDBC has the documented class balance") {
    auto ds = test::load_bundled("wdbc");
    CHECK(ds.n_samples() == 569);
    CHECK(ds.n_features() == 30);
    auto counts = ds.class_counts();
    CHECK(counts[0] == 212);
    CHECK(counts[1] == 357);
  }

  TEST_CASE("bundled balance scale follows its labeling formula") {
    auto ds = test::load_bundled("balance-scale");
    REQUIRE(ds.n_samples() == 625);
    const auto& labels = ds.schema().target().labels;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
      auto v = [&](std::size_t f) { return std::stoi(ds.schema().feature(f).categories.at(static_cast<std::size_t>(ds.value(i, f)))); };
      int left = v(0) * v(1), right = v(2) * v(3);
      std::string want = left > right ? "L" : (left < right ? "R" : "B");
      CHECK(labels[ds.label(i)] == want);
    }
  }
}

TEST_SUITE("imputer") {
  TEST_CASE("modal category and median fills") {
    auto ds = parse("a,c,y\n1,red,no\n2,red,yes\n4,green,no\n?,?,yes\n", small_schema());
    auto imp = Imputer::fit(ds);
    CHECK(imp.fill_values()[0] == 2.0);
    CHECK(imp.fill_values()[1] == 0.0);
    auto out = imp.apply(ds);
    CHECK(out.missing_count() == 0);
    CHECK(out.value(3, 0) == 2.0);
    CHECK(out.value(3, 1) == 0.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t f = 0; f < 2; ++f) CHECK(out.value(i, f) == ds.value(i, f));
  }

  TEST_CASE("complete data passes through unchanged") {
    auto ds = parse("a,c,y\n1,red,no\n2,blue,yes\n", small_schema());
    CHECK(Imputer::fit(ds).apply(ds).same_cells(ds));
  }

  TEST_CASE("a feature with no observed value is an error") {
    auto ds = parse("a,c,y\n?,red,no\n?,blue,yes\n", small_schema());
    CHECK_THROWS_AS(Imputer::fit(ds), DataError);
  }
}

TEST_SUITE("quantizer") {
  TEST_CASE("quantile matches linear interpolation") {
    std::vector<double> v = {1, 2, 4, 8};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 8.0);
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(3.0));
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  }

  TEST_CASE("ten distinct equally frequent values give one value per bin") {
    std::vector<double> col;
    std::vector<int> labels;
    for (int rep = 0; rep < 3; ++rep)
      for (int v = 1; v <= 10; ++v) {
        col.push_back(v);
        labels.push_back(v % 2);
      }
    Dataset ds(test::continuous_schema(1), {col}, labels);
    auto bm = BinMap::fit(ds, 10);
    CHECK(bm.feature(0).level_count() == 10);
    for (int v = 1; v <= 10; ++v) CHECK(bm.feature(0).level_of(v) == v - 1);
  }

  TEST_CASE("constant column collapses to a single bin") {
    Dataset ds(test::continuous_schema(1), {{3, 3, 3, 3}}, {0, 1, 0, 1});
    auto bm = BinMap::fit(ds, 10);
    CHECK(bm.feature(0).level_count() == 1);
    CHECK(bm.apply(ds).level(2, 0) == 0);
  }

  TEST_CASE("out-of-range values clamp to the boundary bins") {
    Dataset ds(test::continuous_schema(1), {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}},
               {0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
    auto bm = BinMap::fit(ds, 5);
    const auto& fb = bm.feature(0);
    CHECK(fb.level_of(-100) == 0);
    CHECK(fb.level_of(100) == static_cast<int>(fb.level_count()) - 1);
    CHECK(fb.level_of(9) == static_cast<int>(fb.level_count()) - 1);
  }

  TEST_CASE("bins partition the fit range and re-binning is the identity") {
    auto ds = Imputer::fit(test::load_bundled("wdbc")).apply(test::load_bundled("wdbc"));
    auto bm = BinMap::fit(ds, 10);
    auto binned = bm.apply(ds);
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
      const auto& fb = bm.feature(f);
      REQUIRE(fb.level_count() >= 1);
      REQUIRE(fb.level_count() <= 10);
      for (std::size_t b = 0; b + 1 < fb.edges.size(); ++b) CHECK(fb.edges[b] < fb.edges[b + 1]);
      auto col = ds.column(f);
      CHECK(fb.edges.front() == *std::min_element(col.begin(), col.end()));
      CHECK(fb.edges.back() == *std::max_element(col.begin(), col.end()));
      for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        int level = binned.level(i, f);
        double x = ds.value(i, f);
        CHECK(fb.lower(level) <= x);
        if (level + 1 < static_cast<int>(fb.level_count()))
          CHECK(x < fb.upper(level));
        else
          CHECK(x <= fb.upper(level));
        CHECK(fb.level_of(fb.lower(level)) == level);
      }
    }
    CHECK(bm.apply(ds).level(5, 3) == binned.level(5, 3));
  }

  TEST_CASE("categorical features map to their own levels") {
    auto ds = parse("a,c,y\n1,red,no\n2,blue,yes\n3,green,no\n", small_schema());
    auto bm = BinMap::fit(ds, 10);
    CHECK(bm.feature(1).level_count() == 3);
    auto b = bm.apply(ds);
    CHECK(b.level(1, 1) == 2);
    CHECK(b.level(2, 1) == 1);
  }
}

TEST_SUITE("one_hot") {
  TEST_CASE("indicator blocks") {
    auto ds = parse("a,c,y\n1,red,no\n2,blue,yes\n3,green,no\n4,blue,no\n", small_schema());
    auto b = BinMap::fit(ds, 2).apply(ds);
    auto X = one_hot(b);
    REQUIRE(X.cols() == b.level_count(0) + 3);
    CHECK(X(1, b.level_count(0) + 2) == 1.0);
    CHECK(X(1, b.level_count(0) + 0) == 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
      double sum = 0;
      for (std::size_t j = 0; j < X.cols(); ++j) sum += X(i, j);
      CHECK(sum == 2.0);
    }
    CHECK(one_hot_names(b).size() == X.cols());
  }

  TEST_CASE("categorical-only mode keeps one column per continuous feature") {
    auto ds = parse("a,c,y\n1,red,no\n2,blue,yes\n3,green,no\n4,blue,no\n", small_schema());
    auto b = BinMap::fit(ds, 2).apply(ds);
    auto X = one_hot(b, OneHotMode::CategoricalOnly);
    REQUIRE(X.cols() == 4);
    CHECK(X(3, 0) == b.level(3, 0) + 1);
    CHECK(X(3, 3) == 1.0);
  }
}

TEST_SUITE("synthetic") {
  TEST_CASE("labeling clauses") {
    CHECK(label_synthetic(0.3, 0.9, 1, static_cast<int>(Color::Red)) == 0);
    CHECK(label_synthetic(0.3, 0.8, 0, static_cast<int>(Color::Red)) == 1);
    CHECK(label_synthetic(0.3, 0.4, 0, static_cast<int>(Color::Red)) == 0);
    CHECK(label_synthetic(0.9, 0.5, 1, static_cast<int>(Color::Blue)) == 2);
    CHECK(label_synthetic(0.9, 0.5, 0, static_cast<int>(Color::White)) == 0);
    CHECK(label_synthetic(0.9, 0.1, 0, static_cast<int>(Color::White)) == 1);
    CHECK(label_synthetic(0.4, 0.1, 0, static_cast<int>(Color::White)) == 1);
    CHECK(label_synthetic(0.6, 0.1, 1, static_cast<int>(Color::White)) == 0);
    CHECK(label_synthetic(0.6, 0.1, 1, static_cast<int>(Color::Blue)) == 0);
    CHECK_THROWS(label_synthetic(1.5, 0.1, 1, 0));
    CHECK_THROWS(label_synthetic(0.5, 0.1, 2, 0));
  }

  TEST_CASE("the map is total over a grid of the domain") {
    for (double x1 = 0; x1 <= 1.0; x1 += 0.05)
      for (double x2 = 0; x2 <= 1.0; x2 += 0.05)
        for (int x3 = 0; x3 < 2; ++x3)
          for (int x4 = 0; x4 < 3; ++x4) {
            int y = label_synthetic(x1, x2, x3, x4);
            CHECK((y >= 0 && y <= 2));
          }
  }

  TEST_CASE("noiseless samples follow the rule system") {
    auto ds = generate_synthetic(500, 0.0, 11);
    CHECK(ds.n_samples() == 500);
    CHECK(test::disagreements(ds) == 0);
  }

  TEST_CASE("noise rate is respected") {
    auto ds = generate_synthetic(500, 0.12, 11);
    double frac = static_cast<double>(test::disagreements(ds)) / 500.0;
    CHECK(frac >= 0.07);
    CHECK(frac <= 0.17);
  }

  TEST_CASE("same seed gives the same data") {
    CHECK(generate_synthetic(200, 0.1, 5).same_cells(generate_synthetic(200, 0.1, 5)));
    CHECK(!generate_synthetic(200, 0.1, 5).same_cells(generate_synthetic(200, 0.1, 6)));
    CHECK_THROWS_AS(generate_synthetic(10, 1.0, 1), ConfigError);
  }
}

TEST_SUITE("fetch") {
  TEST_CASE("file URLs, caching and checksum failures") {
    test::TempDir tmp;
    const std::string payload = "a,y\n1,no\n";
    {
      std::ofstream(tmp.path / "src.csv") << payload;
      std::ofstream(tmp.path / "manifest.txt")
          << "# comment\nsmall file:src.csv " << sha256_hex(payload) << " small.csv\n";
    }
    auto cache = tmp.path / "cache";
    auto first = fetch_datasets(tmp.path / "manifest.txt", cache);
    REQUIRE(first.size() == 1);
    CHECK(first[0].status == FetchStatus::Downloaded);
    CHECK(std::filesystem::exists(cache / "small.csv"));

    int calls = 0;
    Downloader counting = [&](const std::string& url, const std::filesystem::path& base) {
      ++calls;
      return default_download(url, base);
    };
    auto second = fetch_datasets(tmp.path / "manifest.txt", cache, counting);
    CHECK(second[0].status == FetchStatus::Cached);
    CHECK(calls == 0);

    std::ofstream(cache / "small.csv") << "tampered";
    auto third = fetch_datasets(tmp.path / "manifest.txt", cache, counting);
    CHECK(third[0].status == FetchStatus::Downloaded);
    CHECK(calls == 1);

    Downloader wrong = [](const std::string&, const std::filesystem::path&) {
      return std::string("not the payload");
    };
    std::filesystem::remove(cache / "small.csv");
    try {
      fetch_datasets(tmp.path / "manifest.txt", cache, wrong);
      FAIL("expected a checksum error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("small") != std::string::npos);
    }
  }

  TEST_CASE("empty manifest gives an empty report") {
    test::TempDir tmp;
    std::ofstream(tmp.path / "m.txt") << "# nothing\n";
    CHECK(fetch_datasets(tmp.path / "m.txt", tmp.path / "cache").empty());
  }

  TEST_CASE("bundled manifest checksums match the bundled files") {
    test::TempDir tmp;
    auto report = fetch_datasets(std::filesystem::path(RULEMINE_TEST_DATA_DIR) / "manifest.txt",
                                 tmp.path);
    CHECK(report.size() == 4);
  }

  TEST_CASE("sha256 of a known string") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }
}
