#include <doctest.h>

#include "dendrodist/types.hpp"

using namespace dd;

TEST_CASE("PointSet validates its invariants") {
    Matrix ok(2, 2);
    ok << 0.0, 0.0, 3.0, 4.0;
    CHECK_NOTHROW(PointSet{ok});

    Matrix one_row(1, 2);
    one_row << 0.0, 0.0;
    CHECK_THROWS_AS(PointSet{one_row}, ValidationError);

    Matrix with_nan = ok;
    with_nan(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(PointSet{with_nan}, ValidationError);

    Matrix with_inf = ok;
    with_inf(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(PointSet{with_inf}, ValidationError);

    CHECK_THROWS_AS(PointSet(ok, std::vector<std::uint32_t>{1}), ValidationError);
    const PointSet labeled(ok, std::vector<std::uint32_t>{1, 2}, "pair");
    CHECK(labeled.has_labels());
    CHECK(labeled.name() == "pair");
    CHECK(PointSet{ok}.has_labels() == false);
    CHECK_THROWS_AS(PointSet{ok}.labels(), ValidationError);
}

TEST_CASE("select_rows keeps labels with their rows") {
    Matrix m(3, 1);
    m << 1.0, 2.0, 3.0;
    const PointSet x(m, std::vector<std::uint32_t>{7, 8, 9});
    const PointSet picked = select_rows(x, {2, 0});
    CHECK(picked.points()(0, 0) == 3.0);
    CHECK(picked.points()(1, 0) == 1.0);
    CHECK(picked.labels() == std::vector<std::uint32_t>{9, 7});
    CHECK_THROWS_AS(select_rows(x, {0, 5}), ValidationError);
}

TEST_CASE("Dendrogram validates merge structure") {
    // two merges over three leaves: (0,1)@1 then (2,3)@2
    std::vector<MergeRecord> merges{{0, 1, 1.0, 2}, {2, 3, 2.0, 3}};
    const Dendrogram d(3, merges);
    CHECK(d.agglomerative_distances() == std::vector<double>{1.0, 2.0});

    SUBCASE("wrong merge count") {
        CHECK_THROWS_AS(Dendrogram(4, merges), ValidationError);
    }
    SUBCASE("decreasing heights") {
        std::vector<MergeRecord> bad{{0, 1, 2.0, 2}, {2, 3, 1.0, 3}};
        CHECK_THROWS_AS(Dendrogram(3, bad), ValidationError);
    }
    SUBCASE("cluster id reused as input") {
        std::vector<MergeRecord> bad{{0, 1, 1.0, 2}, {0, 3, 2.0, 3}};
        CHECK_THROWS_AS(Dendrogram(3, bad), ValidationError);
    }
    SUBCASE("merge references a cluster before it exists") {
        std::vector<MergeRecord> bad{{0, 4, 1.0, 2}, {1, 2, 2.0, 3}};
        CHECK_THROWS_AS(Dendrogram(3, bad), ValidationError);
    }
    SUBCASE("wrong merged size") {
        std::vector<MergeRecord> bad{{0, 1, 1.0, 3}, {2, 3, 2.0, 3}};
        CHECK_THROWS_AS(Dendrogram(3, bad), ValidationError);
    }
    SUBCASE("negative height") {
        std::vector<MergeRecord> bad{{0, 1, -1.0, 2}, {2, 3, 2.0, 3}};
        CHECK_THROWS_AS(Dendrogram(3, bad), ValidationError);
    }
}

TEST_CASE("UltrametricMatrix enforces the strong triangle inequality") {
    Matrix u(3, 3);
    u << 0, 2, 4,
         2, 0, 4,
         4, 4, 0;
    CHECK_NOTHROW(UltrametricMatrix(u).validate());

    Matrix violating(3, 3);
    violating << 0, 1, 9,
                 1, 0, 1,
                 9, 1, 0; // u(0,2) > max(u(0,1), u(1,2))
    CHECK_THROWS_AS(UltrametricMatrix{violating}, ValidationError);

    Matrix asymmetric = u;
    asymmetric(0, 1) = 3.0;
    CHECK_THROWS_AS(UltrametricMatrix{asymmetric}, ValidationError);

    Matrix bad_diagonal = u;
    bad_diagonal(1, 1) = 0.5;
    CHECK_THROWS_AS(UltrametricMatrix{bad_diagonal}, ValidationError);
}

TEST_CASE("GaussianFit rejects asymmetric covariance") {
    Vector mean(2);
    mean << 0.0, 0.0;
    Matrix cov(2, 2);
    cov << 1.0, 0.5, 0.5, 2.0;
    CHECK_NOTHROW(GaussianFit(mean, cov, 10));

    Matrix skew = cov;
    skew(0, 1) = 0.5 + 1e-6;
    CHECK_THROWS_AS(GaussianFit(mean, skew, 10), ValidationError);

    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(GaussianFit(mean, rect, 10), ValidationError);
}

TEST_CASE("MetricReport enforces value bounds per metric") {
    CHECK_NOTHROW(MetricReport("dd_mean", 0.0));
    CHECK_NOTHROW(MetricReport("inception_score", 1.0));
    CHECK_THROWS_AS(MetricReport("dd_mean", -0.1), ValidationError);
    CHECK_THROWS_AS(MetricReport("inception_score", 0.9), ValidationError);
    CHECK_THROWS_AS(MetricReport("unknown", 1.0), ValidationError);
    CHECK_THROWS_AS(MetricReport("fid", std::numeric_limits<double>::quiet_NaN()),
                    ValidationError);
}
