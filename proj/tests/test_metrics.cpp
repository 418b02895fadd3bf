#include <doctest.h>

#include <cmath>

#include "dendrodist/clustering.hpp"
#include "dendrodist/metrics.hpp"
#include "dendrodist/synthdata.hpp"
#include "test_helpers.hpp"

using namespace dd;
using dd::testing::points_1d;
using dd::testing::random_points;
using dd::testing::random_sorted_distances;

TEST_CASE("dendrogram distance closed forms") {
    const std::vector<double> a{2.0, 4.0, 6.0};
    CHECK(dendrogram_distance(a, a) == 0.0);
    CHECK(dendrogram_distance(a, {2.0, 4.0, 8.0}) == doctest::Approx(2.0 / 3.0));
    CHECK(dendrogram_distance(a, {1.0, 1.0, 1.0}) == doctest::Approx(3.0));

    CHECK(dendrogram_distance_max(a, a) == 0.0);
    CHECK(dendrogram_distance_max(a, {2.0, 4.0, 8.0}) == 2.0);
    CHECK(dendrogram_distance_max(a, {1.0, 1.0, 1.0}) == 5.0);
}

TEST_CASE("dendrogram distance rejects bad input") {
    const std::vector<double> a{1.0, 2.0};
    CHECK_THROWS_WITH_AS(dendrogram_distance(a, {1.0, 2.0, 3.0}),
                         doctest::Contains("subsample_larger"), AlignmentError);
    CHECK_THROWS_AS(dendrogram_distance({2.0, 1.0}, a), ValidationError);
    CHECK_THROWS_AS(dendrogram_distance({-1.0, 2.0}, a), ValidationError);
    CHECK_THROWS_AS(dendrogram_distance({}, {}), ValidationError);
    CHECK_THROWS_AS(
        dendrogram_distance({1.0, std::numeric_limits<double>::infinity()}, a),
        ValidationError);
}

TEST_CASE("dd metric axioms on random sorted vectors") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 1 + static_cast<std::size_t>(rng.uniform01() * 40.0);
        const auto a = random_sorted_distances(rng, len);
        const auto b = random_sorted_distances(rng, len);
        const auto c = random_sorted_distances(rng, len);

        CHECK(dendrogram_distance(a, b) == dendrogram_distance(b, a));
        CHECK(dendrogram_distance_max(a, b) == dendrogram_distance_max(b, a));
        CHECK(dendrogram_distance(a, b) >= 0.0);
        CHECK(dendrogram_distance(a, a) == 0.0);
        CHECK(dendrogram_distance_max(a, b) >=
              dendrogram_distance(a, b) - 1e-12);
        CHECK(dendrogram_distance(a, c) <=
              dendrogram_distance(a, b) + dendrogram_distance(b, c) + 1e-12);
        CHECK(dendrogram_distance_max(a, c) <=
              dendrogram_distance_max(a, b) + dendrogram_distance_max(b, c) + 1e-12);
    }
}

TEST_CASE("dd_from_pointsets composes clustering and the distance") {
    SUBCASE("identical sets give zero") {
        Rng rng(55);
        const PointSet x(random_points(rng, 30, 2));
        const MetricReport report = dd_from_pointsets(x, x);
        CHECK(report.metric_name == "dd_mean");
        CHECK(report.value == 0.0);
        CHECK(report.aux.at("dd_max").get<double>() == 0.0);
    }
    SUBCASE("collinear example") {
        const MetricReport report =
            dd_from_pointsets(points_1d({0.0, 2.0, 6.0, 12.0}),
                              points_1d({0.0, 1.0, 2.0, 3.0}));
        CHECK(report.value == doctest::Approx(3.0));
    }
    SUBCASE("subsampling the larger set") {
        const ModeLayout layout = ring_layout();
        const PointSet data = drop_modes(sample_dataset(layout, 100, 1),
                                         {0, 1, 2, 3, 4, 5, 6}, 200, 11);
        const PointSet model = drop_modes(sample_dataset(layout, 100, 2),
                                          {0, 1, 2, 3, 4, 5, 6}, 300, 12);
        DdOptions opts;
        opts.align = AlignStrategy::subsample_larger;
        opts.subsample_seed = 99;
        const MetricReport report = dd_from_pointsets(data, model, opts);
        CHECK(report.aux.at("n_data").get<std::size_t>() == 200);
        CHECK(report.aux.at("n_model").get<std::size_t>() == 300);
        CHECK(report.aux.at("n_used").get<std::size_t>() == 200);
        CHECK(report.aux.at("subsampled").get<bool>());
    }
    SUBCASE("errors") {
        Rng rng(56);
        const PointSet a(random_points(rng, 10, 2));
        const PointSet b(random_points(rng, 10, 3));
        CHECK_THROWS_WITH_AS(dd_from_pointsets(a, b), doctest::Contains("d = 3"),
                             DimensionError);
        const PointSet c(random_points(rng, 12, 2));
        CHECK_THROWS_AS(dd_from_pointsets(a, c), AlignmentError);
        DdOptions no_seed;
        no_seed.align = AlignStrategy::subsample_larger;
        CHECK_THROWS_AS(dd_from_pointsets(a, c, no_seed), ValidationError);
    }
}

TEST_CASE("translating one set does not change the dendrogram distance") {
    Rng rng(57);
    const Matrix base = random_points(rng, 40, 2);
    const Matrix other = random_points(rng, 40, 2);
    const double before =
        dd_from_pointsets(PointSet(base), PointSet(other)).value;
    Matrix shifted = other;
    shifted.rowwise() += Eigen::RowVector2d(250.0, -40.0);
    const double after =
        dd_from_pointsets(PointSet(base), PointSet(shifted)).value;
    CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, before));
}

TEST_CASE("applying one rigid motion to both sets keeps dd fixed") {
    Rng rng(58);
    const Matrix a = random_points(rng, 35, 2);
    const Matrix b = random_points(rng, 35, 2);
    const double before = dd_from_pointsets(PointSet(a), PointSet(b)).value;

    const double theta = 1.2;
    Matrix rotation(2, 2);
    rotation << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const Eigen::RowVector2d shift(-4.0, 9.5);
    Matrix ta = a * rotation.transpose();
    ta.rowwise() += shift;
    Matrix tb = b * rotation.transpose();
    tb.rowwise() += shift;
    const double after = dd_from_pointsets(PointSet(ta), PointSet(tb)).value;
    CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, before));
}

TEST_CASE("fit_gaussian closed forms") {
    SUBCASE("two points on a line") {
        const GaussianFit fit = fit_gaussian(points_1d({0.0, 2.0}));
        CHECK(fit.mean()(0) == 1.0);
        CHECK(fit.covariance()(0, 0) == 2.0);
        CHECK(fit.sample_count() == 2);
    }
    SUBCASE("identical points give zero covariance") {
        Matrix m(3, 2);
        m << 4.0, -1.0, 4.0, -1.0, 4.0, -1.0;
        const GaussianFit fit = fit_gaussian(PointSet(m));
        CHECK(fit.covariance().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("covariance is exactly symmetric") {
        Rng rng(59);
        const GaussianFit fit = fit_gaussian(PointSet(random_points(rng, 50, 6)));
        CHECK((fit.covariance() - fit.covariance().transpose()).cwiseAbs().maxCoeff() ==
              0.0);
    }
}

TEST_CASE("matrix_sqrt_psd") {
    SUBCASE("identity and diagonal") {
        CHECK(matrix_sqrt_psd(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
        Matrix diag = Matrix::Zero(2, 2);
        diag(0, 0) = 4.0;
        diag(1, 1) = 9.0;
        const Matrix root = matrix_sqrt_psd(diag);
        CHECK(root(0, 0) == doctest::Approx(2.0));
        CHECK(root(1, 1) == doctest::Approx(3.0));
        CHECK(std::abs(root(0, 1)) < 1e-12);
    }
    SUBCASE("reconstruction on random PSD matrices") {
        Rng rng(60);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform01() * 15.0);
            const Matrix a = random_points(rng, d, d, 1.0);
            const Matrix c = a.transpose() * a;
            const Matrix s = matrix_sqrt_psd(c);
            CHECK(((s * s - c).norm() / c.norm()) < 1e-8);
        }
    }
    SUBCASE("rejects non-PSD input naming the eigenvalue") {
        Matrix negative = Matrix::Identity(2, 2);
        negative(1, 1) = -1.0;
        CHECK_THROWS_WITH_AS(matrix_sqrt_psd(negative), doctest::Contains("-1.0"),
                             NotPsdError);
    }
    SUBCASE("rejects asymmetric input") {
        Matrix skew(2, 2);
        skew << 1.0, 0.5, -0.5, 1.0;
        CHECK_THROWS_AS(matrix_sqrt_psd(skew), ValidationError);
    }
}

namespace {

GaussianFit scalar_fit(double mean, double variance) {
    Vector m(1);
    m << mean;
    Matrix c(1, 1);
    c << variance;
    return GaussianFit(m, c, 2);
}

} // namespace

TEST_CASE("frechet distance closed forms") {
    CHECK(frechet_distance(scalar_fit(0, 1), scalar_fit(0, 1)) == 0.0);
    CHECK(frechet_distance(scalar_fit(0, 1), scalar_fit(1, 1)) == doctest::Approx(1.0));
    CHECK(frechet_distance(scalar_fit(0, 1), scalar_fit(0, 4)) == doctest::Approx(1.0));

    Vector mean3 = Vector::Zero(3);
    CHECK_THROWS_AS(
        frechet_distance(scalar_fit(0, 1), GaussianFit(mean3, Matrix::Identity(3, 3), 2)),
        DimensionError);
}

TEST_CASE("frechet distance is symmetric and shifts by the squared translation") {
    Rng rng(61);
    const PointSet x(random_points(rng, 80, 3));
    const PointSet y(random_points(rng, 80, 3));
    const GaussianFit fx = fit_gaussian(x);
    const GaussianFit fy = fit_gaussian(y);
    const double xy = frechet_distance(fx, fy);
    const double yx = frechet_distance(fy, fx);
    CHECK(xy == doctest::Approx(yx).epsilon(1e-9));

    // equal covariances: translating one set moves the metric by |t|^2
    Matrix shifted = x.points();
    shifted.rowwise() += Eigen::RowVector3d(2.0, -1.0, 0.5);
    const double fid = frechet_distance(fx, fit_gaussian(PointSet(shifted)));
    CHECK(fid == doctest::Approx(2.0 * 2.0 + 1.0 + 0.25).epsilon(1e-9));
}

TEST_CASE("inception score closed forms") {
    SUBCASE("uniform rows") {
        const Matrix probs = Matrix::Constant(6, 5, 0.2);
        const InceptionScore is = inception_score(probs, 1);
        CHECK(is.mean == doctest::Approx(1.0));
        CHECK(is.stddev == 0.0);
    }
    SUBCASE("balanced one-hot rows over 10 classes") {
        Matrix probs = Matrix::Zero(10, 10);
        for (int i = 0; i < 10; ++i) {
            probs(i, i) = 1.0;
        }
        const InceptionScore is = inception_score(probs, 1);
        CHECK(is.mean == doctest::Approx(10.0));
        CHECK(is.stddev == 0.0);
    }
    SUBCASE("all mass on one class") {
        Matrix probs = Matrix::Zero(8, 4);
        probs.col(2).setOnes();
        const InceptionScore is = inception_score(probs, 1);
        CHECK(is.mean == doctest::Approx(1.0));
    }
    SUBCASE("multiple splits partition the rows") {
        Matrix probs = Matrix::Zero(10, 10);
        for (int i = 0; i < 10; ++i) {
            probs(i, i) = 1.0;
        }
        const InceptionScore is = inception_score(probs, 5);
        // each chunk holds two distinct one-hot rows
        CHECK(is.mean == doctest::Approx(2.0));
        CHECK(is.stddev == doctest::Approx(0.0));
    }
}

TEST_CASE("inception score input validation") {
    Matrix probs = Matrix::Constant(4, 2, 0.5);
    CHECK_THROWS_AS(inception_score(probs, 0), ValidationError);
    CHECK_THROWS_AS(inception_score(probs, 5), ValidationError);

    Matrix unnormalized = probs;
    unnormalized(2, 0) = 0.3;
    CHECK_THROWS_WITH_AS(inception_score(unnormalized, 1), doctest::Contains("row 2"),
                         ValidationError);

    Matrix out_of_range = probs;
    out_of_range(1, 0) = 1.5;
    out_of_range(1, 1) = -0.5;
    CHECK_THROWS_AS(inception_score(out_of_range, 1), ValidationError);
}

TEST_CASE("inception score stays within [1, classes]") {
    Rng rng(62);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 30.0);
        const std::size_t classes = 2 + static_cast<std::size_t>(rng.uniform01() * 10.0);
        Matrix probs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(classes));
        for (Eigen::Index i = 0; i < probs.rows(); ++i) {
            double sum = 0.0;
            for (Eigen::Index j = 0; j < probs.cols(); ++j) {
                probs(i, j) = rng.uniform(0.0, 1.0) + 1e-3;
                sum += probs(i, j);
            }
            probs.row(i) /= sum;
        }
        const std::size_t splits = 1 + static_cast<std::size_t>(rng.uniform01() * 3.0);
        const InceptionScore is = inception_score(probs, splits);
        CHECK(is.mean >= 1.0 - 1e-9);
        CHECK(is.mean <= static_cast<double>(classes) + 1e-9);
    }
}
