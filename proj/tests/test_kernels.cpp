#include <cmath>
#include <vector>

#include "doctest.h"
#include "pulse/kern/kernels.hpp"
#include "pulse/util/rng.hpp"

using namespace pulse;
using kern::Backend;

namespace {

std::vector<float> random_vec(size_t n, CounterRng& rng, double lo = -2.0, double hi = 2.0) {
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.uniform(lo, hi));
    return v;
}

// abs + rel tolerance; the abs term absorbs cancellation near zero when
// operands are unit scale
bool close_rel(double a, double b, double tol, double abs_tol = 1e-5) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + abs_tol;
}

// Runs fn under both backends and hands the two results to check.
template <class Fn, class Check>
void compare_backends(Fn&& fn, Check&& check) {
    if (!kern::cpu_has_avx2()) return;  // nothing to compare on this host
    const Backend saved = kern::active_backend();
    kern::set_backend(Backend::scalar);
    auto ref_result = fn();
    kern::set_backend(Backend::avx2);
    auto simd_result = fn();
    kern::set_backend(saved);
    check(ref_result, simd_result);
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("dot equivalence across sizes including tails") {
    CounterRng rng(7);
    for (size_t n : {1u, 2u, 7u, 8u, 9u, 31u, 32u, 33u, 100u, 128u, 1000u}) {
        auto a = random_vec(n, rng);
        auto b = random_vec(n, rng);
        compare_backends([&] { return kern::dot(a.data(), b.data(), n); },
                         [&](float r, float s) { CHECK(close_rel(r, s, 1e-5)); });
    }
}

TEST_CASE("axpy, scale, mul_acc equivalence") {
    CounterRng rng(11);
    for (size_t n : {1u, 5u, 8u, 17u, 64u, 129u}) {
        auto x = random_vec(n, rng);
        auto y0 = random_vec(n, rng);
        compare_backends(
            [&] {
                auto y = y0;
                kern::axpy(0.37f, x.data(), y.data(), n);
                kern::scale(y.data(), n, 1.21f);
                auto c = y0;
                kern::mul_acc(x.data(), y.data(), c.data(), n);
                return c;
            },
            [&](const std::vector<float>& r, const std::vector<float>& s) {
                for (size_t i = 0; i < n; ++i) CHECK(close_rel(r[i], s[i], 1e-5));
            });
    }
}

TEST_CASE("reductions equivalence") {
    CounterRng rng(13);
    for (size_t n : {1u, 9u, 40u, 333u}) {
        auto x = random_vec(n, rng);
        compare_backends([&] { return kern::sum(x.data(), n); },
                         [&](float r, float s) { CHECK(close_rel(r, s, 1e-5)); });
        compare_backends([&] { return kern::sumsq(x.data(), n); },
                         [&](float r, float s) { CHECK(close_rel(r, s, 1e-5)); });
    }
}

TEST_CASE("softmax rows sum to one and match scalar") {
    CounterRng rng(17);
    for (size_t n : {1u, 2u, 9u, 50u, 99u, 256u}) {
        auto x = random_vec(n, rng, -8.0, 8.0);
        compare_backends(
            [&] {
                auto y = x;
                kern::softmax_row(y.data(), n);
                return y;
            },
            [&](const std::vector<float>& r, const std::vector<float>& s) {
                for (size_t i = 0; i < n; ++i) CHECK(close_rel(r[i], s[i], 2e-5, 1e-7));
            });
        auto y = x;
        kern::softmax_row(y.data(), n);
        double total = 0;
        for (float v : y) {
            CHECK(v >= 0.0f);
            total += v;
        }
        CHECK(std::abs(total - 1.0) < 1e-6);
    }
}

TEST_CASE("softmax handles large negative logits") {
    std::vector<float> x = {-1000.0f, -1000.0f, -1000.0f};
    kern::softmax_row(x.data(), x.size());
    for (float v : x) CHECK(close_rel(v, 1.0f / 3.0f, 1e-5));
}

TEST_CASE("gelu matches scalar reference and known values") {
    CounterRng rng(19);
    auto x = random_vec(300, rng, -6.0, 6.0);
    compare_backends(
        [&] {
            std::vector<float> y(x.size());
            kern::gelu(x.data(), y.data(), x.size());
            return y;
        },
        [&](const std::vector<float>& r, const std::vector<float>& s) {
            for (size_t i = 0; i < x.size(); ++i)
                CHECK(std::abs(r[i] - s[i]) < 2e-5 * std::max(1.0f, std::abs(r[i])));
        });
    // gelu(0)=0, gelu(large)~identity, gelu(-large)~0
    std::vector<float> probe = {0.0f, 6.0f, -6.0f};
    std::vector<float> out(3);
    kern::gelu(probe.data(), out.data(), 3);
    CHECK(out[0] == 0.0f);
    CHECK(std::abs(out[1] - 6.0f) < 1e-3);
    CHECK(std::abs(out[2]) < 1e-3);
}

TEST_CASE("gelu_backward matches finite differences of gelu") {
    std::vector<float> x = {-3.0f, -1.0f, -0.2f, 0.0f, 0.4f, 1.3f, 2.7f};
    std::vector<float> dy(x.size(), 1.0f);
    std::vector<float> dx(x.size(), 0.0f);
    kern::gelu_backward(x.data(), dy.data(), dx.data(), x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-3;
        const double up = kern::ref::gelu_one(static_cast<double>(x[i]) + h);
        const double dn = kern::ref::gelu_one(static_cast<double>(x[i]) - h);
        const double fd = (up - dn) / (2 * h);
        CHECK(std::abs(dx[i] - fd) < 2e-3);
    }
}

TEST_CASE("gemm variants match scalar reference") {
    CounterRng rng(23);
    struct Dims {
        size_t m, n, k;
    };
    for (auto [m, n, k] : {Dims{1, 1, 1}, Dims{3, 5, 7}, Dims{4, 4, 8}, Dims{7, 9, 33},
                           Dims{16, 13, 128}, Dims{5, 128, 64}}) {
        auto a = random_vec(m * k, rng);
        auto bt = random_vec(n * k, rng);
        auto b = random_vec(k * n, rng);
        auto at = random_vec(k * m, rng);
        auto c0 = random_vec(m * n, rng);

        compare_backends(
            [&] {
                auto c = c0;
                kern::gemm_nt(a.data(), bt.data(), c.data(), m, n, k, false);
                kern::gemm_nn(a.data(), b.data(), c.data(), m, n, k, true);
                kern::gemm_tn_acc(at.data(), b.data(), c.data(), m, n, k);
                return c;
            },
            [&](const std::vector<float>& r, const std::vector<float>& s) {
                for (size_t i = 0; i < r.size(); ++i) CHECK(close_rel(r[i], s[i], 5e-5));
            });
    }
}

TEST_CASE("gemm_nt against hand matmul") {
    // 2x3 times 2x3^T: C[i][j] = sum_k A[i][k] * B[j][k]
    std::vector<float> a = {1, 2, 3, 4, 5, 6};
    std::vector<float> b = {1, 0, 1, -1, 1, 0};
    std::vector<float> c(4, 99.0f);
    kern::gemm_nt(a.data(), b.data(), c.data(), 2, 2, 3, false);
    CHECK(c[0] == doctest::Approx(4.0f));
    CHECK(c[1] == doctest::Approx(1.0f));
    CHECK(c[2] == doctest::Approx(10.0f));
    CHECK(c[3] == doctest::Approx(1.0f));
}

TEST_CASE("norm_affine and adam_step equivalence") {
    CounterRng rng(29);
    const size_t n = 131;
    auto x = random_vec(n, rng);
    auto g = random_vec(n, rng, 0.5, 1.5);
    auto b = random_vec(n, rng);
    compare_backends(
        [&] {
            std::vector<float> y(n);
            kern::norm_affine(x.data(), g.data(), b.data(), 0.13f, 1.7f, y.data(), n);
            return y;
        },
        [&](const std::vector<float>& r, const std::vector<float>& s) {
            for (size_t i = 0; i < n; ++i) CHECK(close_rel(r[i], s[i], 1e-5));
        });

    auto w0 = random_vec(n, rng);
    auto m0 = random_vec(n, rng, -0.1, 0.1);
    auto v0 = random_vec(n, rng, 0.0, 0.1);
    auto grad = random_vec(n, rng);
    compare_backends(
        [&] {
            auto w = w0;
            auto m = m0;
            auto v = v0;
            kern::adam_step(w.data(), m.data(), v.data(), grad.data(), n, 0.01f, 0.9f,
                            0.999f, 1e-8f, 0.19f, 0.002f);
            return w;
        },
        [&](const std::vector<float>& r, const std::vector<float>& s) {
            for (size_t i = 0; i < n; ++i) CHECK(close_rel(r[i], s[i], 2e-5));
        });
}

TEST_SUITE_END();
