#include "avx2.hpp"

#include <cmath>
#include <cstdint>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace pulse::kern::avx2 {

namespace {

inline float hsum(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
    lo = _mm_add_ss(lo, _mm_movehdup_ps(lo));
    return _mm_cvtss_f32(lo);
}

inline float hmax(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_max_ps(lo, hi);
    lo = _mm_max_ps(lo, _mm_movehl_ps(lo, lo));
    lo = _mm_max_ss(lo, _mm_movehdup_ps(lo));
    return _mm_cvtss_f32(lo);
}

// Cephes-style expf, ~1 ulp over the clamped range.
inline __m256 exp256(__m256 x) {
    const __m256 hi = _mm256_set1_ps(88.3762626647949f);
    const __m256 lo = _mm256_set1_ps(-88.3762626647949f);
    const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
    const __m256 c1 = _mm256_set1_ps(0.693359375f);
    const __m256 c2 = _mm256_set1_ps(-2.12194440e-4f);
    const __m256 p0 = _mm256_set1_ps(1.9875691500e-4f);
    const __m256 p1 = _mm256_set1_ps(1.3981999507e-3f);
    const __m256 p2 = _mm256_set1_ps(8.3334519073e-3f);
    const __m256 p3 = _mm256_set1_ps(4.1665795894e-2f);
    const __m256 p4 = _mm256_set1_ps(1.6666665459e-1f);
    const __m256 p5 = _mm256_set1_ps(5.0000001201e-1f);
    const __m256 one = _mm256_set1_ps(1.0f);

    x = _mm256_min_ps(x, hi);
    x = _mm256_max_ps(x, lo);

    __m256 fx = _mm256_fmadd_ps(x, log2e, _mm256_set1_ps(0.5f));
    fx = _mm256_floor_ps(fx);
    x = _mm256_fnmadd_ps(fx, c1, x);
    x = _mm256_fnmadd_ps(fx, c2, x);

    const __m256 z = _mm256_mul_ps(x, x);
    __m256 y = p0;
    y = _mm256_fmadd_ps(y, x, p1);
    y = _mm256_fmadd_ps(y, x, p2);
    y = _mm256_fmadd_ps(y, x, p3);
    y = _mm256_fmadd_ps(y, x, p4);
    y = _mm256_fmadd_ps(y, x, p5);
    y = _mm256_fmadd_ps(y, z, _mm256_add_ps(x, one));

    const __m256i n = _mm256_cvtps_epi32(fx);
    const __m256i pow2n =
        _mm256_slli_epi32(_mm256_add_epi32(n, _mm256_set1_epi32(127)), 23);
    return _mm256_mul_ps(y, _mm256_castsi256_ps(pow2n));
}

inline float exp1(float x) {
    alignas(32) float buf[8] = {x, 0, 0, 0, 0, 0, 0, 0};
    const __m256 r = exp256(_mm256_load_ps(buf));
    _mm256_store_ps(buf, r);
    return buf[0];
}

}  // namespace

float dot(const float* a, const float* b, size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    __m256 acc2 = _mm256_setzero_ps();
    __m256 acc3 = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
        acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
        acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 16), _mm256_loadu_ps(b + i + 16), acc2);
        acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 24), _mm256_loadu_ps(b + i + 24), acc3);
    }
    for (; i + 8 <= n; i += 8)
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc0 = _mm256_add_ps(_mm256_add_ps(acc0, acc1), _mm256_add_ps(acc2, acc3));
    float r = hsum(acc0);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

void axpy(float alpha, const float* x, float* y, size_t n) {
    const __m256 va = _mm256_set1_ps(alpha);
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i),
                                                _mm256_loadu_ps(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(float* x, size_t n, float alpha) {
    const __m256 va = _mm256_set1_ps(alpha);
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(x + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

void mul_acc(const float* a, const float* b, float* c, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(c + i, _mm256_fmadd_ps(_mm256_loadu_ps(a + i),
                                                _mm256_loadu_ps(b + i),
                                                _mm256_loadu_ps(c + i)));
    for (; i < n; ++i) c[i] += a[i] * b[i];
}

float sum(const float* x, size_t n) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
    float r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

float sumsq(const float* x, size_t n) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(x + i);
        acc = _mm256_fmadd_ps(v, v, acc);
    }
    float r = hsum(acc);
    for (; i < n; ++i) r += x[i] * x[i];
    return r;
}

void softmax_row(float* x, size_t n) {
    float m;
    {
        size_t i = 0;
        __m256 vm = _mm256_set1_ps(-3.4e38f);
        for (; i + 8 <= n; i += 8) vm = _mm256_max_ps(vm, _mm256_loadu_ps(x + i));
        m = hmax(vm);
        for (; i < n; ++i)
            if (x[i] > m) m = x[i];
    }
    const __m256 vm = _mm256_set1_ps(m);
    __m256 vz = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 e = exp256(_mm256_sub_ps(_mm256_loadu_ps(x + i), vm));
        _mm256_storeu_ps(x + i, e);
        vz = _mm256_add_ps(vz, e);
    }
    float z = hsum(vz);
    for (; i < n; ++i) {
        x[i] = exp1(x[i] - m);
        z += x[i];
    }
    scale(x, n, 1.0f / z);
}

namespace {

// t = tanh(z) through exp, shared by gelu forward/backward
inline __m256 tanh_via_exp(__m256 z) {
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 e = exp256(_mm256_mul_ps(_mm256_set1_ps(-2.0f), z));
    return _mm256_div_ps(_mm256_sub_ps(one, e), _mm256_add_ps(one, e));
}

constexpr float kGeluK = 0.7978845608028654f;
constexpr float kGeluC = 0.044715f;

}  // namespace

void gelu(const float* x, float* y, size_t n) {
    const __m256 k = _mm256_set1_ps(kGeluK);
    const __m256 c = _mm256_set1_ps(kGeluC);
    const __m256 half = _mm256_set1_ps(0.5f);
    const __m256 one = _mm256_set1_ps(1.0f);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(x + i);
        const __m256 v3 = _mm256_mul_ps(_mm256_mul_ps(v, v), v);
        const __m256 z = _mm256_mul_ps(k, _mm256_fmadd_ps(c, v3, v));
        const __m256 t = tanh_via_exp(z);
        _mm256_storeu_ps(y + i,
                         _mm256_mul_ps(_mm256_mul_ps(half, v), _mm256_add_ps(one, t)));
    }
    for (; i < n; ++i) {
        const float v = x[i];
        const float z = kGeluK * (v + kGeluC * v * v * v);
        const float e = exp1(-2.0f * z);
        const float t = (1.0f - e) / (1.0f + e);
        y[i] = 0.5f * v * (1.0f + t);
    }
}

void gelu_backward(const float* x, const float* dy, float* dx, size_t n) {
    const __m256 k = _mm256_set1_ps(kGeluK);
    const __m256 c3 = _mm256_set1_ps(3.0f * kGeluC);
    const __m256 c = _mm256_set1_ps(kGeluC);
    const __m256 half = _mm256_set1_ps(0.5f);
    const __m256 one = _mm256_set1_ps(1.0f);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(x + i);
        const __m256 v2 = _mm256_mul_ps(v, v);
        const __m256 v3 = _mm256_mul_ps(v2, v);
        const __m256 z = _mm256_mul_ps(k, _mm256_fmadd_ps(c, v3, v));
        const __m256 t = tanh_via_exp(z);
        const __m256 du = _mm256_mul_ps(k, _mm256_fmadd_ps(c3, v2, one));
        const __m256 sech2 = _mm256_fnmadd_ps(t, t, one);
        __m256 g = _mm256_fmadd_ps(_mm256_mul_ps(_mm256_mul_ps(half, v), sech2), du,
                                   _mm256_mul_ps(half, _mm256_add_ps(one, t)));
        _mm256_storeu_ps(dx + i, _mm256_fmadd_ps(g, _mm256_loadu_ps(dy + i),
                                                 _mm256_loadu_ps(dx + i)));
    }
    for (; i < n; ++i) {
        const float v = x[i];
        const float u = kGeluK * (v + kGeluC * v * v * v);
        const float e = exp1(-2.0f * u);
        const float t = (1.0f - e) / (1.0f + e);
        const float du = kGeluK * (1.0f + 3.0f * kGeluC * v * v);
        dx[i] += (0.5f * (1.0f + t) + 0.5f * v * (1.0f - t * t) * du) * dy[i];
    }
}

void gemm_nt(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
             bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        const float* arow = a + i * k;
        float* crow = c + i * n;
        size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const float* b0 = b + (j + 0) * k;
            const float* b1 = b + (j + 1) * k;
            const float* b2 = b + (j + 2) * k;
            const float* b3 = b + (j + 3) * k;
            __m256 acc0 = _mm256_setzero_ps();
            __m256 acc1 = _mm256_setzero_ps();
            __m256 acc2 = _mm256_setzero_ps();
            __m256 acc3 = _mm256_setzero_ps();
            size_t p = 0;
            for (; p + 8 <= k; p += 8) {
                const __m256 va = _mm256_loadu_ps(arow + p);
                acc0 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b0 + p), acc0);
                acc1 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b1 + p), acc1);
                acc2 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b2 + p), acc2);
                acc3 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b3 + p), acc3);
            }
            float r0 = hsum(acc0), r1 = hsum(acc1), r2 = hsum(acc2), r3 = hsum(acc3);
            for (; p < k; ++p) {
                const float va = arow[p];
                r0 += va * b0[p];
                r1 += va * b1[p];
                r2 += va * b2[p];
                r3 += va * b3[p];
            }
            if (accumulate) {
                crow[j + 0] += r0;
                crow[j + 1] += r1;
                crow[j + 2] += r2;
                crow[j + 3] += r3;
            } else {
                crow[j + 0] = r0;
                crow[j + 1] = r1;
                crow[j + 2] = r2;
                crow[j + 3] = r3;
            }
        }
        for (; j < n; ++j) {
            const float r = dot(arow, b + j * k, k);
            crow[j] = accumulate ? crow[j] + r : r;
        }
    }
}

void gemm_nn(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
             bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        float* crow = c + i * n;
        if (!accumulate)
            for (size_t j = 0; j < n; ++j) crow[j] = 0.0f;
        const float* arow = a + i * k;
        size_t p = 0;
        // two broadcast rows at a time to cut load traffic on crow
        for (; p + 2 <= k; p += 2) {
            const __m256 va0 = _mm256_set1_ps(arow[p]);
            const __m256 va1 = _mm256_set1_ps(arow[p + 1]);
            const float* b0 = b + p * n;
            const float* b1 = b + (p + 1) * n;
            size_t j = 0;
            for (; j + 8 <= n; j += 8) {
                __m256 vc = _mm256_loadu_ps(crow + j);
                vc = _mm256_fmadd_ps(va0, _mm256_loadu_ps(b0 + j), vc);
                vc = _mm256_fmadd_ps(va1, _mm256_loadu_ps(b1 + j), vc);
                _mm256_storeu_ps(crow + j, vc);
            }
            for (; j < n; ++j) crow[j] += arow[p] * b0[j] + arow[p + 1] * b1[j];
        }
        for (; p < k; ++p) axpy(arow[p], b + p * n, crow, n);
    }
}

void gemm_tn_acc(const float* a, const float* b, float* c, size_t m, size_t n, size_t k) {
    for (size_t p = 0; p < k; ++p) {
        const float* arow = a + p * m;
        const float* brow = b + p * n;
        for (size_t i = 0; i < m; ++i) {
            const float alpha = arow[i];
            if (alpha == 0.0f) continue;
            axpy(alpha, brow, c + i * n, n);
        }
    }
}

void norm_affine(const float* x, const float* g, const float* b, float mean, float rstd,
                 float* y, size_t n) {
    const __m256 vm = _mm256_set1_ps(mean);
    const __m256 vr = _mm256_set1_ps(rstd);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 xn = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(x + i), vm), vr);
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(xn, _mm256_loadu_ps(g + i),
                                                _mm256_loadu_ps(b + i)));
    }
    for (; i < n; ++i) y[i] = (x[i] - mean) * rstd * g[i] + b[i];
}

void adam_step(float* w, float* m, float* v, const float* grad, size_t n, float lr, float beta1,
               float beta2, float eps, float bias1, float bias2) {
    const __m256 vb1 = _mm256_set1_ps(beta1);
    const __m256 vb2 = _mm256_set1_ps(beta2);
    const __m256 vib1 = _mm256_set1_ps(1.0f - beta1);
    const __m256 vib2 = _mm256_set1_ps(1.0f - beta2);
    const __m256 vlr = _mm256_set1_ps(lr);
    const __m256 veps = _mm256_set1_ps(eps);
    const __m256 vinvbias1 = _mm256_set1_ps(1.0f / bias1);
    const __m256 vinvbias2 = _mm256_set1_ps(1.0f / bias2);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 g = _mm256_loadu_ps(grad + i);
        __m256 vm = _mm256_loadu_ps(m + i);
        __m256 vv = _mm256_loadu_ps(v + i);
        vm = _mm256_fmadd_ps(vib1, g, _mm256_mul_ps(vb1, vm));
        vv = _mm256_fmadd_ps(vib2, _mm256_mul_ps(g, g), _mm256_mul_ps(vb2, vv));
        _mm256_storeu_ps(m + i, vm);
        _mm256_storeu_ps(v + i, vv);
        const __m256 mhat = _mm256_mul_ps(vm, vinvbias1);
        const __m256 vhat = _mm256_mul_ps(vv, vinvbias2);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), veps);
        const __m256 upd = _mm256_div_ps(_mm256_mul_ps(vlr, mhat), denom);
        _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), upd));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0f - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0f - beta2) * grad[i] * grad[i];
        const float mhat = m[i] / bias1;
        const float vhat = v[i] / bias2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace pulse::kern::avx2

#else  // no AVX2 at compile time: stubs are never dispatched to

#include "pulse/kern/ref.hpp"

namespace pulse::kern::avx2 {

float dot(const float* a, const float* b, size_t n) { return ref::dot(a, b, n); }
void axpy(float alpha, const float* x, float* y, size_t n) { ref::axpy(alpha, x, y, n); }
void scale(float* x, size_t n, float alpha) { ref::scale(x, n, alpha); }
void mul_acc(const float* a, const float* b, float* c, size_t n) { ref::mul_acc(a, b, c, n); }
float sum(const float* x, size_t n) { return ref::sum(x, n); }
float sumsq(const float* x, size_t n) { return ref::sumsq(x, n); }
void softmax_row(float* x, size_t n) { ref::softmax_row(x, n); }
void gelu(const float* x, float* y, size_t n) { ref::gelu(x, y, n); }
void gelu_backward(const float* x, const float* dy, float* dx, size_t n) {
    ref::gelu_backward(x, dy, dx, n);
}
void gemm_nt(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
             bool accumulate) {
    ref::gemm_nt(a, b, c, m, n, k, accumulate);
}
void gemm_nn(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
             bool accumulate) {
    ref::gemm_nn(a, b, c, m, n, k, accumulate);
}
void gemm_tn_acc(const float* a, const float* b, float* c, size_t m, size_t n, size_t k) {
    ref::gemm_tn_acc(a, b, c, m, n, k);
}
void norm_affine(const float* x, const float* g, const float* b, float mean, float rstd,
                 float* y, size_t n) {
    ref::norm_affine(x, g, b, mean, rstd, y, n);
}
void adam_step(float* w, float* m, float* v, const float* grad, size_t n, float lr, float beta1,
               float beta2, float eps, float bias1, float bias2) {
    ref::adam_step(w, m, v, grad, n, lr, beta1, beta2, eps, bias1, bias2);
}

}  // namespace pulse::kern::avx2

#endif
