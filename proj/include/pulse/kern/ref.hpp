#pragma once

#include <cmath>
#include <cstddef>

// Scalar reference kernels. These are the ground truth the SIMD variants are
// equivalence-tested against, and they double as the full-precision path:
// instantiated with double for gradient checks, with float as the fallback
// backend on hosts without AVX2.
namespace pulse::kern::ref {

template <class T>
T dot(const T* a, const T* b, size_t n) {
    T acc = 0;
    for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

template <class T>
void axpy(T alpha, const T* x, T* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <class T>
void scale(T* x, size_t n, T alpha) {
    for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

template <class T>
void mul_acc(const T* a, const T* b, T* c, size_t n) {
    for (size_t i = 0; i < n; ++i) c[i] += a[i] * b[i];
}

template <class T>
T sum(const T* x, size_t n) {
    T acc = 0;
    for (size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

template <class T>
T sumsq(const T* x, size_t n) {
    T acc = 0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

template <class T>
T max_value(const T* x, size_t n) {
    T m = x[0];
    for (size_t i = 1; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

// In-place softmax with max subtraction.
template <class T>
void softmax_row(T* x, size_t n) {
    const T m = max_value(x, n);
    T z = 0;
    for (size_t i = 0; i < n; ++i) {
        x[i] = std::exp(x[i] - m);
        z += x[i];
    }
    const T inv = T(1) / z;
    for (size_t i = 0; i < n; ++i) x[i] *= inv;
}

// tanh-form GELU. tanh is computed through exp so the AVX2 variant (which
// uses a vector exp) follows the same algebra.
template <class T>
inline T gelu_one(T x) {
    constexpr double k = 0.7978845608028654;  // sqrt(2/pi)
    const T z = T(k) * (x + T(0.044715) * x * x * x);
    const T e = std::exp(T(-2) * z);
    const T t = (T(1) - e) / (T(1) + e);
    return T(0.5) * x * (T(1) + t);
}

template <class T>
inline T gelu_grad_one(T x) {
    constexpr double k = 0.7978845608028654;
    const T u = T(k) * (x + T(0.044715) * x * x * x);
    const T e = std::exp(T(-2) * u);
    const T t = (T(1) - e) / (T(1) + e);
    const T du = T(k) * (T(1) + T(3) * T(0.044715) * x * x);
    return T(0.5) * (T(1) + t) + T(0.5) * x * (T(1) - t * t) * du;
}

template <class T>
void gelu(const T* x, T* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = gelu_one(x[i]);
}

// dx += gelu'(x) * dy
template <class T>
void gelu_backward(const T* x, const T* dy, T* dx, size_t n) {
    for (size_t i = 0; i < n; ++i) dx[i] += gelu_grad_one(x[i]) * dy[i];
}

// C[M,N] = A[M,K] * B[N,K]^T   (dot-product form; B row-major by output)
template <class T>
void gemm_nt(const T* a, const T* b, T* c, size_t m, size_t n, size_t k, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        const T* arow = a + i * k;
        T* crow = c + i * n;
        for (size_t j = 0; j < n; ++j) {
            const T v = dot(arow, b + j * k, k);
            crow[j] = accumulate ? crow[j] + v : v;
        }
    }
}

// C[M,N] = A[M,K] * B[K,N]
template <class T>
void gemm_nn(const T* a, const T* b, T* c, size_t m, size_t n, size_t k, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        T* crow = c + i * n;
        if (!accumulate)
            for (size_t j = 0; j < n; ++j) crow[j] = 0;
        const T* arow = a + i * k;
        for (size_t p = 0; p < k; ++p) {
            const T alpha = arow[p];
            if (alpha == T(0)) continue;
            axpy(alpha, b + p * n, crow, n);
        }
    }
}

// C[M,N] += A[K,M]^T * B[K,N]  (always accumulates: gradient form)
template <class T>
void gemm_tn_acc(const T* a, const T* b, T* c, size_t m, size_t n, size_t k) {
    for (size_t p = 0; p < k; ++p) {
        const T* arow = a + p * m;
        const T* brow = b + p * n;
        for (size_t i = 0; i < m; ++i) {
            const T alpha = arow[i];
            if (alpha == T(0)) continue;
            axpy(alpha, brow, c + i * n, n);
        }
    }
}

// y = (x - mean) * rstd * g + b
template <class T>
void norm_affine(const T* x, const T* g, const T* b, T mean, T rstd, T* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = (x[i] - mean) * rstd * g[i] + b[i];
}

template <class T>
void adam_step(T* w, T* m, T* v, const T* grad, size_t n, T lr, T beta1, T beta2, T eps,
               T bias1, T bias2) {
    for (size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (T(1) - beta1) * grad[i];
        v[i] = beta2 * v[i] + (T(1) - beta2) * grad[i] * grad[i];
        const T mhat = m[i] / bias1;
        const T vhat = v[i] / bias2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace pulse::kern::ref
