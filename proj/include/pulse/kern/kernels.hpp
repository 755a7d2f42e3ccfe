#pragma once

#include <cstddef>
#include <type_traits>

#include "pulse/kern/ref.hpp"

// Runtime-dispatched float kernels. The backend is picked once at startup
// (AVX2+FMA when the CPU has it, scalar otherwise) and can be forced for
// equivalence tests via set_backend or the PULSE_BACKEND env var
// ("scalar"/"avx2"). Double always takes the scalar reference path.
namespace pulse::kern {

enum class Backend { scalar, avx2 };

Backend active_backend();
void set_backend(Backend b);
bool cpu_has_avx2();
const char* backend_name(Backend b);

namespace detail {
float dot_f32(const float* a, const float* b, size_t n);
void axpy_f32(float alpha, const float* x, float* y, size_t n);
void scale_f32(float* x, size_t n, float alpha);
void mul_acc_f32(const float* a, const float* b, float* c, size_t n);
float sum_f32(const float* x, size_t n);
float sumsq_f32(const float* x, size_t n);
void softmax_row_f32(float* x, size_t n);
void gelu_f32(const float* x, float* y, size_t n);
void gelu_backward_f32(const float* x, const float* dy, float* dx, size_t n);
void gemm_nt_f32(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
                 bool accumulate);
void gemm_nn_f32(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
                 bool accumulate);
void gemm_tn_acc_f32(const float* a, const float* b, float* c, size_t m, size_t n, size_t k);
void norm_affine_f32(const float* x, const float* g, const float* b, float mean, float rstd,
                     float* y, size_t n);
void adam_step_f32(float* w, float* m, float* v, const float* grad, size_t n, float lr,
                   float beta1, float beta2, float eps, float bias1, float bias2);
}  // namespace detail

template <class T>
T dot(const T* a, const T* b, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        return detail::dot_f32(a, b, n);
    else
        return ref::dot(a, b, n);
}

template <class T>
void axpy(T alpha, const T* x, T* y, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        detail::axpy_f32(alpha, x, y, n);
    else
        ref::axpy(alpha, x, y, n);
}

template <class T>
void scale(T* x, size_t n, T alpha) {
    if constexpr (std::is_same_v<T, float>)
        detail::scale_f32(x, n, alpha);
    else
        ref::scale(x, n, alpha);
}

template <class T>
void mul_acc(const T* a, const T* b, T* c, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        detail::mul_acc_f32(a, b, c, n);
    else
        ref::mul_acc(a, b, c, n);
}

template <class T>
T sum(const T* x, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        return detail::sum_f32(x, n);
    else
        return ref::sum(x, n);
}

template <class T>
T sumsq(const T* x, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        return detail::sumsq_f32(x, n);
    else
        return ref::sumsq(x, n);
}

template <class T>
void softmax_row(T* x, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        detail::softmax_row_f32(x, n);
    else
        ref::softmax_row(x, n);
}

template <class T>
void gelu(const T* x, T* y, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        detail::gelu_f32(x, y, n);
    else
        ref::gelu(x, y, n);
}

template <class T>
void gelu_backward(const T* x, const T* dy, T* dx, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        detail::gelu_backward_f32(x, dy, dx, n);
    else
        ref::gelu_backward(x, dy, dx, n);
}

template <class T>
void gemm_nt(const T* a, const T* b, T* c, size_t m, size_t n, size_t k, bool accumulate) {
    if constexpr (std::is_same_v<T, float>)
        detail::gemm_nt_f32(a, b, c, m, n, k, accumulate);
    else
        ref::gemm_nt(a, b, c, m, n, k, accumulate);
}

template <class T>
void gemm_nn(const T* a, const T* b, T* c, size_t m, size_t n, size_t k, bool accumulate) {
    if constexpr (std::is_same_v<T, float>)
        detail::gemm_nn_f32(a, b, c, m, n, k, accumulate);
    else
        ref::gemm_nn(a, b, c, m, n, k, accumulate);
}

template <class T>
void gemm_tn_acc(const T* a, const T* b, T* c, size_t m, size_t n, size_t k) {
    if constexpr (std::is_same_v<T, float>)
        detail::gemm_tn_acc_f32(a, b, c, m, n, k);
    else
        ref::gemm_tn_acc(a, b, c, m, n, k);
}

template <class T>
void norm_affine(const T* x, const T* g, const T* b, T mean, T rstd, T* y, size_t n) {
    if constexpr (std::is_same_v<T, float>)
        detail::norm_affine_f32(x, g, b, mean, rstd, y, n);
    else
        ref::norm_affine(x, g, b, mean, rstd, y, n);
}

template <class T>
void adam_step(T* w, T* m, T* v, const T* grad, size_t n, T lr, T beta1, T beta2, T eps,
               T bias1, T bias2) {
    if constexpr (std::is_same_v<T, float>)
        detail::adam_step_f32(w, m, v, grad, n, lr, beta1, beta2, eps, bias1, bias2);
    else
        ref::adam_step(w, m, v, grad, n, lr, beta1, beta2, eps, bias1, bias2);
}

}  // namespace pulse::kern
