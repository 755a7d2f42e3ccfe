#include "pulse/kern/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "avx2.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define PULSE_X86 1
#endif

namespace pulse::kern {

bool cpu_has_avx2() {
#ifdef PULSE_X86
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend pick_default() {
    if (const char* env = std::getenv("PULSE_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = pick_default();

}  // namespace

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2()) b = Backend::scalar;
    g_backend = b;
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

namespace detail {

#define PULSE_DISPATCH(call_avx2, call_ref) \
    if (g_backend == Backend::avx2) {       \
        return call_avx2;                   \
    }                                       \
    return call_ref

float dot_f32(const float* a, const float* b, size_t n) {
    PULSE_DISPATCH(avx2::dot(a, b, n), ref::dot(a, b, n));
}
void axpy_f32(float alpha, const float* x, float* y, size_t n) {
    PULSE_DISPATCH(avx2::axpy(alpha, x, y, n), ref::axpy(alpha, x, y, n));
}
void scale_f32(float* x, size_t n, float alpha) {
    PULSE_DISPATCH(avx2::scale(x, n, alpha), ref::scale(x, n, alpha));
}
void mul_acc_f32(const float* a, const float* b, float* c, size_t n) {
    PULSE_DISPATCH(avx2::mul_acc(a, b, c, n), ref::mul_acc(a, b, c, n));
}
float sum_f32(const float* x, size_t n) {
    PULSE_DISPATCH(avx2::sum(x, n), ref::sum(x, n));
}
float sumsq_f32(const float* x, size_t n) {
    PULSE_DISPATCH(avx2::sumsq(x, n), ref::sumsq(x, n));
}
void softmax_row_f32(float* x, size_t n) {
    PULSE_DISPATCH(avx2::softmax_row(x, n), ref::softmax_row(x, n));
}
void gelu_f32(const float* x, float* y, size_t n) {
    PULSE_DISPATCH(avx2::gelu(x, y, n), ref::gelu(x, y, n));
}
void gelu_backward_f32(const float* x, const float* dy, float* dx, size_t n) {
    PULSE_DISPATCH(avx2::gelu_backward(x, dy, dx, n), ref::gelu_backward(x, dy, dx, n));
}
void gemm_nt_f32(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
                 bool accumulate) {
    PULSE_DISPATCH(avx2::gemm_nt(a, b, c, m, n, k, accumulate),
                   ref::gemm_nt(a, b, c, m, n, k, accumulate));
}
void gemm_nn_f32(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
                 bool accumulate) {
    PULSE_DISPATCH(avx2::gemm_nn(a, b, c, m, n, k, accumulate),
                   ref::gemm_nn(a, b, c, m, n, k, accumulate));
}
void gemm_tn_acc_f32(const float* a, const float* b, float* c, size_t m, size_t n, size_t k) {
    PULSE_DISPATCH(avx2::gemm_tn_acc(a, b, c, m, n, k), ref::gemm_tn_acc(a, b, c, m, n, k));
}
void norm_affine_f32(const float* x, const float* g, const float* b, float mean, float rstd,
                     float* y, size_t n) {
    PULSE_DISPATCH(avx2::norm_affine(x, g, b, mean, rstd, y, n),
                   ref::norm_affine(x, g, b, mean, rstd, y, n));
}
void adam_step_f32(float* w, float* m, float* v, const float* grad, size_t n, float lr,
                   float beta1, float beta2, float eps, float bias1, float bias2) {
    PULSE_DISPATCH(avx2::adam_step(w, m, v, grad, n, lr, beta1, beta2, eps, bias1, bias2),
                   ref::adam_step(w, m, v, grad, n, lr, beta1, beta2, eps, bias1, bias2));
}

#undef PULSE_DISPATCH

}  // namespace detail
}  // namespace pulse::kern
