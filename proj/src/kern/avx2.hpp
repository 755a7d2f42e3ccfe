#pragma once

#include <cstddef>

// AVX2+FMA kernel variants, compiled in their own TU with -mavx2 -mfma.
// Callers must check cpu_has_avx2() first.
namespace pulse::kern::avx2 {

float dot(const float* a, const float* b, size_t n);
void axpy(float alpha, const float* x, float* y, size_t n);
void scale(float* x, size_t n, float alpha);
void mul_acc(const float* a, const float* b, float* c, size_t n);
float sum(const float* x, size_t n);
float sumsq(const float* x, size_t n);
void softmax_row(float* x, size_t n);
void gelu(const float* x, float* y, size_t n);
void gelu_backward(const float* x, const float* dy, float* dx, size_t n);
void gemm_nt(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
             bool accumulate);
void gemm_nn(const float* a, const float* b, float* c, size_t m, size_t n, size_t k,
             bool accumulate);
void gemm_tn_acc(const float* a, const float* b, float* c, size_t m, size_t n, size_t k);
void norm_affine(const float* x, const float* g, const float* b, float mean, float rstd,
                 float* y, size_t n);
void adam_step(float* w, float* m, float* v, const float* grad, size_t n, float lr, float beta1,
               float beta2, float eps, float bias1, float bias2);

}  // namespace pulse::kern::avx2
