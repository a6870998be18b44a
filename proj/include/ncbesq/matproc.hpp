#pragma once

#include "ncbesq/linalg.hpp"
#include "ncbesq/rng.hpp"

#include <cstdint>
#include <vector>

namespace ncbesq::matproc {

using linalg::CMatrix;

// K x N matrix with independent entries w + i w~, each part N(0, t).
CMatrix sample_matrix_bm(std::size_t K, std::size_t N, double t, Stream& stream);

// K x N matrix with sqrt(mu_i) on the diagonal, so that eval(M*M) = mu.
CMatrix drift_matrix(std::size_t K, const std::vector<double>& mu);

// Ascending eigenvalues of (B_t + t M)^* (B_t + t M).
std::vector<double> eval_matrix_process(const CMatrix& M, double t, Stream& stream);

// Haar-distributed n x n unitary: Gram-Schmidt QR of a Ginibre sample, R with positive diagonal.
CMatrix haar_unitary(std::size_t n, Stream& stream);

struct McCheck {
    double mc_estimate;
    double closed_form;
    double std_err;
};

double hciz_rect_closed(const CMatrix& A, const CMatrix& C);
McCheck hciz_rect_check(const CMatrix& A, const CMatrix& C, std::size_t samples, std::uint64_t seed);

double bgw_closed(const CMatrix& C);
McCheck bgw_check(const CMatrix& C, std::size_t samples, std::uint64_t seed);

// H_M(X) = det(e_i^{(j-1)/2} I_{j-1}(sqrt(e_i))) / Delta_K(e), e = eval(M X M^*), e distinct.
double h_function(const CMatrix& M, const CMatrix& X);

}  // namespace ncbesq::matproc
