#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace perfectst {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// max_{ij} |M M^H - I|_{ij}
double unitarity_defect(const CMatrix& m);

CMatrix kronecker(const CMatrix& a, const CMatrix& b);

}  // namespace perfectst
