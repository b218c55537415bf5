// linalg.cpp

#include "bosedeph/linalg.hpp"

#include <limits>

#include <Eigen/Eigenvalues>

namespace bosedeph::linalg {

Matrix unitary_propagator(const Matrix& H, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(H));
    const Vector phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXd clip_roundoff(const Eigen::VectorXd& ev) {
    if (ev.size() == 0) return ev;
    const double floor = static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
    return ev.unaryExpr([floor](double x) { return x > floor ? x : 0.0; });
}

Matrix psd_sqrt(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho));
    const Eigen::VectorXd s = clip_roundoff(es.eigenvalues()).cwiseSqrt();
    return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_eigenvalue(const Matrix& rho) { return hermitian_eigenvalues(rho).minCoeff(); }

double hermitian_trace_norm(const Matrix& m) { return hermitian_eigenvalues(m).cwiseAbs().sum(); }

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace bosedeph::linalg
