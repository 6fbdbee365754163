// SPDX-License-Identifier: Apache-2.0
//
// rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
// Copyright (C) 2026 The rislocate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rislocate/solvers.hpp"

#include "rislocate/beamspace.hpp"
#include "rislocate/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <string>

namespace rislocate {

namespace {

// Index of the largest entry; the first one wins on ties.
Eigen::Index argmax(const RVec& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (v(i) > v(best)) best = i;
    return best;
}

double relative_change(const RVec& previous, const RVec& current) {
    const double top = current.maxCoeff();
    if (!(top > 0.0)) return 0.0;
    return (current - previous).cwiseAbs().maxCoeff() / top;
}

void prune(RVec& gamma) {
    const double floor = 1e-10 * gamma.maxCoeff();
    for (Eigen::Index j = 0; j < gamma.size(); ++j)
        if (gamma(j) < floor) gamma(j) = 0.0;
}

// Gamma^{1/2} (I + Gamma^{1/2} G Gamma^{1/2})^{-1} Gamma^{1/2}: the posterior
// covariance written so that pruned (zero) hyperparameters stay exact.
CMat posterior_covariance(const RVec& gamma, const CMat& gram) {
    const RVec root = gamma.cwiseSqrt();
    const Eigen::Index n = gamma.size();
    const CMat inner = CMat::Identity(n, n) + root.asDiagonal() * gram * root.asDiagonal();
    return root.asDiagonal() * hermitian_inverse(inner) * root.asDiagonal();
}

SparseEstimate empty_estimate(const MmvProblem& problem, Algorithm algorithm) {
    const Eigen::Index n_ris = problem.sensing.cols();
    const Eigen::Index n = problem.observations.cols();
    SparseEstimate est;
    est.channel_matrix = CMat::Zero(n_ris, n);
    est.hyperparameters = RVec::Zero(n_ris);
    est.correlation = CMat::Identity(n, n) / std::sqrt(static_cast<double>(n));
    est.converged = true;
    est.flop_estimate = flop_estimate(algorithm, static_cast<std::uint64_t>(n_ris), static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(problem.observations.rows()));
    return est;
}

double mean_noise(const MmvProblem& problem) { return problem.noise_cov_diag.mean(); }

} // namespace

void MmvProblem::validate() const {
    if (observations.rows() < 1 || observations.cols() < 1) throw ShapeError("MMV observations must be non-empty");
    if (sensing.rows() != observations.rows() || sensing.cols() < 1)
        throw ShapeError("MMV sensing matrix must have one row per observation block");
    if (noise_cov_diag.size() != observations.rows())
        throw ShapeError("MMV noise covariance diagonal must have one entry per block");
    for (Eigen::Index t = 0; t < noise_cov_diag.size(); ++t)
        if (!(noise_cov_diag(t) > 0.0) || !std::isfinite(noise_cov_diag(t)))
            throw InvalidArgument("MMV noise variances must be positive and finite");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
    if (!(convergence_tol >= 0.0)) throw InvalidArgument("convergence tolerance must be non-negative");
}

DcsSompResult dcs_somp(std::span<const CVec> observations, std::span<const CMat> operators, int n_paths, int n_bs,
                       int n_ue, double spacing) {
    if (observations.empty() || observations.size() != operators.size())
        throw ShapeError("dcs_somp: need one operator per observation vector");
    const Eigen::Index cols = operators.front().cols();
    if (cols != static_cast<Eigen::Index>(n_bs) * n_ue)
        throw ShapeError("dcs_somp: operator columns must equal n_bs * n_ue");
    for (std::size_t n = 0; n < operators.size(); ++n)
        if (operators[n].cols() != cols || operators[n].rows() != observations[n].size())
            throw ShapeError("dcs_somp: operator and observation sizes disagree");
    if (n_paths < 1 || n_paths > cols) throw InvalidArgument("dcs_somp: n_paths outside [1, columns]");

    const std::size_t n_sub = observations.size();
    std::vector<CVec> residual(observations.begin(), observations.end());
    std::vector<RVec> norms;
    std::vector<CMat> basis(n_sub);
    double initial = 0.0;
    for (std::size_t n = 0; n < n_sub; ++n) {
        norms.push_back(operators[n].colwise().norm().transpose());
        basis[n].resize(operators[n].rows(), 0);
        initial += residual[n].squaredNorm();
    }
    if (!(initial > 0.0)) throw ResidualCollapseError("dcs_somp: observations are identically zero");

    DcsSompResult out;
    for (int k = 0; k < n_paths; ++k) {
        double energy = 0.0;
        for (const auto& r : residual) energy += r.squaredNorm();
        if (energy <= 1e-24 * initial)
            throw ResidualCollapseError("dcs_somp: residual vanished after " + std::to_string(k) + " of " +
                                        std::to_string(n_paths) + " atoms");

        RVec score = RVec::Zero(cols);
        for (std::size_t n = 0; n < n_sub; ++n) {
            const RVec corr = (operators[n].adjoint() * residual[n]).cwiseAbs();
            for (Eigen::Index i = 0; i < cols; ++i)
                if (norms[n](i) > 0.0) score(i) += corr(i) / norms[n](i);
        }
        const Eigen::Index pick = argmax(score);

        for (std::size_t n = 0; n < n_sub; ++n) {
            const CVec s = operators[n].col(pick);
            CVec rho = s;
            if (basis[n].cols() > 0) rho -= basis[n] * (basis[n].adjoint() * s);
            const double len = rho.norm();
            if (!(len > 1e-12 * s.norm()))
                throw ResidualCollapseError("dcs_somp: selected atom is linearly dependent on earlier atoms");
            const CVec q = rho / len;
            basis[n].conservativeResize(Eigen::NoChange, basis[n].cols() + 1);
            basis[n].col(basis[n].cols() - 1) = q;
            residual[n] -= q * q.dot(residual[n]);
        }

        out.atoms.push_back(pick);
        const int b = static_cast<int>(pick / n_ue) + 1;
        const int a = static_cast<int>(pick % n_ue) + 1;
        out.bs_index.push_back(b);
        out.ue_index.push_back(a);
        out.bs_angles.push_back(grid_to_angle(b, n_bs, spacing));
        out.ue_angles.push_back(grid_to_angle(a, n_ue, spacing));
    }
    double energy = 0.0;
    for (const auto& r : residual) energy += r.squaredNorm();
    out.residual_norm = std::sqrt(energy);
    return out;
}

SparseEstimate tmsbl(const MmvProblem& problem) {
    problem.validate();
    if (problem.observations.norm() == 0.0) return empty_estimate(problem, Algorithm::Tmsbl);

    const CMat& psi = problem.sensing;
    const CMat& y = problem.observations;
    const Eigen::Index n_ris = psi.cols();
    const Eigen::Index n = y.cols();
    const RVec r_inv = problem.noise_cov_diag.cwiseInverse();
    const CMat weighted = psi.adjoint() * r_inv.asDiagonal();
    const CMat gram = weighted * psi;
    const CMat projected = weighted * y;

    SparseEstimate est;
    est.flop_estimate = flop_estimate(Algorithm::Tmsbl, static_cast<std::uint64_t>(n_ris),
                                      static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(y.rows()));
    RVec gamma = RVec::Ones(n_ris);
    CMat m = CMat::Identity(n, n);

    for (int iter = 1; iter <= problem.max_iterations; ++iter) {
        const CMat sigma = posterior_covariance(gamma, gram);
        const CMat h = sigma * projected;
        const CMat m_inv = hermitian_inverse(m);

        RVec next = RVec::Zero(n_ris);
        for (Eigen::Index j = 0; j < n_ris; ++j) {
            if (gamma(j) == 0.0) continue;
            const CVec x = h.row(j).transpose();
            next(j) = sigma(j, j).real() + x.dot(m_inv * x).real() / static_cast<double>(n);
        }
        prune(next);

        CMat m_tilde = kTmsblKappa * CMat::Identity(n, n);
        for (Eigen::Index j = 0; j < n_ris; ++j) {
            if (next(j) == 0.0) continue;
            const CVec x = h.row(j).transpose();
            m_tilde += (x * x.adjoint()) / next(j);
        }
        m_tilde = 0.5 * (m_tilde + m_tilde.adjoint());
        m = m_tilde / m_tilde.norm();

        est.channel_matrix = h;
        est.residual_history.push_back((y - psi * h).norm());
        est.iterations_used = iter;
        const double change = relative_change(gamma, next);
        gamma = next;
        if (change < problem.convergence_tol) {
            est.converged = true;
            break;
        }
    }
    est.hyperparameters = gamma;
    est.correlation = m;
    return est;
}

SparseEstimate gsbl(const MmvProblem& problem) {
    problem.validate();
    if (problem.observations.norm() == 0.0) return empty_estimate(problem, Algorithm::Gsbl);

    const CMat& psi = problem.sensing;
    const Eigen::Index n_ris = psi.cols();
    const Eigen::Index n = problem.observations.cols();
    const Eigen::Index dim = n_ris * n;

    // y = vec(Y^T): blocks of N subcarriers, one block per training block.
    const CMat y_t = problem.observations.transpose();
    const CVec y = Eigen::Map<const CVec>(y_t.data(), y_t.size());
    const CMat psi_hat = Eigen::kroneckerProduct(psi, CMat::Identity(n, n));
    const RVec r_inv = Eigen::kroneckerProduct(problem.noise_cov_diag.cwiseInverse(), RVec::Ones(n));
    const CMat weighted = psi_hat.adjoint() * r_inv.asDiagonal();
    const CMat gram = weighted * psi_hat;
    const CVec projected = weighted * y;

    SparseEstimate est;
    est.flop_estimate = flop_estimate(Algorithm::Gsbl, static_cast<std::uint64_t>(n_ris),
                                      static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(psi.rows()));
    RVec gamma = RVec::Ones(n_ris);
    CMat m = CMat::Identity(n, n);

    for (int iter = 1; iter <= problem.max_iterations; ++iter) {
        const CMat m_root = hermitian_sqrt(m);
        const CMat p_root = Eigen::kroneckerProduct(CMat(gamma.cwiseSqrt().cast<cd>().asDiagonal()), m_root);
        const CMat inner = CMat::Identity(dim, dim) + p_root * gram * p_root;
        const CMat sigma = p_root * hermitian_inverse(inner) * p_root;
        const CVec mu = sigma * projected;
        const CMat m_inv = hermitian_inverse(m);

        std::vector<CMat> second_moment(static_cast<std::size_t>(n_ris));
        RVec next = RVec::Zero(n_ris);
        for (Eigen::Index j = 0; j < n_ris; ++j) {
            if (gamma(j) == 0.0) continue;
            const CVec mu_j = mu.segment(j * n, n);
            auto& q = second_moment[static_cast<std::size_t>(j)];
            q = sigma.block(j * n, j * n, n, n) + mu_j * mu_j.adjoint();
            next(j) = (m_inv * q).trace().real() / static_cast<double>(n);
        }
        prune(next);

        CMat m_next = CMat::Zero(n, n);
        for (Eigen::Index j = 0; j < n_ris; ++j) {
            if (next(j) > 0.0)
                m_next += second_moment[static_cast<std::size_t>(j)] / next(j);
            else
                m_next += m;
        }
        m_next /= static_cast<double>(n_ris);
        m = 0.5 * (m_next + m_next.adjoint());

        CMat h(n_ris, n);
        for (Eigen::Index j = 0; j < n_ris; ++j) h.row(j) = mu.segment(j * n, n).transpose();
        est.channel_matrix = h;
        est.residual_history.push_back((problem.observations - psi * h).norm());
        est.iterations_used = iter;
        const double change = relative_change(gamma, next);
        gamma = next;
        if (change < problem.convergence_tol) {
            est.converged = true;
            break;
        }
    }
    est.hyperparameters = gamma;
    est.correlation = m;
    return est;
}

CVec sbl_smv(const CVec& y, const CMat& a, double noise_var, int max_iterations, double convergence_tol) {
    if (a.rows() != y.size() || a.cols() < 1) throw ShapeError("sbl_smv: A must have one row per observation");
    if (!(noise_var >= 0.0)) throw InvalidArgument("sbl_smv: noise variance must be non-negative");
    if (max_iterations < 1) throw InvalidArgument("sbl_smv: max_iterations must be at least 1");
    const Eigen::Index k = a.cols();
    if (y.norm() == 0.0) return CVec::Zero(k);

    const double floor = 1e-10 * y.squaredNorm() / static_cast<double>(y.size());
    const double noise = std::max(noise_var, floor);
    const CMat gram = a.adjoint() * a / noise;
    const CVec projected = a.adjoint() * y / noise;

    RVec gamma = RVec::Ones(k);
    CVec mu = CVec::Zero(k);
    for (int iter = 0; iter < max_iterations; ++iter) {
        const CMat sigma = posterior_covariance(gamma, gram);
        mu = sigma * projected;
        RVec next(k);
        for (Eigen::Index j = 0; j < k; ++j)
            next(j) = gamma(j) == 0.0 ? 0.0 : sigma(j, j).real() + std::norm(mu(j));
        prune(next);
        const double change = relative_change(gamma, next);
        gamma = next;
        if (change < convergence_tol) break;
    }
    return mu;
}

OmpResult omp(const CVec& y, const CMat& a, int n_atoms) {
    if (a.rows() != y.size() || a.cols() < 1) throw ShapeError("omp: A must have one row per observation");
    if (n_atoms < 1 || n_atoms > a.cols()) throw InvalidArgument("omp: n_atoms outside [1, columns]");
    const RVec norms = a.colwise().norm().transpose();
    const double start = y.norm();

    OmpResult out;
    CVec residual = y;
    std::vector<bool> used(static_cast<std::size_t>(a.cols()), false);
    for (int k = 0; k < n_atoms; ++k) {
        if (!(residual.norm() > 1e-12 * start))
            throw ResidualCollapseError("omp: residual vanished after " + std::to_string(k) + " atoms");
        const RVec corr = (a.adjoint() * residual).cwiseAbs();
        Eigen::Index pick = -1;
        double best = -1.0;
        for (Eigen::Index i = 0; i < a.cols(); ++i) {
            if (used[static_cast<std::size_t>(i)] || !(norms(i) > 0.0)) continue;
            const double score = corr(i) / norms(i);
            if (score > best) {
                best = score;
                pick = i;
            }
        }
        if (pick < 0) throw ResidualCollapseError("omp: no usable atoms left");
        used[static_cast<std::size_t>(pick)] = true;
        out.indices.push_back(pick);

        CMat sub(a.rows(), static_cast<Eigen::Index>(out.indices.size()));
        for (std::size_t i = 0; i < out.indices.size(); ++i)
            sub.col(static_cast<Eigen::Index>(i)) = a.col(out.indices[i]);
        out.coefficients = sub.colPivHouseholderQr().solve(y);
        residual = y - sub * out.coefficients;
    }
    return out;
}

SparseEstimate omp_mmv(const MmvProblem& problem, int n_atoms) {
    problem.validate();
    SparseEstimate est = empty_estimate(problem, Algorithm::DcsSomp);
    est.flop_estimate = 0;
    est.iterations_used = n_atoms;
    for (Eigen::Index n = 0; n < problem.observations.cols(); ++n) {
        const CVec y = problem.observations.col(n);
        if (y.norm() == 0.0) continue;
        const auto fit = omp(y, problem.sensing, n_atoms);
        for (std::size_t i = 0; i < fit.indices.size(); ++i)
            est.channel_matrix(fit.indices[i], n) = fit.coefficients(static_cast<Eigen::Index>(i));
    }
    est.residual_history.push_back((problem.observations - problem.sensing * est.channel_matrix).norm());
    return est;
}

SparseEstimate sbl_mmv(const MmvProblem& problem) {
    problem.validate();
    SparseEstimate est = empty_estimate(problem, Algorithm::Sbl);
    const double noise = mean_noise(problem);
    for (Eigen::Index n = 0; n < problem.observations.cols(); ++n)
        est.channel_matrix.col(n) = sbl_smv(problem.observations.col(n), problem.sensing, noise,
                                            problem.max_iterations, problem.convergence_tol);
    est.hyperparameters = est.channel_matrix.rowwise().squaredNorm() / static_cast<double>(est.channel_matrix.cols());
    est.residual_history.push_back((problem.observations - problem.sensing * est.channel_matrix).norm());
    return est;
}

SparseEstimate amp_mmv(const MmvProblem& problem, const AmpOptions& options) {
    problem.validate();
    const Eigen::Index j_blocks = problem.sensing.rows();
    if (j_blocks < 2) throw InvalidArgument("amp_mmv: needs at least two observation blocks");
    if (options.iterations < 1 || !(options.damping > 0.0) || options.damping > 1.0)
        throw InvalidArgument("amp_mmv: invalid iteration count or damping");
    SparseEstimate est = empty_estimate(problem, Algorithm::Amp);
    est.converged = false;
    if (problem.observations.norm() == 0.0) {
        est.converged = true;
        return est;
    }

    // Column-normalized sensing: unit-modulus phases give columns of norm ~sqrt(J).
    const double scale = 1.0 / std::sqrt(static_cast<double>(j_blocks));
    const CMat a = problem.sensing * scale;
    const CMat& y = problem.observations;
    const Eigen::Index n_ris = a.cols();
    const double ratio = static_cast<double>(n_ris) / static_cast<double>(j_blocks);

    CMat x = CMat::Zero(n_ris, y.cols());
    CMat z = y;
    CMat best = x;
    double best_residual = y.norm();
    std::vector<double> history;

    for (int iter = 1; iter <= options.iterations; ++iter) {
        CMat x_new(n_ris, y.cols());
        CMat z_new(y.rows(), y.cols());
        for (Eigen::Index n = 0; n < y.cols(); ++n) {
            const CVec r = x.col(n) + a.adjoint() * z.col(n);
            const double tau = options.threshold * z.col(n).norm() / std::sqrt(static_cast<double>(j_blocks));
            double divergence = 0.0;
            for (Eigen::Index j = 0; j < n_ris; ++j) {
                const double mag = std::abs(r(j));
                if (mag > tau && mag > 0.0) {
                    x_new(j, n) = r(j) * ((mag - tau) / mag);
                    divergence += 1.0 - tau / (2.0 * mag);
                } else {
                    x_new(j, n) = 0.0;
                }
            }
            divergence /= static_cast<double>(n_ris);
            z_new.col(n) = y.col(n) - a * x_new.col(n) + ratio * divergence * z.col(n);
        }
        const CMat x_prev = x;
        x = options.damping * x_new + (1.0 - options.damping) * x;
        z = options.damping * z_new + (1.0 - options.damping) * z;

        const double residual = (y - a * x).norm();
        history.push_back(residual);
        est.residual_history.push_back(residual);
        est.iterations_used = iter;
        if (!std::isfinite(residual)) break;
        if (residual < best_residual) {
            best_residual = residual;
            best = x;
        }
        if (history.size() > 5 && residual > 10.0 * history[history.size() - 6]) break;
        if ((x - x_prev).norm() <= problem.convergence_tol * x.norm()) {
            est.converged = true;
            best = x;
            break;
        }
    }
    est.channel_matrix = best * scale;
    est.hyperparameters = est.channel_matrix.rowwise().squaredNorm() / static_cast<double>(y.cols());
    return est;
}

std::string_view algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::DcsSomp: return "DCS-SOMP";
    case Algorithm::Sbl: return "SBL";
    case Algorithm::Gsbl: return "GSBL";
    case Algorithm::Tmsbl: return "TMSBL";
    case Algorithm::Amp: return "AMP";
    }
    return "unknown";
}

std::uint64_t flop_estimate(Algorithm algorithm, std::uint64_t n_ris, std::uint64_t n_subcarriers,
                            std::uint64_t n_blocks) {
    const std::uint64_t r = n_ris, n = n_subcarriers, j = n_blocks;
    switch (algorithm) {
    case Algorithm::DcsSomp: return n * r * r + j * j * j;
    case Algorithm::Sbl: return n * r * r * r + n * j * j * j;
    case Algorithm::Gsbl: return n * n * n * r * r * r + j * j * j;
    case Algorithm::Tmsbl: return r * r * r + j * j * j + r * n * n * n;
    case Algorithm::Amp: return r * n * j;
    }
    return 0;
}

} // namespace rislocate
