#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "szilard/errors.hpp"

namespace szilard {

using SparseSym = Eigen::SparseMatrix<double>;

struct LanczosOptions {
    double tol_rel = 1e-10;    // residual tolerance relative to the eigenvalue
    double weight_beta = 0.0;  // 1/J; >0 relaxes the tolerance ~e^{beta (E-E0)}
    int block = 2;             // captures multiplicity-2 clusters reliably
    int max_basis = 0;         // 0 = sized from the expected count
    int check_every = 8;       // block steps between Ritz convergence checks
    std::uint64_t seed = 0x5eed5a1cull;
};

struct LanczosResult {
    std::vector<double> eigenvalues;  // ascending, all below the cutoff
    Eigen::MatrixXd vectors;          // n x k when requested, else 0 x 0
    int block_steps = 0;
    int basis_size = 0;
    long expected_count = 0;  // inertia count of eigenvalues below the cutoff
};

namespace detail {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * (1.0 / 9007199254740992.0) - 0.5; }
};

/// Number of eigenvalues of A strictly below `shift`, by Sylvester inertia of
/// the LDL^T factorization of A - shift I. Retries with a jittered shift if
/// the unpivoted factorization hits a zero pivot.
inline long eigencount_below(const SparseSym& a, double shift) {
    const long n = a.rows();
    SparseSym identity(n, n);
    identity.setIdentity();
    double s = shift;
    for (int attempt = 0; attempt < 4; ++attempt) {
        SparseSym shifted = a - s * identity;
        Eigen::SimplicialLDLT<SparseSym> ldlt(shifted);
        if (ldlt.info() == Eigen::Success) {
            const auto& d = ldlt.vectorD();
            bool clean = true;
            long below = 0;
            for (long i = 0; i < n; ++i) {
                if (!std::isfinite(d[i]) || d[i] == 0.0) {
                    clean = false;
                    break;
                }
                if (d[i] < 0.0) ++below;
            }
            if (clean) return below;
        }
        s = shift * (1.0 + 2e-9 * double(attempt + 1));
    }
    throw SolverError("inertia factorization failed near the energy cutoff");
}

}  // namespace detail

/// Computes every eigenpair of the symmetric positive-definite sparse matrix
/// below `cutoff` by shift-invert block Lanczos at shift 0 with full
/// reorthogonalization. Completeness is certified against the LDL^T inertia
/// count at the cutoff, which also catches missed members of degenerate
/// clusters.
namespace detail {

inline void fix_vector_signs(Eigen::MatrixXd& vectors) {
    for (long j = 0; j < vectors.cols(); ++j) {
        auto col = vectors.col(j);
        col /= col.norm();
        long imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        if (col[imax] < 0.0) col = -col;
    }
}

}  // namespace detail

inline LanczosResult lanczos_below_cutoff(const SparseSym& a, double cutoff,
                                          const LanczosOptions& opts = {},
                                          bool want_vectors = false) {
    const long n = a.rows();
    LanczosResult out;
    out.expected_count = detail::eigencount_below(a, cutoff);
    if (out.expected_count == 0) return out;
    if (out.expected_count > 20000)
        throw SolverError("energy window holds " + std::to_string(out.expected_count) +
                          " levels; refusing oversized Krylov basis");

    // Shift-invert Krylov iteration pays off only when the window is a small
    // slice of the grid spectrum. Coarse grids put half of all levels under
    // E0 + C kT; solve those densely.
    const bool majority_window = 3 * out.expected_count >= n;
    if (n <= 2000 || (majority_window && n <= 5000)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(a)};
        if (eig.info() != Eigen::Success)
            throw SolverError("dense fallback eigensolve failed");
        long k = 0;
        while (k < n && eig.eigenvalues()[k] < cutoff) ++k;
        out.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + k);
        out.basis_size = int(n);
        if (want_vectors) {
            out.vectors = eig.eigenvectors().leftCols(k);
            detail::fix_vector_signs(out.vectors);
        }
        return out;
    }
    if (majority_window)
        throw SolverError("energy window covers most of the grid spectrum (" +
                          std::to_string(out.expected_count) + " of " + std::to_string(n) +
                          " levels); refine the grid or lower the cutoff");

    Eigen::SimplicialLDLT<SparseSym> inv(a);
    if (inv.info() != Eigen::Success)
        throw SolverError("LDL^T factorization of the grid Hamiltonian failed");

    const long p = std::max(1, opts.block);
    long hard_cap = std::min<long>(n, 2 * out.expected_count + 400);
    if (opts.max_basis > 0) hard_cap = std::min<long>(hard_cap, std::max<long>(opts.max_basis, 2 * p));
    long cap = std::min<long>(hard_cap, out.expected_count +
                                            std::max<long>(60, out.expected_count / 4));
    cap = std::max<long>(cap, 2 * p);

    Eigen::MatrixXd basis(n, cap);
    Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(cap, cap);
    detail::SplitMix64 rng(opts.seed);

    auto fill_random = [&](Eigen::Ref<Eigen::MatrixXd> block) {
        for (long j = 0; j < block.cols(); ++j)
            for (long i = 0; i < block.rows(); ++i) block(i, j) = rng.uniform();
    };

    // Orthonormalizes the p-column block `m` against basis columns [0, used)
    // (blocked CGS, two passes) and internally (modified Gram-Schmidt, two
    // passes); returns the in-block triangular factor. Rank-deficient
    // directions are replaced by fresh random vectors with a zeroed coupling.
    auto orthonormalize = [&](Eigen::Ref<Eigen::MatrixXd> m, long used,
                              bool replace_deficient) -> Eigen::MatrixXd {
        for (int pass = 0; pass < 2; ++pass) {
            if (used > 0) {
                Eigen::MatrixXd coef = basis.leftCols(used).transpose() * m;
                m.noalias() -= basis.leftCols(used) * coef;
            }
        }
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(m.cols(), m.cols());
        for (long j = 0; j < m.cols(); ++j) {
            auto col = m.col(j);
            const double norm_before = col.norm();
            for (int pass = 0; pass < 2; ++pass) {
                for (long i = 0; i < j; ++i) {
                    const double cij = m.col(i).dot(col);
                    r(i, j) += cij;
                    col.noalias() -= cij * m.col(i);
                }
            }
            double norm_after = col.norm();
            if (!(norm_after > 1e-10 * std::max(norm_before, 1e-300))) {
                if (!replace_deficient) throw SolverError("starting block is rank deficient");
                for (int tries = 0; tries < 3 && !(norm_after > 0.0); ++tries) {
                    fill_random(col);
                    for (int pass = 0; pass < 2; ++pass) {
                        if (used > 0) {
                            Eigen::VectorXd coef = basis.leftCols(used).transpose() * col;
                            col.noalias() -= basis.leftCols(used) * coef;
                        }
                        for (long i = 0; i < j; ++i)
                            col.noalias() -= m.col(i).dot(col) * m.col(i);
                    }
                    norm_after = col.norm();
                }
                r(j, j) = 0.0;
            } else {
                r(j, j) = norm_after;
            }
            col /= norm_after;
        }
        return r;
    };

    {
        auto start = basis.leftCols(p);
        fill_random(start);
        orthonormalize(start, 0, true);
    }

    Eigen::MatrixXd b_prev;  // p x p coupling to the previous block
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> teig;

    int step = 0;
    while (true) {
        const long col0 = long(step) * p;
        const long used = col0 + p;

        if (used + p > cap) {
            if (cap >= hard_cap)
                throw SolverError("Lanczos did not converge " +
                                      std::to_string(out.expected_count) +
                                      " levels below the cutoff",
                                  step, int(used));
            const long new_cap = std::min<long>(hard_cap, long(double(cap) * 1.5) + p);
            basis.conservativeResize(Eigen::NoChange, new_cap);
            Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(new_cap, new_cap);
            grown.topLeftCorner(cap, cap) = tmat.topLeftCorner(cap, cap);
            tmat.swap(grown);
            cap = new_cap;
        }

        Eigen::MatrixXd w = inv.solve(basis.middleCols(col0, p));
        if (step > 0) w.noalias() -= basis.middleCols(col0 - p, p) * b_prev.transpose();
        Eigen::MatrixXd alpha = basis.middleCols(col0, p).transpose() * w;
        alpha = 0.5 * (alpha + alpha.transpose()).eval();
        w.noalias() -= basis.middleCols(col0, p) * alpha;
        tmat.block(col0, col0, p, p) = alpha;

        auto next = basis.middleCols(used, p);
        next = w;
        const Eigen::MatrixXd b_next = orthonormalize(next, used, true);
        tmat.block(used, col0, p, p) = b_next;
        tmat.block(col0, used, p, p) = b_next.transpose();

        const bool last_chance = used + 2 * p > hard_cap;
        if ((step + 1) % opts.check_every == 0 || used + 2 * p > cap || last_chance) {
            const long m = used;
            teig.compute(tmat.topLeftCorner(m, m));
            const Eigen::VectorXd& theta = teig.eigenvalues();  // ascending in theta
            const Eigen::MatrixXd& y = teig.eigenvectors();

            double lambda_min = 0.0;
            for (long i = m - 1; i >= 0; --i) {
                if (!(theta[i] > 0.0)) break;
                const double lambda = 1.0 / theta[i];
                if (lambda <= cutoff) {
                    lambda_min = lambda;
                    break;
                }
            }
            long below = 0, converged_below = 0;
            for (long i = m - 1; i >= 0; --i) {
                const double th = theta[i];
                if (!(th > 0.0)) break;
                const double lambda = 1.0 / th;
                if (lambda > cutoff) break;
                ++below;
                // Ritz residual of A^-1 mapped to an eigenvalue error of A.
                const double res_b = (b_next * y.col(i).tail(p)).norm();
                const double err = res_b / (th * th);
                double tol = opts.tol_rel * lambda;
                if (opts.weight_beta > 0.0 && lambda_min > 0.0 && lambda > lambda_min) {
                    const double boost =
                        std::exp(std::min(opts.weight_beta * (lambda - lambda_min), 46.0));
                    tol = std::min(tol * boost, 1e-3 * lambda);
                }
                if (err <= tol) ++converged_below;
            }

            if (below == out.expected_count && converged_below == below) {
                std::vector<long> picked;
                for (long i = m - 1; i >= 0; --i) {
                    if (!(theta[i] > 0.0)) break;
                    if (1.0 / theta[i] > cutoff) break;
                    picked.push_back(i);  // ascending lambda
                }
                out.eigenvalues.reserve(picked.size());
                for (long idx : picked) out.eigenvalues.push_back(1.0 / theta[idx]);
                out.block_steps = step + 1;
                out.basis_size = int(m);
                if (want_vectors) {
                    Eigen::MatrixXd ysel(m, long(picked.size()));
                    for (long j = 0; j < long(picked.size()); ++j)
                        ysel.col(j) = y.col(picked[std::size_t(j)]);
                    out.vectors.noalias() = basis.leftCols(m) * ysel;
                    detail::fix_vector_signs(out.vectors);
                }
                return out;
            }
            if (last_chance)
                throw SolverError("Lanczos did not converge " +
                                      std::to_string(out.expected_count) +
                                      " levels below the cutoff",
                                  step + 1, int(m));
        }
        b_prev = b_next;
        ++step;
    }
}

}  // namespace szilard
