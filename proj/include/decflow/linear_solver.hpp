#pragma once

#include "decflow/forms.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>

namespace decflow {

struct LinearSolverSettings {
    enum class Backend { Umfpack, SparseLU, BiCGSTAB };

    Backend backend = Backend::Umfpack;
    /// Required relative residual ||Mx - r||_inf / ||r||_inf.
    double tolerance = 1e-10;
    /// Iteration cap for BiCGSTAB (as backend or fallback).
    int max_iterations = 5000;
    /// Retry with preconditioned BiCGSTAB when a direct solve misses the target.
    bool iterative_fallback = false;
};

std::string to_string(LinearSolverSettings::Backend backend);
LinearSolverSettings::Backend linear_backend_from_string(const std::string& name);

struct LinearSolveResult {
    Eigen::VectorXd solution;
    double relative_residual = 0.0;
    /// Reciprocal condition estimate of the direct factorisation (0 if n/a).
    double rcond = 0.0;
    int iterations = 0;
    bool used_fallback = false;
};

/// Relative infinity-norm residual; falls back to the absolute residual for
/// a zero right-hand side.
double relative_residual(const SparseMatrix& matrix, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs);

/// Sparse solver that keeps the symbolic analysis between calls when the
/// sparsity pattern does not change, as in a time-stepping loop.
class SparseSolver {
public:
    explicit SparseSolver(LinearSolverSettings settings = {});
    ~SparseSolver();
    SparseSolver(SparseSolver&&) noexcept;
    SparseSolver& operator=(SparseSolver&&) noexcept;
    SparseSolver(const SparseSolver&) = delete;
    SparseSolver& operator=(const SparseSolver&) = delete;

    /// Throws SolverError on a singular factorisation or when neither the
    /// direct solve nor the configured fallback reaches the tolerance.
    LinearSolveResult solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs);

    const LinearSolverSettings& settings() const { return settings_; }

private:
    struct Impl;
    LinearSolverSettings settings_;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around SparseSolver.
LinearSolveResult solve_sparse(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                               const LinearSolverSettings& settings = {});

} // namespace decflow
