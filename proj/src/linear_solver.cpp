#include "decflow/linear_solver.hpp"

#include "decflow/error.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <umfpack.h>

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace decflow {

namespace {

// Pivots this small relative to the largest one mean a rank-deficient matrix.
constexpr double singular_rcond = 1e-15;

std::string residual_message(const char* what, double residual, double tolerance) {
    std::ostringstream msg;
    msg << what << ": relative residual " << residual << " exceeds tolerance " << tolerance;
    return msg.str();
}

// Owns UMFPACK symbolic and numeric objects for one sparsity pattern.
class Umfpack {
public:
    Umfpack() { umfpack_di_defaults(control_.data()); }
    ~Umfpack() { reset(); }
    Umfpack(const Umfpack&) = delete;
    Umfpack& operator=(const Umfpack&) = delete;

    void reset() {
        if (numeric_) umfpack_di_free_numeric(&numeric_);
        if (symbolic_) umfpack_di_free_symbolic(&symbolic_);
        numeric_ = symbolic_ = nullptr;
        pattern_outer_.clear();
        pattern_inner_.clear();
    }

    // Returns the reciprocal condition estimate.
    double factorize(const SparseMatrix& m) {
        if (!same_pattern(m)) {
            reset();
            const int status = umfpack_di_symbolic(static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                                                   m.outerIndexPtr(), m.innerIndexPtr(), m.valuePtr(), &symbolic_,
                                                   control_.data(), info_.data());
            if (status != UMFPACK_OK) throw SolverError("umfpack symbolic analysis failed (status " + std::to_string(status) + ")");
            pattern_outer_.assign(m.outerIndexPtr(), m.outerIndexPtr() + m.outerSize() + 1);
            pattern_inner_.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
        }
        if (numeric_) umfpack_di_free_numeric(&numeric_);
        const int status = umfpack_di_numeric(m.outerIndexPtr(), m.innerIndexPtr(), m.valuePtr(), symbolic_,
                                              &numeric_, control_.data(), info_.data());
        const double rcond = info_[UMFPACK_RCOND];
        if (status == UMFPACK_WARNING_singular_matrix || !(rcond > singular_rcond)) {
            std::ostringstream msg;
            msg << "numerically singular system (rcond " << rcond << ")";
            throw SolverError(msg.str());
        }
        if (status != UMFPACK_OK) throw SolverError("umfpack factorisation failed (status " + std::to_string(status) + ")");
        return rcond;
    }

    Eigen::VectorXd solve(const SparseMatrix& m, const Eigen::VectorXd& rhs) {
        Eigen::VectorXd x(rhs.size());
        const int status = umfpack_di_solve(UMFPACK_A, m.outerIndexPtr(), m.innerIndexPtr(), m.valuePtr(), x.data(),
                                            rhs.data(), numeric_, control_.data(), info_.data());
        if (status != UMFPACK_OK) throw SolverError("umfpack solve failed (status " + std::to_string(status) + ")");
        return x;
    }

private:
    bool same_pattern(const SparseMatrix& m) const {
        if (!symbolic_ || pattern_outer_.size() != static_cast<std::size_t>(m.outerSize() + 1) ||
            pattern_inner_.size() != static_cast<std::size_t>(m.nonZeros())) {
            return false;
        }
        return std::equal(pattern_outer_.begin(), pattern_outer_.end(), m.outerIndexPtr()) &&
               std::equal(pattern_inner_.begin(), pattern_inner_.end(), m.innerIndexPtr());
    }

    void* symbolic_ = nullptr;
    void* numeric_ = nullptr;
    std::array<double, UMFPACK_CONTROL> control_{};
    std::array<double, UMFPACK_INFO> info_{};
    std::vector<int> pattern_outer_, pattern_inner_;
};

LinearSolveResult solve_iterative(const SparseMatrix& m, const Eigen::VectorXd& rhs, const LinearSolverSettings& s,
                                  const Eigen::VectorXd* guess) {
    Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> solver;
    solver.setMaxIterations(s.max_iterations);
    // Eigen's criterion is the relative 2-norm residual; aim well below the
    // inf-norm target and verify afterwards.
    solver.setTolerance(s.tolerance * 1e-2);
    solver.compute(m);
    if (solver.info() != Eigen::Success) throw SolverError("iterative solver: preconditioner setup failed");
    LinearSolveResult result;
    if (guess) {
        result.solution = solver.solveWithGuess(rhs, *guess);
    } else {
        result.solution = solver.solve(rhs);
    }
    result.iterations = static_cast<int>(solver.iterations());
    result.relative_residual = relative_residual(m, result.solution, rhs);
    if (!(result.relative_residual <= s.tolerance)) {
        throw SolverError(residual_message("iterative solver did not converge", result.relative_residual, s.tolerance));
    }
    return result;
}

} // namespace

std::string to_string(LinearSolverSettings::Backend backend) {
    switch (backend) {
    case LinearSolverSettings::Backend::Umfpack: return "umfpack";
    case LinearSolverSettings::Backend::SparseLU: return "sparselu";
    case LinearSolverSettings::Backend::BiCGSTAB: return "bicgstab";
    }
    return "unknown";
}

LinearSolverSettings::Backend linear_backend_from_string(const std::string& name) {
    using B = LinearSolverSettings::Backend;
    for (auto b : {B::Umfpack, B::SparseLU, B::BiCGSTAB}) {
        if (to_string(b) == name) return b;
    }
    throw ConfigError("unknown linear solver '" + name + "'");
}

double relative_residual(const SparseMatrix& matrix, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
    const double res = (matrix * x - rhs).lpNorm<Eigen::Infinity>();
    const double scale = rhs.lpNorm<Eigen::Infinity>();
    return scale > 0.0 ? res / scale : res;
}

struct SparseSolver::Impl {
    Umfpack umfpack;
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> sparse_lu;
    Eigen::Index lu_rows = -1, lu_nonzeros = -1;
};

SparseSolver::SparseSolver(LinearSolverSettings settings)
    : settings_(settings), impl_(std::make_unique<Impl>()) {}
SparseSolver::~SparseSolver() = default;
SparseSolver::SparseSolver(SparseSolver&&) noexcept = default;
SparseSolver& SparseSolver::operator=(SparseSolver&&) noexcept = default;

LinearSolveResult SparseSolver::solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size()) {
        throw SolverError("linear system dimensions do not match");
    }
    if (!rhs.allFinite()) throw SolverError("right-hand side contains NaN/Inf");

    using B = LinearSolverSettings::Backend;
    if (settings_.backend == B::BiCGSTAB) return solve_iterative(matrix, rhs, settings_, nullptr);

    LinearSolveResult result;
    if (settings_.backend == B::Umfpack) {
        result.rcond = impl_->umfpack.factorize(matrix);
        result.solution = impl_->umfpack.solve(matrix, rhs);
    } else {
        auto& lu = impl_->sparse_lu;
        if (impl_->lu_rows != matrix.rows() || impl_->lu_nonzeros != matrix.nonZeros()) {
            lu.analyzePattern(matrix);
            impl_->lu_rows = matrix.rows();
            impl_->lu_nonzeros = matrix.nonZeros();
        }
        lu.factorize(matrix);
        if (lu.info() != Eigen::Success) throw SolverError("numerically singular system: " + lu.lastErrorMessage());
        result.solution = lu.solve(rhs);
    }
    result.relative_residual = relative_residual(matrix, result.solution, rhs);
    if (!std::isfinite(result.relative_residual)) throw SolverError("direct solve produced NaN/Inf");
    if (result.relative_residual <= settings_.tolerance) return result;

    if (settings_.iterative_fallback) {
        auto fallback = solve_iterative(matrix, rhs, settings_, &result.solution);
        fallback.used_fallback = true;
        fallback.rcond = result.rcond;
        return fallback;
    }
    throw SolverError(residual_message("direct solve", result.relative_residual, settings_.tolerance));
}

LinearSolveResult solve_sparse(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                               const LinearSolverSettings& settings) {
    SparseSolver solver(settings);
    return solver.solve(matrix, rhs);
}

} // namespace decflow
