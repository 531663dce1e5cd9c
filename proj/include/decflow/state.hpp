#pragma once

#include "decflow/forms.hpp"

namespace decflow {

/// Unknowns of one time level: velocity 1-form u, its Hodge dual ⋆u, the
/// generalized pressure q and the pressure p.
struct SolverState {
    Form1 u;
    Form1 u_dual;
    Form0 q;
    Form0 p;
    double time = 0.0;
    long step_index = 0;
    /// Relative residual of the linear solve that produced this state.
    double solver_residual = 0.0;
    /// max_v |(*d*u)(v)|.
    double divergence_residual = 0.0;

    static SolverState zero(Index num_edges, Index num_vertices) {
        return {Form1::zero(num_edges), Form1::zero(num_edges), Form0::zero(num_vertices),
                Form0::zero(num_vertices)};
    }

    bool all_finite() const { return u.all_finite() && u_dual.all_finite() && q.all_finite() && p.all_finite(); }
};

} // namespace decflow
