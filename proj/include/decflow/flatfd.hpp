#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace decflow::flatfd {

/// Periodic MAC grid on [0, 2 pi)^2 with n cells per side.
/// ux(i, j) lives at ((i + 1/2) h, j h), uy(i, j) at (i h, (j + 1/2) h).
struct StaggeredGrid {
    int n = 0;
    double h = 0.0;
    Eigen::MatrixXd ux;
    Eigen::MatrixXd uy;

    static StaggeredGrid zeros(int n);
    static StaggeredGrid sample(int n, const std::function<double(double, double)>& fx,
                                const std::function<double(double, double)>& fy);

    double max_abs() const;
};

/// Rot-rot Laplacian: seven-point mixed stencil per component.
StaggeredGrid laplace_rr_stencil(const StaggeredGrid& grid);

/// Component-wise five-point Laplacian.
StaggeredGrid laplace_full_stencil(const StaggeredGrid& grid);

/// Transposes the grid and swaps the components.
StaggeredGrid quarter_turn(const StaggeredGrid& grid);

/// Staggered gradient of a vertex potential phi(i h, j h).
StaggeredGrid gradient(const Eigen::MatrixXd& potential, double h);

enum class Stencil { RotRot, FivePoint };
std::string to_string(Stencil stencil);

/// Biperiodic test field with closed-form images under both operators.
struct FlatField {
    std::string name;
    std::function<double(double, double)> ux, uy;
    std::function<double(double, double)> rr_x, rr_y;
    std::function<double(double, double)> full_x, full_y;
};

/// (sin y, 0), (sin(x+y), cos(x-y)), (sin x sin y, 0).
std::vector<FlatField> field_catalog();

struct StudyRow {
    std::string field;
    Stencil stencil = Stencil::RotRot;
    int n = 0;
    double h = 0.0;
    double error = 0.0;
    /// Against the previous row of the same field and stencil; NaN for the first.
    double eoc = 0.0;
};

/// Max-norm error of the stencil against its continuum operator for each n.
std::vector<StudyRow> consistency_study(const FlatField& field, Stencil stencil, const std::vector<int>& ns);

/// All catalog fields with both stencils.
std::vector<StudyRow> consistency_study(const std::vector<int>& ns);

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows);

} // namespace decflow::flatfd
