#include "decflow/flatfd.hpp"

#include "decflow/diagnostics.hpp"
#include "decflow/error.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace decflow::flatfd {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

double max_error(const Eigen::MatrixXd& values, const std::function<double(double, double)>& exact, double h,
                 double ox, double oy) {
    double err = 0.0;
    for (int j = 0; j < values.cols(); ++j) {
        for (int i = 0; i < values.rows(); ++i) {
            err = std::max(err, std::abs(values(i, j) - exact((i + ox) * h, (j + oy) * h)));
        }
    }
    return err;
}

} // namespace

StaggeredGrid StaggeredGrid::zeros(int n) {
    if (n < 2) throw ConfigError("staggered grid needs at least 2 cells per side");
    return {n, 2.0 * std::numbers::pi / n, Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
}

StaggeredGrid StaggeredGrid::sample(int n, const std::function<double(double, double)>& fx,
                                    const std::function<double(double, double)>& fy) {
    StaggeredGrid g = zeros(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            g.ux(i, j) = fx((i + 0.5) * g.h, j * g.h);
            g.uy(i, j) = fy(i * g.h, (j + 0.5) * g.h);
        }
    }
    return g;
}

double StaggeredGrid::max_abs() const {
    return std::max(ux.cwiseAbs().maxCoeff(), uy.cwiseAbs().maxCoeff());
}

StaggeredGrid laplace_rr_stencil(const StaggeredGrid& g) {
    const int n = g.n;
    const double s = 1.0 / (g.h * g.h);
    StaggeredGrid out = StaggeredGrid::zeros(n);
    for (int j = 0; j < n; ++j) {
        const int jp = wrap(j + 1, n), jm = wrap(j - 1, n);
        for (int i = 0; i < n; ++i) {
            const int ip = wrap(i + 1, n), im = wrap(i - 1, n);
            out.ux(i, j) = s * (g.ux(i, jp) + g.ux(i, jm) - 2.0 * g.ux(i, j) + g.uy(i, j) - g.uy(ip, j) +
                                g.uy(ip, jm) - g.uy(i, jm));
            out.uy(i, j) = s * (g.uy(ip, j) + g.uy(im, j) - 2.0 * g.uy(i, j) + g.ux(i, j) - g.ux(i, jp) +
                                g.ux(im, jp) - g.ux(im, j));
        }
    }
    return out;
}

StaggeredGrid laplace_full_stencil(const StaggeredGrid& g) {
    const int n = g.n;
    const double s = 1.0 / (g.h * g.h);
    StaggeredGrid out = StaggeredGrid::zeros(n);
    auto five = [&](const Eigen::MatrixXd& u, int i, int j) {
        return s * (u(wrap(i + 1, n), j) + u(wrap(i - 1, n), j) + u(i, wrap(j + 1, n)) + u(i, wrap(j - 1, n)) -
                    4.0 * u(i, j));
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.ux(i, j) = five(g.ux, i, j);
            out.uy(i, j) = five(g.uy, i, j);
        }
    }
    return out;
}

StaggeredGrid quarter_turn(const StaggeredGrid& g) {
    return {g.n, g.h, g.uy.transpose(), g.ux.transpose()};
}

StaggeredGrid gradient(const Eigen::MatrixXd& potential, double h) {
    const int n = static_cast<int>(potential.rows());
    StaggeredGrid g{n, h, Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            g.ux(i, j) = (potential(wrap(i + 1, n), j) - potential(i, j)) / h;
            g.uy(i, j) = (potential(i, wrap(j + 1, n)) - potential(i, j)) / h;
        }
    }
    return g;
}

std::string to_string(Stencil stencil) {
    return stencil == Stencil::RotRot ? "rotrot" : "fivepoint";
}

std::vector<FlatField> field_catalog() {
    using std::cos;
    using std::sin;
    return {
        {"sin_y",
         [](double, double y) { return sin(y); }, [](double, double) { return 0.0; },
         [](double, double y) { return -sin(y); }, [](double, double) { return 0.0; },
         [](double, double y) { return -sin(y); }, [](double, double) { return 0.0; }},
        {"sin_xpy_cos_xmy",
         [](double x, double y) { return sin(x + y); }, [](double x, double y) { return cos(x - y); },
         [](double x, double y) { return -sin(x + y) - cos(x - y); },
         [](double x, double y) { return -cos(x - y) + sin(x + y); },
         [](double x, double y) { return -2.0 * sin(x + y); }, [](double x, double y) { return -2.0 * cos(x - y); }},
        {"sinx_siny",
         [](double x, double y) { return sin(x) * sin(y); }, [](double, double) { return 0.0; },
         [](double x, double y) { return -sin(x) * sin(y); }, [](double x, double y) { return -cos(x) * cos(y); },
         [](double x, double y) { return -2.0 * sin(x) * sin(y); }, [](double, double) { return 0.0; }},
    };
}

std::vector<StudyRow> consistency_study(const FlatField& field, Stencil stencil, const std::vector<int>& ns) {
    std::vector<StudyRow> rows;
    std::vector<double> errors, sizes;
    for (int n : ns) {
        const StaggeredGrid g = StaggeredGrid::sample(n, field.ux, field.uy);
        const bool rr = stencil == Stencil::RotRot;
        const StaggeredGrid out = rr ? laplace_rr_stencil(g) : laplace_full_stencil(g);
        const double err = std::max(max_error(out.ux, rr ? field.rr_x : field.full_x, g.h, 0.5, 0.0),
                                    max_error(out.uy, rr ? field.rr_y : field.full_y, g.h, 0.0, 0.5));
        StudyRow row{field.name, stencil, n, g.h, err, std::numeric_limits<double>::quiet_NaN()};
        if (!errors.empty() && err > 0.0 && errors.back() > 0.0) {
            row.eoc = eoc_table({errors.back(), err}, {sizes.back(), g.h}).front();
        }
        errors.push_back(err);
        sizes.push_back(g.h);
        rows.push_back(row);
    }
    return rows;
}

std::vector<StudyRow> consistency_study(const std::vector<int>& ns) {
    std::vector<StudyRow> rows;
    for (const auto& field : field_catalog()) {
        for (Stencil s : {Stencil::RotRot, Stencil::FivePoint}) {
            const auto part = consistency_study(field, s, ns);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    }
    return rows;
}

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
    os << "field,stencil,n,h,error,eoc\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%.17g,%.17g,%.17g\n", r.field.c_str(), to_string(r.stencil).c_str(),
                      r.n, r.h, r.error, r.eoc);
        os << buf;
    }
}

} // namespace decflow::flatfd
