#pragma once

#include <functional>
#include <vector>

#include "detproj/mesh.hpp"
#include "detproj/quadrature.hpp"

namespace detproj::sz {

/// L2 dual (bi-orthogonal) basis on one face: coeff[j][k] expresses the j-th
/// dual function in the P1 nodal basis of the face, i.e.
///     psi_j = sum_k coeff[j][k] phi_k,   int_sigma psi_j phi_k = delta_jk.
/// coeff is the inverse of the local face mass matrix.
struct DualBasis {
    int face = -1;
    int nverts = 0;
    double face_measure = 0.0;
    std::array<std::array<double, 3>, 3> coeff{};
};

inline DualBasis dual_basis(const mesh::SimplicialMesh& m, int face, int quad_degree = 4) {
    require(face >= 0 && face < m.n_faces(), "dual_basis: face out of range");
    const int d = m.dim;  // vertices per face
    DualBasis db;
    db.face = face;
    db.nverts = d;
    db.face_measure = m.face_measure(face);
    ensure(db.face_measure > 0.0, "dual_basis: degenerate face");

    // local face mass matrix by quadrature
    const auto rule = quad::simplex_rule(d - 1, quad_degree);
    double mass[3][3] = {};
    for (std::size_t q = 0; q < rule.size(); ++q)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                mass[j][k] += rule.weights[q] * rule.barycentric[q][j] * rule.barycentric[q][k];
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) mass[j][k] *= db.face_measure;

    if (d == 2) {
        double det = mass[0][0] * mass[1][1] - mass[0][1] * mass[1][0];
        ensure(std::abs(det) > 1e-300, "dual_basis: singular face mass matrix");
        db.coeff[0][0] = mass[1][1] / det;
        db.coeff[0][1] = -mass[0][1] / det;
        db.coeff[1][0] = -mass[1][0] / det;
        db.coeff[1][1] = mass[0][0] / det;
    } else {
        double det = 0.0;
        for (int j = 0; j < 3; ++j)
            det += mass[0][j] * (mass[1][(j + 1) % 3] * mass[2][(j + 2) % 3] -
                                 mass[1][(j + 2) % 3] * mass[2][(j + 1) % 3]);
        ensure(std::abs(det) > 1e-300, "dual_basis: singular face mass matrix");
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double cof = mass[(k + 1) % 3][(j + 1) % 3] * mass[(k + 2) % 3][(j + 2) % 3] -
                             mass[(k + 1) % 3][(j + 2) % 3] * mass[(k + 2) % 3][(j + 1) % 3];
                db.coeff[j][k] = cof / det;
            }
    }
    return db;
}

/// The interpolant I_h u = sum_i phi_i l_i(u) with functionals
/// l_i(u) = int_{sigma_i} psi_i u over the face selected for vertex i.
/// Immutable once built; functional/interpolate are pure.
///
/// The default face rule (degree 11) integrates P1 traces exactly and keeps
/// the functional within 1e-10 of a doubled-order oracle for the smooth test
/// corpus; degree >= 4 would already make the algebraic identities exact.
class ScottZhangOperator {
  public:
    explicit ScottZhangOperator(const mesh::SimplicialMesh& m, int quad_degree = 11)
        : mesh_(&m),
          face_rule_(quad::simplex_rule(m.dim - 1, quad_degree)),
          sigma_(m.n_vertices()),
          psi_(m.n_vertices()) {
        for (int v = 0; v < m.n_vertices(); ++v) {
            int f = mesh::select_face(m, v);
            sigma_[v] = f;
            DualBasis db = dual_basis(m, f, quad_degree);
            int li = -1;
            for (int k = 0; k < m.dim; ++k)
                if (m.faces[f][k] == v) li = k;
            ensure(li >= 0, "ScottZhangOperator: selected face misses its vertex");
            psi_[v] = db.coeff[li];
        }
    }

    const mesh::SimplicialMesh& mesh() const { return *mesh_; }
    int selected_face(int vertex) const { return sigma_[vertex]; }

    /// l_i(u) by face quadrature; u is any pointwise-evaluable sampler.
    template <class F>
    double functional(int vertex, F&& u) const {
        const auto& m = *mesh_;
        const int f = sigma_[vertex];
        const mesh::Face& fv = m.faces[f];
        const double meas = m.face_measure(f);
        double acc = 0.0;
        for (std::size_t q = 0; q < face_rule_.size(); ++q) {
            const auto& lam = face_rule_.barycentric[q];
            Vec3 x{0, 0, 0};
            double psi = 0.0;
            for (int k = 0; k < m.dim; ++k) {
                x += lam[k] * m.vertices[fv[k]];
                psi += psi_[vertex][k] * lam[k];
            }
            acc += face_rule_.weights[q] * psi * u(x);
        }
        return acc * meas;
    }

    /// Nodal coefficient vector of I_h u.
    template <class F>
    std::vector<double> interpolate(F&& u) const {
        std::vector<double> c(mesh_->n_vertices());
        for (int v = 0; v < mesh_->n_vertices(); ++v) c[v] = functional(v, u);
        return c;
    }

    /// I_h applied to an existing P1 coefficient field. The trace of a P1
    /// function on a face is determined by the face's vertex values, so no
    /// point location is needed.
    std::vector<double> interpolate_p1(const std::vector<double>& coeffs) const {
        const auto& m = *mesh_;
        require(coeffs.size() == static_cast<std::size_t>(m.n_vertices()),
                "interpolate_p1: coefficient size mismatch");
        std::vector<double> out(m.n_vertices());
        for (int v = 0; v < m.n_vertices(); ++v) {
            const mesh::Face& fv = m.faces[sigma_[v]];
            const double meas = m.face_measure(sigma_[v]);
            double acc = 0.0;
            for (std::size_t q = 0; q < face_rule_.size(); ++q) {
                const auto& lam = face_rule_.barycentric[q];
                double psi = 0.0, val = 0.0;
                for (int k = 0; k < m.dim; ++k) {
                    psi += psi_[v][k] * lam[k];
                    val += coeffs[fv[k]] * lam[k];
                }
                acc += face_rule_.weights[q] * psi * val;
            }
            out[v] = acc * meas;
        }
        return out;
    }

  private:
    const mesh::SimplicialMesh* mesh_;
    quad::SimplexRule face_rule_;
    std::vector<int> sigma_;
    std::vector<std::array<double, 3>> psi_;  // dual coefficients for psi_i
};

/// || P1 field ||_{L2}^2 via the exact element mass matrices.
inline double p1_l2_norm_sq(const mesh::SimplicialMesh& m, const std::vector<double>& c) {
    require(c.size() == static_cast<std::size_t>(m.n_vertices()), "p1_l2_norm_sq: size mismatch");
    double total = 0.0;
    for (int cell = 0; cell < m.n_cells(); ++cell) {
        const mesh::Cell& t = m.cells[cell];
        double sum_sq = 0.0, sum_cross = 0.0;
        for (int i = 0; i <= m.dim; ++i) {
            sum_sq += c[t[i]] * c[t[i]];
            for (int j = i + 1; j <= m.dim; ++j) sum_cross += c[t[i]] * c[t[j]];
        }
        // triangle: |tau|/6 (sum c_i^2 + sum_{i<j} c_i c_j); tet: |tau|/10 (...)
        double scale = (m.dim == 2) ? m.cell_measure(cell) / 6.0 : m.cell_measure(cell) / 10.0;
        total += scale * (sum_sq + sum_cross);
    }
    return total;
}

/// || u - P1 field ||_{L2} by composite cell quadrature. Negative roundoff
/// accumulations (linear u reproduced exactly) are clamped at zero.
template <class F>
double l2_error(const mesh::SimplicialMesh& m, const std::vector<double>& c, F&& u,
                int quad_degree = 7) {
    const auto rule = quad::simplex_rule(m.dim, quad_degree);
    double total = 0.0;
    for (int cell = 0; cell < m.n_cells(); ++cell) {
        const mesh::Cell& t = m.cells[cell];
        const double meas = m.cell_measure(cell);
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& lam = rule.barycentric[q];
            Vec3 x{0, 0, 0};
            double p1 = 0.0;
            for (int k = 0; k <= m.dim; ++k) {
                x += lam[k] * m.vertices[t[k]];
                p1 += c[t[k]] * lam[k];
            }
            double diff = u(x) - p1;
            acc += rule.weights[q] * diff * diff;
        }
        total += meas * acc;
    }
    return std::sqrt(std::max(total, 0.0));
}

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    int n_vertices = 0;
    double l2_error = 0.0;
    double running_slope = 0.0;  // slope vs the previous level; 0 on the first
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double fitted_slope = 0.0;  // least-squares slope of log error vs log h
};

/// L2 approximation order of I_h over a nested refinement family.
template <class F>
ConvergenceStudy l2_convergence(const std::vector<mesh::SimplicialMesh>& family, F&& u,
                                int quad_degree = 7, int sz_quad_degree = 11) {
    require(family.size() >= 2, "l2_convergence: need at least 2 levels");
    ConvergenceStudy study;
    for (std::size_t l = 0; l < family.size(); ++l) {
        ScottZhangOperator op(family[l], sz_quad_degree);
        auto coeffs = op.interpolate(u);
        ConvergenceRow row;
        row.level = static_cast<int>(l);
        row.h = mesh::metrics(family[l]).h;
        row.n_vertices = family[l].n_vertices();
        row.l2_error = l2_error(family[l], coeffs, u, quad_degree);
        if (l > 0 && row.l2_error > 0.0 && study.rows.back().l2_error > 0.0)
            row.running_slope = std::log(study.rows.back().l2_error / row.l2_error) /
                                std::log(study.rows.back().h / row.h);
        study.rows.push_back(row);
    }
    // least-squares fit over levels with a nonzero error
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : study.rows) {
        if (r.l2_error <= 0.0) continue;
        double x = std::log(r.h), y = std::log(r.l2_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2) study.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return study;
}

}  // namespace detproj::sz
