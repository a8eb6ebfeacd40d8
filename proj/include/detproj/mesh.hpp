#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "detproj/core.hpp"

namespace detproj::mesh {

/// Cell = d-simplex as vertex indices; triangles leave [3] = -1.
using Cell = std::array<int, 4>;
/// Face = (d-1)-simplex (edge in 2D, triangle in 3D); edges leave [2] = -1.
using Face = std::array<int, 3>;

/// Conforming simplicial triangulation of a box in 2D or 3D.
///
/// Topology (faces, incidence, boundary flags) is derived from the cell list
/// by finalize(); faces are enumerated lexicographically by sorted vertex
/// indices so that meshes and mesh files are canonical. All data is immutable
/// after construction.
struct SimplicialMesh {
    int dim = 2;
    std::vector<Vec3> vertices;
    std::vector<Cell> cells;
    double domain_measure = 0.0;  // |Omega|; the analytic box measure when known

    // derived topology
    std::vector<Face> faces;                       // sorted indices, lexicographic order
    std::vector<std::array<int, 2>> face_cells;    // incident cells, -1 if absent
    std::vector<std::uint8_t> face_boundary;
    std::vector<std::uint8_t> boundary_vertex;
    std::vector<std::vector<int>> vertex_faces;    // ascending face ids per vertex
    std::vector<std::vector<int>> vertex_cells;    // ascending cell ids per vertex

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
    int verts_per_cell() const { return dim + 1; }
    int verts_per_face() const { return dim; }

    double signed_cell_measure(int c) const {
        const Cell& t = cells[c];
        if (dim == 2) {
            Vec3 e1 = vertices[t[1]] - vertices[t[0]];
            Vec3 e2 = vertices[t[2]] - vertices[t[0]];
            return 0.5 * (e1.x * e2.y - e1.y * e2.x);
        }
        Vec3 e1 = vertices[t[1]] - vertices[t[0]];
        Vec3 e2 = vertices[t[2]] - vertices[t[0]];
        Vec3 e3 = vertices[t[3]] - vertices[t[0]];
        return dot(e1, cross(e2, e3)) / 6.0;
    }

    double cell_measure(int c) const { return std::abs(signed_cell_measure(c)); }

    double cell_diameter(int c) const {
        const Cell& t = cells[c];
        double d = 0.0;
        for (int i = 0; i <= dim; ++i)
            for (int j = i + 1; j <= dim; ++j)
                d = std::max(d, distance(vertices[t[i]], vertices[t[j]]));
        return d;
    }

    /// Inradius via measure / surface: r = d |tau| / sum of facet measures.
    double cell_inradius(int c) const {
        const Cell& t = cells[c];
        double surface = 0.0;
        for (int skip = 0; skip <= dim; ++skip) {
            std::array<int, 3> f{-1, -1, -1};
            int m = 0;
            for (int i = 0; i <= dim; ++i)
                if (i != skip) f[m++] = t[i];
            surface += facet_measure(f);
        }
        return dim * cell_measure(c) / surface;
    }

    double face_measure(int f) const { return facet_measure(faces[f]); }

    /// Builds faces, incidence, and boundary flags from the cell list and
    /// verifies the structural invariants. Throws on inconsistency.
    void finalize() {
        require(dim == 2 || dim == 3, "mesh: dim must be 2 or 3");
        const int nv = n_vertices();
        for (int c = 0; c < n_cells(); ++c) {
            for (int i = 0; i <= dim; ++i)
                require(cells[c][i] >= 0 && cells[c][i] < nv, "mesh: cell vertex out of range");
            ensure(signed_cell_measure(c) > 0.0, "mesh: cell with non-positive measure");
        }

        // gather (d-1)-subsimplices, canonical sorted key
        std::map<Face, std::array<int, 2>> incident;
        for (int c = 0; c < n_cells(); ++c) {
            for (int skip = 0; skip <= dim; ++skip) {
                Face key{-1, -1, -1};
                int m = 0;
                for (int i = 0; i <= dim; ++i)
                    if (i != skip) key[m++] = cells[c][i];
                std::sort(key.begin(), key.begin() + dim);
                auto [it, fresh] = incident.try_emplace(key, std::array<int, 2>{c, -1});
                if (!fresh) {
                    ensure(it->second[1] == -1, "mesh: face shared by more than two cells");
                    it->second[1] = c;
                }
            }
        }

        faces.clear();
        face_cells.clear();
        face_boundary.clear();
        for (const auto& [key, cc] : incident) {  // std::map iterates lexicographically
            faces.push_back(key);
            face_cells.push_back(cc);
            face_boundary.push_back(cc[1] == -1 ? 1 : 0);
        }

        boundary_vertex.assign(nv, 0);
        vertex_faces.assign(nv, {});
        vertex_cells.assign(nv, {});
        for (int f = 0; f < n_faces(); ++f) {
            for (int i = 0; i < dim; ++i) {
                vertex_faces[faces[f][i]].push_back(f);
                if (face_boundary[f]) boundary_vertex[faces[f][i]] = 1;
            }
        }
        for (int c = 0; c < n_cells(); ++c)
            for (int i = 0; i <= dim; ++i)
                vertex_cells[cells[c][i]].push_back(c);

        double tiled = 0.0;
        for (int c = 0; c < n_cells(); ++c) tiled += cell_measure(c);
        if (domain_measure <= 0.0) domain_measure = tiled;
        ensure(std::abs(tiled - domain_measure) <= 1e-12 * domain_measure,
               "mesh: cell measures do not tile the domain");
    }

  private:
    double facet_measure(const std::array<int, 3>& f) const {
        if (dim == 2) return distance(vertices[f[0]], vertices[f[1]]);
        Vec3 e1 = vertices[f[1]] - vertices[f[0]];
        Vec3 e2 = vertices[f[2]] - vertices[f[0]];
        return 0.5 * norm(cross(e1, e2));
    }
};

/// Size and regularity summary of a single mesh; c_lower/c_upper carry the
/// one-mesh value N h^d / |Omega| (family brackets are the caller's fold).
struct MeshMetrics {
    double h = 0.0;
    double h_min = 0.0;
    int n_vertices = 0;
    double shape_regularity = 0.0;  // max over cells of diameter / inradius
    double quasi_uniformity = 0.0;  // h / h_min
    double c_lower = 0.0;
    double c_upper = 0.0;
};

namespace detail {

inline void orient_cells(SimplicialMesh& m) {
    for (int c = 0; c < m.n_cells(); ++c)
        if (m.signed_cell_measure(c) < 0.0) std::swap(m.cells[c][0], m.cells[c][1]);
}

/// Cache of edge midpoints created during refinement.
class MidpointMap {
  public:
    explicit MidpointMap(SimplicialMesh& m) : mesh_(m) {}

    int get(int a, int b) {
        auto key = std::minmax(a, b);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
        int idx = mesh_.n_vertices();
        mesh_.vertices.push_back(0.5 * (mesh_.vertices[key.first] + mesh_.vertices[key.second]));
        map_.emplace(key, idx);
        parents_.resize(idx + 1, {-1, -1});
        parents_[idx] = key;
        return idx;
    }

    std::pair<int, int> parents(int midpoint) const {
        ensure(midpoint < static_cast<int>(parents_.size()) && parents_[midpoint].first >= 0,
               "mesh: unknown midpoint");
        return parents_[midpoint];
    }

  private:
    SimplicialMesh& mesh_;
    std::map<std::pair<int, int>, int> map_;
    std::vector<std::pair<int, int>> parents_;
};

}  // namespace detail

/// Uniform triangulation of the box [0,e0] x [0,e1] (x [0,e2]): each grid
/// square is split into 2 triangles along the main diagonal, each grid cube
/// into 6 tetrahedra (Kuhn split). n_per_axis cells per axis.
inline SimplicialMesh build_box_mesh(int dim, const Vec3& extents, int n_per_axis) {
    require(dim == 2 || dim == 3, "build_box_mesh: dim must be 2 or 3");
    require(n_per_axis >= 1, "build_box_mesh: n_per_axis must be >= 1");
    for (int a = 0; a < dim; ++a)
        require(extents[a] > 0.0, "build_box_mesh: extents must be positive");

    SimplicialMesh m;
    m.dim = dim;
    const int n = n_per_axis;
    const int s = n + 1;

    if (dim == 2) {
        m.domain_measure = extents.x * extents.y;
        for (int j = 0; j < s; ++j)
            for (int i = 0; i < s; ++i)
                m.vertices.push_back({extents.x * i / n, extents.y * j / n, 0.0});
        auto vid = [s](int i, int j) { return i + s * j; };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                int v00 = vid(i, j), v10 = vid(i + 1, j);
                int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
                m.cells.push_back({v00, v10, v11, -1});
                m.cells.push_back({v00, v11, v01, -1});
            }
    } else {
        m.domain_measure = extents.x * extents.y * extents.z;
        for (int k = 0; k < s; ++k)
            for (int j = 0; j < s; ++j)
                for (int i = 0; i < s; ++i)
                    m.vertices.push_back(
                        {extents.x * i / n, extents.y * j / n, extents.z * k / n});
        auto vid = [s](int i, int j, int k) { return i + s * (j + s * k); };
        // Kuhn split: one tet per permutation of the axes, all sharing the
        // main diagonal of the cube.
        const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    for (const auto& p : perms) {
                        int c[4][3] = {{i, j, k}, {i, j, k}, {i, j, k}, {i, j, k}};
                        for (int step = 0; step < 3; ++step)
                            for (int q = step + 1; q < 4; ++q)
                                c[q][p[step]] += 1;
                        m.cells.push_back({vid(c[0][0], c[0][1], c[0][2]),
                                           vid(c[1][0], c[1][1], c[1][2]),
                                           vid(c[2][0], c[2][1], c[2][2]),
                                           vid(c[3][0], c[3][1], c[3][2])});
                    }
    }

    detail::orient_cells(m);
    m.finalize();
    return m;
}

/// Uniform refinement: quadra-section in 2D (self-similar children),
/// octa-section in 3D with the interior octahedron diagonal chosen to
/// minimize child degeneracy (deterministic, preserves the Kuhn family).
inline SimplicialMesh refine(const SimplicialMesh& parent) {
    SimplicialMesh m;
    m.dim = parent.dim;
    m.vertices = parent.vertices;
    m.domain_measure = parent.domain_measure;
    detail::MidpointMap mid(m);

    if (parent.dim == 2) {
        for (const Cell& t : parent.cells) {
            int a = t[0], b = t[1], c = t[2];
            int ab = mid.get(a, b), bc = mid.get(b, c), ca = mid.get(c, a);
            m.cells.push_back({a, ab, ca, -1});
            m.cells.push_back({ab, b, bc, -1});
            m.cells.push_back({ca, bc, c, -1});
            m.cells.push_back({ab, bc, ca, -1});
        }
    } else {
        for (const Cell& t : parent.cells) {
            int a = t[0], b = t[1], c = t[2], d = t[3];
            int ab = mid.get(a, b), ac = mid.get(a, c), ad = mid.get(a, d);
            int bc = mid.get(b, c), bd = mid.get(b, d), cd = mid.get(c, d);
            m.cells.push_back({a, ab, ac, ad});
            m.cells.push_back({ab, b, bc, bd});
            m.cells.push_back({ac, bc, c, cd});
            m.cells.push_back({ad, bd, cd, d});

            // Interior octahedron: of the three diagonals, take the one whose
            // four tetrahedra are least degenerate (max diameter/inradius).
            // For the Kuhn family this reproduces Kuhn-similar children, so
            // shape regularity and quasi-uniformity are preserved exactly.
            auto adjacent = [&](int u, int v) {
                auto pu = mid.parents(u), pv = mid.parents(v);
                return pu.first == pv.first || pu.first == pv.second ||
                       pu.second == pv.first || pu.second == pv.second;
            };
            auto ring_of = [&](int p, int q) {
                std::array<int, 4> ring{};
                int k = 0;
                for (int v : {ab, ac, ad, bc, bd, cd})
                    if (v != p && v != q) ring[k++] = v;
                for (int pos = 1; pos < 3; ++pos)
                    for (int j = pos; j < 4; ++j)
                        if (adjacent(ring[pos - 1], ring[j])) {
                            std::swap(ring[pos], ring[j]);
                            break;
                        }
                ensure(adjacent(ring[2], ring[3]) && adjacent(ring[3], ring[0]),
                       "mesh: octahedron ring construction failed");
                return ring;
            };
            auto tet_shape = [&](int v0, int v1, int v2, int v3) {
                const Vec3 &x0 = m.vertices[v0], &x1 = m.vertices[v1];
                const Vec3 &x2 = m.vertices[v2], &x3 = m.vertices[v3];
                double vol = std::abs(dot(x1 - x0, cross(x2 - x0, x3 - x0))) / 6.0;
                double diam = 0.0;
                for (const Vec3* u : {&x0, &x1, &x2, &x3})
                    for (const Vec3* v : {&x0, &x1, &x2, &x3})
                        diam = std::max(diam, distance(*u, *v));
                double surf = 0.5 * (norm(cross(x1 - x0, x2 - x0)) +
                                     norm(cross(x1 - x0, x3 - x0)) +
                                     norm(cross(x2 - x0, x3 - x0)) +
                                     norm(cross(x2 - x1, x3 - x1)));
                return diam * surf / (3.0 * vol);  // diameter / inradius
            };
            const std::array<std::pair<int, int>, 3> diags{
                std::pair{ab, cd}, std::pair{ac, bd}, std::pair{ad, bc}};
            int best = 0;
            double best_shape = std::numeric_limits<double>::max();
            for (int cand = 0; cand < 3; ++cand) {
                auto ring = ring_of(diags[cand].first, diags[cand].second);
                double worst = 0.0;
                for (int e = 0; e < 4; ++e)
                    worst = std::max(worst, tet_shape(diags[cand].first, diags[cand].second,
                                                      ring[e], ring[(e + 1) % 4]));
                if (worst < best_shape * (1.0 - 1e-12)) {
                    best = cand;
                    best_shape = worst;
                }
            }
            auto [p, q] = diags[best];
            auto ring = ring_of(p, q);
            for (int e = 0; e < 4; ++e)
                m.cells.push_back({p, q, ring[e], ring[(e + 1) % 4]});
        }
    }

    detail::orient_cells(m);
    m.finalize();
    return m;
}

inline MeshMetrics metrics(const SimplicialMesh& m) {
    MeshMetrics r;
    r.n_vertices = m.n_vertices();
    r.h = 0.0;
    r.h_min = std::numeric_limits<double>::max();
    r.shape_regularity = 0.0;
    for (int c = 0; c < m.n_cells(); ++c) {
        double d = m.cell_diameter(c);
        r.h = std::max(r.h, d);
        r.h_min = std::min(r.h_min, d);
        r.shape_regularity = std::max(r.shape_regularity, d / m.cell_inradius(c));
    }
    r.quasi_uniformity = r.h / r.h_min;
    double c_val = r.n_vertices * std::pow(r.h, m.dim) / m.domain_measure;
    r.c_lower = r.c_upper = c_val;
    return r;
}

/// Face associated with a vertex: the lowest-index face containing it, with
/// boundary vertices restricted to boundary faces.
inline int select_face(const SimplicialMesh& m, int vertex) {
    require(vertex >= 0 && vertex < m.n_vertices(), "select_face: vertex out of range");
    for (int f : m.vertex_faces[vertex]) {  // ascending
        if (m.boundary_vertex[vertex] && !m.face_boundary[f]) continue;
        return f;
    }
    ensure(false, "select_face: no admissible face (corrupt incidence)");
    return -1;
}

/// All cells whose closure intersects the closure of the given cell. In a
/// conforming simplicial mesh this is exactly the set of cells sharing at
/// least one vertex with it.
inline std::vector<int> support_region(const SimplicialMesh& m, int cell) {
    require(cell >= 0 && cell < m.n_cells(), "support_region: cell out of range");
    std::set<int> out;
    for (int i = 0; i <= m.dim; ++i)
        for (int c : m.vertex_cells[m.cells[cell][i]]) out.insert(c);
    return {out.begin(), out.end()};
}

/// Plain-text export: `dim N ncells`, N coordinate lines, ncells index lines,
/// then the boundary-vertex bitmask as one line of 0/1 characters.
inline void write_mesh(std::ostream& os, const SimplicialMesh& m) {
    os.precision(17);
    os << m.dim << ' ' << m.n_vertices() << ' ' << m.n_cells() << '\n';
    for (const Vec3& v : m.vertices) {
        os << v.x << ' ' << v.y;
        if (m.dim == 3) os << ' ' << v.z;
        os << '\n';
    }
    for (const Cell& c : m.cells) {
        os << c[0] << ' ' << c[1] << ' ' << c[2];
        if (m.dim == 3) os << ' ' << c[3];
        os << '\n';
    }
    for (int v = 0; v < m.n_vertices(); ++v) os << (m.boundary_vertex[v] ? '1' : '0');
    os << '\n';
}

inline SimplicialMesh read_mesh(std::istream& is) {
    SimplicialMesh m;
    int nv = 0, nc = 0;
    is >> m.dim >> nv >> nc;
    ensure(is.good() && nv > 0 && nc > 0, "read_mesh: bad header");
    require(m.dim == 2 || m.dim == 3, "read_mesh: dim must be 2 or 3");
    m.vertices.resize(nv);
    for (Vec3& v : m.vertices) {
        is >> v.x >> v.y;
        if (m.dim == 3) is >> v.z;
    }
    m.cells.resize(nc, {-1, -1, -1, -1});
    for (Cell& c : m.cells) {
        is >> c[0] >> c[1] >> c[2];
        if (m.dim == 3) is >> c[3];
    }
    std::string mask;
    is >> mask;
    ensure(!is.fail() && static_cast<int>(mask.size()) == nv, "read_mesh: bad bitmask");
    m.finalize();
    for (int v = 0; v < nv; ++v)
        ensure((mask[v] == '1') == (m.boundary_vertex[v] != 0),
               "read_mesh: boundary bitmask inconsistent with topology");
    return m;
}

}  // namespace detproj::mesh
