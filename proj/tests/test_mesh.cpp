#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "detproj/mesh.hpp"

using namespace detproj;
using mesh::SimplicialMesh;

namespace {

bool on_box_boundary(const Vec3& v, int dim, double eps = 1e-12) {
    bool b = std::abs(v.x) < eps || std::abs(v.x - 1.0) < eps || std::abs(v.y) < eps ||
             std::abs(v.y - 1.0) < eps;
    if (dim == 3) b = b || std::abs(v.z) < eps || std::abs(v.z - 1.0) < eps;
    return b;
}

// independent oracle: cells whose closures intersect = cells sharing a vertex,
// found by a full pairwise scan
std::vector<int> support_region_bruteforce(const SimplicialMesh& m, int cell) {
    std::vector<int> out;
    for (int c = 0; c < m.n_cells(); ++c) {
        bool shares = false;
        for (int i = 0; i <= m.dim; ++i)
            for (int j = 0; j <= m.dim; ++j)
                if (m.cells[cell][i] == m.cells[c][j]) shares = true;
        if (shares) out.push_back(c);
    }
    return out;
}

}  // namespace

TEST_CASE("box mesh combinatorics match the uniform-grid counts") {
    auto m1 = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 1);
    CHECK(m1.n_vertices() == 4);
    CHECK(m1.n_cells() == 2);
    CHECK_THAT(m1.domain_measure, Catch::Matchers::WithinAbs(1.0, 1e-15));

    auto m4 = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 4);
    CHECK(m4.n_vertices() == 25);
    CHECK(m4.n_cells() == 32);
    CHECK_THAT(mesh::metrics(m4).h,
               Catch::Matchers::WithinAbs(std::sqrt(2.0) / 4.0, 1e-14));

    auto c2 = mesh::build_box_mesh(3, {1.0, 1.0, 1.0}, 2);
    CHECK(c2.n_vertices() == 27);
    CHECK(c2.n_cells() == 48);
    CHECK_THAT(mesh::metrics(c2).h, Catch::Matchers::WithinAbs(std::sqrt(3.0) / 2.0, 1e-14));

    CHECK_THROWS_AS(mesh::build_box_mesh(4, {1.0, 1.0, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(mesh::build_box_mesh(2, {-1.0, 1.0, 0.0}, 2), std::invalid_argument);
}

TEST_CASE("structural invariants hold for built meshes") {
    for (int dim : {2, 3}) {
        auto m = mesh::build_box_mesh(dim, {1.0, 1.0, 1.0}, dim == 2 ? 4 : 2);
        double tiled = 0.0;
        for (int c = 0; c < m.n_cells(); ++c) {
            CHECK(m.signed_cell_measure(c) > 0.0);
            tiled += m.cell_measure(c);
        }
        CHECK_THAT(tiled, Catch::Matchers::WithinRel(m.domain_measure, 1e-12));
        for (int f = 0; f < m.n_faces(); ++f) {
            int incident = (m.face_cells[f][0] >= 0) + (m.face_cells[f][1] >= 0);
            CHECK(incident == (m.face_boundary[f] ? 1 : 2));
        }
        for (int v = 0; v < m.n_vertices(); ++v)
            CHECK(static_cast<bool>(m.boundary_vertex[v]) == on_box_boundary(m.vertices[v], dim));
    }
}

TEST_CASE("refine quadruples triangles and halves h") {
    auto m = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 1);
    auto r = mesh::refine(m);
    CHECK(r.n_cells() == 8);
    auto met0 = mesh::metrics(m);
    auto met1 = mesh::metrics(r);
    CHECK_THAT(met1.h, Catch::Matchers::WithinRel(0.5 * met0.h, 1e-14));
    CHECK_THAT(met1.quasi_uniformity,
               Catch::Matchers::WithinAbs(met0.quasi_uniformity, 1e-12));
    CHECK(met1.shape_regularity <= met0.shape_regularity * (1.0 + 1e-9));

    // vertex counts along the refinement family of the n=2 square mesh
    auto f = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 2);
    std::vector<int> counts{f.n_vertices()};
    for (int l = 0; l < 3; ++l) {
        f = mesh::refine(f);
        counts.push_back(f.n_vertices());
    }
    CHECK(counts == std::vector<int>{9, 25, 81, 289});
}

TEST_CASE("metrics report the N h^d constants of the family") {
    auto m4 = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 4);
    auto met = mesh::metrics(m4);
    CHECK(met.n_vertices == 25);
    CHECK_THAT(met.c_lower, Catch::Matchers::WithinRel(3.125, 1e-12));
    auto met1 = mesh::metrics(mesh::refine(m4));
    CHECK(met1.n_vertices == 81);
    CHECK_THAT(met1.c_lower, Catch::Matchers::WithinRel(81.0 / 32.0, 1e-12));
    // regular-simplex lower bounds for the shape constant
    CHECK(met.shape_regularity >= 2.0 * std::sqrt(3.0) - 1e-12);
    auto met3 = mesh::metrics(mesh::build_box_mesh(3, {1.0, 1.0, 1.0}, 2));
    CHECK(met3.shape_regularity >= 2.0 * std::sqrt(6.0) - 1e-12);
}

TEST_CASE("3D refinement octasects and stays non-degenerate") {
    auto m = mesh::build_box_mesh(3, {1.0, 1.0, 1.0}, 1);
    auto met0 = mesh::metrics(m);
    std::vector<double> shape{met0.shape_regularity};
    std::vector<double> h{met0.h};
    std::vector<double> q{met0.quasi_uniformity};
    for (int l = 0; l < 3; ++l) {
        auto r = mesh::refine(m);
        CHECK(r.n_cells() == 8 * m.n_cells());
        auto met = mesh::metrics(r);
        shape.push_back(met.shape_regularity);
        h.push_back(met.h);
        q.push_back(met.quasi_uniformity);
        m = r;
    }
    for (std::size_t l = 1; l < h.size(); ++l)
        CHECK_THAT(h[l], Catch::Matchers::WithinRel(0.5 * h[l - 1], 1e-13));
    // degeneracy-minimizing octasection keeps the Kuhn family self-similar
    for (double s : shape) CHECK(s <= shape.front() * (1.0 + 1e-9));
    for (double v : q) CHECK(v <= q.front() * (1.0 + 1e-9));
}

TEST_CASE("Nh^d bracket stays within a factor-4 band over the family") {
    for (int dim : {2, 3}) {
        auto m = mesh::build_box_mesh(dim, {1.0, 1.0, 1.0}, dim == 2 ? 4 : 2);
        double lo = std::numeric_limits<double>::max(), hi = 0.0;
        for (int l = 0; l < 4; ++l) {
            if (l > 0) m = mesh::refine(m);
            double c = mesh::metrics(m).c_lower;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        CHECK(hi / lo < 4.0);
    }
}

TEST_CASE("refine keeps the boundary flags geometrically correct") {
    for (int dim : {2, 3}) {
        auto m = mesh::refine(mesh::build_box_mesh(dim, {1.0, 1.0, 1.0}, 2));
        for (int v = 0; v < m.n_vertices(); ++v)
            CHECK(static_cast<bool>(m.boundary_vertex[v]) == on_box_boundary(m.vertices[v], dim));
    }
}

TEST_CASE("select_face honors the two selection rules deterministically") {
    for (int dim : {2, 3}) {
        auto m = mesh::build_box_mesh(dim, {1.0, 1.0, 1.0}, dim == 2 ? 4 : 2);
        for (int v = 0; v < m.n_vertices(); ++v) {
            int f = mesh::select_face(m, v);
            bool contains = false;
            for (int k = 0; k < m.dim; ++k) contains = contains || m.faces[f][k] == v;
            CHECK(contains);
            if (m.boundary_vertex[v]) CHECK(m.face_boundary[f] == 1);
            CHECK(mesh::select_face(m, v) == f);  // deterministic
        }
    }
    // corner (0,0) of the square gets an axis-aligned boundary edge
    auto sq = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 4);
    int corner = 0;
    REQUIRE(norm(sq.vertices[corner]) < 1e-14);
    int f = mesh::select_face(sq, corner);
    const Vec3& other = sq.vertices[sq.faces[f][0] == corner ? sq.faces[f][1] : sq.faces[f][0]];
    CHECK((std::abs(other.x) < 1e-14 || std::abs(other.y) < 1e-14));
    CHECK(sq.face_boundary[f] == 1);
}

TEST_CASE("support regions match the brute-force closure scan") {
    auto m1 = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 1);
    CHECK(mesh::support_region(m1, 0) == std::vector<int>{0, 1});

    auto m = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 4);
    // find an interior cell: all three vertices interior
    int interior = -1;
    for (int c = 0; c < m.n_cells() && interior < 0; ++c) {
        bool ok = true;
        for (int i = 0; i <= 2; ++i)
            if (m.boundary_vertex[m.cells[c][i]]) ok = false;
        if (ok) interior = c;
    }
    REQUIRE(interior >= 0);
    auto region = mesh::support_region(m, interior);
    CHECK(region.size() == 13);
    CHECK(region == support_region_bruteforce(m, interior));

    // the support-cardinality constant saturates under refinement once the
    // mesh has fully interior cells
    auto f = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 4);
    for (int l = 0; l < 3; ++l) {
        std::size_t level_worst = 0;
        for (int c = 0; c < f.n_cells(); ++c)
            level_worst = std::max(level_worst, mesh::support_region(f, c).size());
        CHECK(level_worst == 13);
        for (int c = 0; c < std::min(f.n_cells(), 10); ++c)
            CHECK(mesh::support_region(f, c) == support_region_bruteforce(f, c));
        f = mesh::refine(f);
    }
    // same saturation in 3D for the Kuhn family (fully interior tets appear
    // one refinement after n = 2)
    auto k3 = mesh::refine(mesh::build_box_mesh(3, {1.0, 1.0, 1.0}, 2));
    std::size_t prev = 0;
    for (int l = 0; l < 2; ++l) {
        std::size_t level_worst = 0;
        for (int c = 0; c < k3.n_cells(); ++c)
            level_worst = std::max(level_worst, mesh::support_region(k3, c).size());
        if (l > 0) CHECK(level_worst == prev);
        prev = level_worst;
        k3 = mesh::refine(k3);
    }
}

TEST_CASE("mesh files are canonical and validated on read") {
    for (int dim : {2, 3}) {
        auto m = mesh::build_box_mesh(dim, {1.0, 1.0, 1.0}, 2);
        std::ostringstream os;
        mesh::write_mesh(os, m);
        std::istringstream is(os.str());
        auto back = mesh::read_mesh(is);
        std::ostringstream os2;
        mesh::write_mesh(os2, back);
        CHECK(os.str() == os2.str());  // canonical bytes
    }
    // corrupt bitmask is rejected
    auto m = mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 1);
    std::ostringstream os;
    mesh::write_mesh(os, m);
    std::string blob = os.str();
    blob[blob.size() - 2] = blob[blob.size() - 2] == '1' ? '0' : '1';
    std::istringstream is(blob);
    CHECK_THROWS_AS(mesh::read_mesh(is), std::runtime_error);
}
