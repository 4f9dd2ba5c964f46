#include "mpxa/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mpxa/errors.hpp"

namespace mpxa {

namespace {

// Uniform double in [-1, 1], built from the raw generator output so the
// stream is identical across standard library implementations.
double uniform_pm1(std::mt19937_64& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
    return 2.0 * u - 1.0;
}

// Star-shapedness of a polygon relative to a candidate center: every
// triangle of the vertex fan and both triangles of every midpoint subcell
// must have strictly positive area.
bool star_shaped(const std::vector<Vec2>& poly, const Vec2& center) {
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % m];
        if (tri_area(center, a, b) <= 0.0) return false;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& prev = poly[(i + m - 1) % m];
        const Vec2& s = poly[i];
        const Vec2& next = poly[(i + 1) % m];
        const Vec2 m1 = 0.5 * (prev + s); // midpoint of the preceding face
        const Vec2 m2 = 0.5 * (s + next); // midpoint of the succeeding face
        if (tri_area(center, m1, s) <= 0.0) return false;
        if (tri_area(center, s, m2) <= 0.0) return false;
    }
    return true;
}

// Vertex-average center with area-centroid fallback.
bool choose_center(const std::vector<Vec2>& poly, Vec2& center) {
    Vec2 avg = Vec2::Zero();
    for (const Vec2& p : poly) avg += p;
    avg /= static_cast<double>(poly.size());
    if (star_shaped(poly, avg)) {
        center = avg;
        return true;
    }
    const Vec2 c = polygon_centroid(poly);
    if (star_shaped(poly, c)) {
        center = c;
        return true;
    }
    return false;
}

std::vector<Vec2> cell_polygon(const std::vector<Vec2>& vertices, const std::vector<int>& loop) {
    std::vector<Vec2> poly;
    poly.reserve(loop.size());
    for (int v : loop) poly.push_back(vertices[static_cast<std::size_t>(v)]);
    return poly;
}

} // namespace

double Mesh::total_volume() const {
    double v = 0.0;
    for (double m : cell_volumes) v += m;
    return v;
}

double Mesh::characteristic_size() const {
    double h = 0.0;
    for (const auto& loop : cells) {
        for (std::size_t i = 0; i < loop.size(); ++i)
            for (std::size_t j = i + 1; j < loop.size(); ++j)
                h = std::max(h, (vertices[static_cast<std::size_t>(loop[i])] -
                                 vertices[static_cast<std::size_t>(loop[j])])
                                    .norm());
    }
    return h;
}

std::array<int, 2> Mesh::faces_at_cell_vertex(int cell, int vertex) const {
    const auto& loop = cells[static_cast<std::size_t>(cell)];
    const auto& cf = cell_faces[static_cast<std::size_t>(cell)];
    const int m = static_cast<int>(loop.size());
    for (int i = 0; i < m; ++i) {
        if (loop[static_cast<std::size_t>(i)] == vertex)
            return {cf[static_cast<std::size_t>((i + m - 1) % m)], cf[static_cast<std::size_t>(i)]};
    }
    throw InvalidInput("vertex " + std::to_string(vertex) + " is not a corner of cell " +
                       std::to_string(cell));
}

Mesh build_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells,
                const std::vector<std::pair<std::array<int, 2>, BcType>>& boundary) {
    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.cells = std::move(cells);

    const int nv = mesh.n_vertices();
    for (const auto& loop : mesh.cells) {
        if (loop.size() < 3) throw InvalidInput("cell with fewer than 3 vertices");
        for (int v : loop)
            if (v < 0 || v >= nv) throw InvalidInput("dangling vertex index " + std::to_string(v));
    }

    // Geometry and star-shape validation.
    mesh.cell_centers.resize(mesh.cells.size());
    mesh.cell_volumes.resize(mesh.cells.size());
    for (std::size_t k = 0; k < mesh.cells.size(); ++k) {
        const auto poly = cell_polygon(mesh.vertices, mesh.cells[k]);
        const double area = polygon_area(poly);
        if (area <= 0.0) throw InvalidInput("clockwise cell loop in cell " + std::to_string(k));
        mesh.cell_volumes[k] = area;
        if (!choose_center(poly, mesh.cell_centers[k]))
            throw InvalidInput("cell " + std::to_string(k) + " is not star-shaped");
    }

    // Derive faces from the cell loops.
    std::map<std::array<int, 2>, int> face_of_edge;
    mesh.cell_faces.resize(mesh.cells.size());
    for (std::size_t k = 0; k < mesh.cells.size(); ++k) {
        const auto& loop = mesh.cells[k];
        const std::size_t m = loop.size();
        mesh.cell_faces[k].resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const int a = loop[i];
            const int b = loop[(i + 1) % m];
            const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
            auto it = face_of_edge.find(key);
            if (it == face_of_edge.end()) {
                Face f;
                f.vertices = {a, b};
                f.cell_lo = static_cast<int>(k);
                f.cell_hi = kBoundary;
                mesh.faces.push_back(f);
                it = face_of_edge.emplace(key, static_cast<int>(mesh.faces.size()) - 1).first;
            } else {
                Face& f = mesh.faces[static_cast<std::size_t>(it->second)];
                if (f.cell_hi != kBoundary)
                    throw InvalidInput("non-manifold face (" + std::to_string(a) + "," +
                                       std::to_string(b) + ") shared by three cells");
                f.cell_hi = static_cast<int>(k);
                if (f.cell_hi < f.cell_lo) {
                    std::swap(f.cell_lo, f.cell_hi);
                    std::swap(f.vertices[0], f.vertices[1]); // keep lo's traversal order
                }
            }
            mesh.cell_faces[k][i] = it->second;
        }
    }

    for (Face& f : mesh.faces) {
        const Vec2& a = mesh.vertices[static_cast<std::size_t>(f.vertices[0])];
        const Vec2& b = mesh.vertices[static_cast<std::size_t>(f.vertices[1])];
        f.center = 0.5 * (a + b);
        const Vec2 t = b - a;
        f.area = t.norm();
        if (f.area <= 0.0) throw InvalidInput("degenerate zero-length face");
        f.normal = Vec2(t.y(), -t.x()) / f.area; // outward from cell_lo (CCW traversal)
    }

    mesh.boundary_tags.assign(mesh.faces.size(), BcType::Dirichlet);
    for (const auto& [key, tag] : boundary) {
        const std::array<int, 2> k{std::min(key[0], key[1]), std::max(key[0], key[1])};
        auto it = face_of_edge.find(k);
        if (it == face_of_edge.end())
            throw InvalidInput("boundary tag refers to a non-existent face");
        if (!mesh.faces[static_cast<std::size_t>(it->second)].is_boundary())
            throw InvalidInput("boundary tag refers to an interior face");
        mesh.boundary_tags[static_cast<std::size_t>(it->second)] = tag;
    }

    mesh.vertex_cells.resize(static_cast<std::size_t>(nv));
    for (std::size_t k = 0; k < mesh.cells.size(); ++k)
        for (int v : mesh.cells[k]) mesh.vertex_cells[static_cast<std::size_t>(v)].push_back(static_cast<int>(k));
    mesh.vertex_faces.resize(static_cast<std::size_t>(nv));
    for (std::size_t f = 0; f < mesh.faces.size(); ++f)
        for (int v : mesh.faces[f].vertices) mesh.vertex_faces[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
    for (auto& l : mesh.vertex_cells) std::sort(l.begin(), l.end());
    for (auto& l : mesh.vertex_faces) std::sort(l.begin(), l.end());

    return mesh;
}

namespace {

Mesh generate_cartesian_like(const MeshSpec& spec, bool triangles) {
    const int n = spec.n;
    if (n < 2) throw InvalidInput("mesh resolution must be at least 2");
    if (spec.perturbation < 0.0 || spec.perturbation >= 0.5)
        throw InvalidInput("perturbation must lie in [0, 0.5)");

    const double h = 1.0 / n;
    std::vector<Vec2> verts;
    verts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) verts.emplace_back(i * h, j * h);
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };

    if (spec.perturbation > 0.0) {
        std::mt19937_64 rng(spec.seed);
        for (int j = 1; j < n; ++j) {
            for (int i = 1; i < n; ++i) {
                const Vec2 base = verts[static_cast<std::size_t>(vid(i, j))];
                // Rejection-resample until every incident cell stays star-shaped.
                for (int attempt = 0;; ++attempt) {
                    const Vec2 d(uniform_pm1(rng), uniform_pm1(rng));
                    const Vec2 cand = base + spec.perturbation * h * d;
                    verts[static_cast<std::size_t>(vid(i, j))] = cand;
                    bool ok = true;
                    for (int dj = -1; dj <= 0 && ok; ++dj) {
                        for (int di = -1; di <= 0 && ok; ++di) {
                            const int ci = i + di, cj = j + dj;
                            std::vector<Vec2> quad = {verts[static_cast<std::size_t>(vid(ci, cj))],
                                                      verts[static_cast<std::size_t>(vid(ci + 1, cj))],
                                                      verts[static_cast<std::size_t>(vid(ci + 1, cj + 1))],
                                                      verts[static_cast<std::size_t>(vid(ci, cj + 1))]};
                            Vec2 c;
                            if (triangles) {
                                // check the two triangles of the split instead
                                std::vector<Vec2> t1 = {quad[0], quad[1], quad[2]};
                                std::vector<Vec2> t2 = {quad[0], quad[2], quad[3]};
                                ok = choose_center(t1, c) && choose_center(t2, c);
                            } else {
                                ok = choose_center(quad, c);
                            }
                        }
                    }
                    if (ok) break;
                    verts[static_cast<std::size_t>(vid(i, j))] = base;
                    if (attempt > 200)
                        throw InvalidInput("perturbation inverts a subcell; no valid sample found");
                }
            }
        }
    }

    std::vector<std::vector<int>> cells;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
            if (triangles) {
                cells.push_back({v00, v10, v11});
                cells.push_back({v00, v11, v01});
            } else {
                cells.push_back({v00, v10, v11, v01});
            }
        }
    }
    return build_mesh(std::move(verts), std::move(cells));
}

// --- Voronoi-of-jittered-lattice generator ------------------------------
//
// Every polygon vertex is identified by a canonical key (the set of planes
// it lies on) and its coordinates are recomputed from that key, so the three
// cells sharing a Voronoi vertex produce bit-identical coordinates and the
// weld is exact.

struct PlaneId {
    int a, b; // bisector of sites (a, b) with a < b; square edge encoded as (-1, e)
    bool operator<(const PlaneId& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
    bool operator==(const PlaneId& o) const { return a == o.a && b == o.b; }
};

struct VertexKey {
    PlaneId p, q; // sorted
    bool operator<(const VertexKey& o) const { return std::tie(p, q) < std::tie(o.p, o.q); }
};

VertexKey make_key(PlaneId p, PlaneId q) {
    if (q < p) std::swap(p, q);
    return {p, q};
}

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * cross2(ab, ac);
    const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
    return a + Vec2(ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2) / d;
}

// Canonical coordinates of a key, given the site positions. Square edges:
// 0 = bottom (y=0), 1 = right (x=1), 2 = top (y=1), 3 = left (x=0).
Vec2 key_coords(const VertexKey& k, const std::vector<Vec2>& sites) {
    auto edge_point = [](int e, double t) {
        switch (e) {
            case 0: return Vec2(t, 0.0);
            case 1: return Vec2(1.0, t);
            case 2: return Vec2(t, 1.0);
            default: return Vec2(0.0, t);
        }
    };
    if (k.p.a == -1 && k.q.a == -1) {
        // square corner
        const int e1 = k.p.b, e2 = k.q.b;
        if ((e1 == 0 && e2 == 3) || (e1 == 3 && e2 == 0)) return Vec2(0, 0);
        if ((e1 == 0 && e2 == 1) || (e1 == 1 && e2 == 0)) return Vec2(1, 0);
        if ((e1 == 1 && e2 == 2) || (e1 == 2 && e2 == 1)) return Vec2(1, 1);
        return Vec2(0, 1);
    }
    if (k.p.a == -1 || k.q.a == -1) {
        const int e = (k.p.a == -1) ? k.p.b : k.q.b;
        const PlaneId bis = (k.p.a == -1) ? k.q : k.p;
        const Vec2 s1 = sites[static_cast<std::size_t>(bis.a)], s2 = sites[static_cast<std::size_t>(bis.b)];
        const Vec2 m = 0.5 * (s1 + s2), d = s2 - s1;
        // solve (x(t) - m)·d = 0 on the edge
        if (e == 0 || e == 2) {
            const double y = (e == 0) ? 0.0 : 1.0;
            const double t = (m.dot(d) - y * d.y()) / d.x();
            return edge_point(e, t);
        }
        const double x = (e == 1) ? 1.0 : 0.0;
        const double t = (m.dot(d) - x * d.x()) / d.y();
        return edge_point(e, t);
    }
    // two bisectors: circumcenter of the three distinct sites, sorted
    std::vector<int> ids = {k.p.a, k.p.b, k.q.a, k.q.b};
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return circumcenter(sites[static_cast<std::size_t>(ids[0])], sites[static_cast<std::size_t>(ids[1])],
                        sites[static_cast<std::size_t>(ids[2])]);
}

struct ClipVertex {
    Vec2 x;
    VertexKey key;
};

Mesh generate_voronoi(const MeshSpec& spec) {
    const int n = spec.n;
    if (n < 2) throw InvalidInput("mesh resolution must be at least 2");
    const double h = 1.0 / n;
    const double jitter = (spec.perturbation > 0.0 ? spec.perturbation : 0.25) * h;
    if (jitter >= 0.45 * h) throw InvalidInput("voronoi jitter too large");

    std::mt19937_64 rng(spec.seed);
    std::vector<Vec2> sites;
    sites.reserve(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double dx = uniform_pm1(rng), dy = uniform_pm1(rng);
            sites.emplace_back((i + 0.5) * h + jitter * dx, (j + 0.5) * h + jitter * dy);
        }

    std::map<VertexKey, int> vertex_ids;
    std::vector<Vec2> verts;
    std::vector<std::vector<int>> cells;

    for (int c = 0; c < n * n; ++c) {
        const int ci = c % n, cj = c / n;
        // start from the unit square, CCW
        std::vector<ClipVertex> poly = {
            {Vec2(0, 0), make_key({-1, 3}, {-1, 0})},
            {Vec2(1, 0), make_key({-1, 0}, {-1, 1})},
            {Vec2(1, 1), make_key({-1, 1}, {-1, 2})},
            {Vec2(0, 1), make_key({-1, 2}, {-1, 3})},
        };
        // the plane of the edge from poly[i] to poly[i+1]
        std::vector<PlaneId> edge_plane = {{-1, 0}, {-1, 1}, {-1, 2}, {-1, 3}};

        for (int dj = -2; dj <= 2; ++dj) {
            for (int di = -2; di <= 2; ++di) {
                if (di == 0 && dj == 0) continue;
                const int ni = ci + di, nj = cj + dj;
                if (ni < 0 || ni >= n || nj < 0 || nj >= n) continue;
                const int nb = nj * n + ni;
                const PlaneId plane{std::min(c, nb), std::max(c, nb)};
                const Vec2 lo = sites[static_cast<std::size_t>(plane.a)], hi = sites[static_cast<std::size_t>(plane.b)];
                const Vec2 m = 0.5 * (lo + hi), d = hi - lo;
                // keep the side of this cell; the signed distance is computed
                // identically from both neighbor cells
                const double sign = (c == plane.a) ? 1.0 : -1.0;
                auto inside = [&](const Vec2& x) { return sign * (x - m).dot(d) < 0.0; };

                std::vector<ClipVertex> out;
                std::vector<PlaneId> out_planes;
                const std::size_t np = poly.size();
                if (np == 0) break;
                for (std::size_t i = 0; i < np; ++i) {
                    const ClipVertex& cur = poly[i];
                    const ClipVertex& nxt = poly[(i + 1) % np];
                    const bool cin = inside(cur.x), nin = inside(nxt.x);
                    if (cin) {
                        out.push_back(cur);
                        out_planes.push_back(edge_plane[i]);
                    }
                    if (cin != nin) {
                        const VertexKey k = make_key(edge_plane[i], plane);
                        ClipVertex v{key_coords(k, sites), k};
                        out.push_back(v);
                        out_planes.push_back(cin ? plane : edge_plane[i]);
                    }
                }
                poly = std::move(out);
                edge_plane = std::move(out_planes);
            }
        }
        if (poly.size() < 3) throw InvalidInput("degenerate voronoi cell");

        std::vector<int> loop;
        loop.reserve(poly.size());
        for (const ClipVertex& v : poly) {
            auto it = vertex_ids.find(v.key);
            int id;
            if (it == vertex_ids.end()) {
                id = static_cast<int>(verts.size());
                verts.push_back(v.x);
                vertex_ids.emplace(v.key, id);
            } else {
                id = it->second;
            }
            if (loop.empty() || loop.back() != id) loop.push_back(id);
        }
        while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
        cells.push_back(std::move(loop));
    }

    return build_mesh(std::move(verts), std::move(cells));
}

} // namespace

Mesh generate_mesh(const MeshSpec& spec) {
    switch (spec.kind) {
        case MeshKind::Cartesian: {
            MeshSpec s = spec;
            s.perturbation = 0.0;
            return generate_cartesian_like(s, false);
        }
        case MeshKind::PerturbedQuad:
            return generate_cartesian_like(spec, false);
        case MeshKind::Triangle:
            return generate_cartesian_like(spec, true);
        case MeshKind::VoronoiPolygon:
            return generate_voronoi(spec);
    }
    throw InvalidInput("unknown mesh kind");
}

// --- JSON i/o -------------------------------------------------------------

std::string mesh_to_json(const Mesh& mesh) {
    nlohmann::ordered_json j;
    j["vertices"] = nlohmann::ordered_json::array();
    for (const Vec2& v : mesh.vertices) j["vertices"].push_back({v.x(), v.y()});
    j["cells"] = mesh.cells;
    j["boundary"] = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        if (!mesh.faces[f].is_boundary()) continue;
        nlohmann::ordered_json b;
        b["face"] = mesh.faces[f].vertices;
        b["tag"] = mesh.boundary_tags[f] == BcType::Dirichlet ? "dirichlet" : "neumann";
        j["boundary"].push_back(b);
    }
    return j.dump(2) + "\n";
}

Mesh mesh_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed mesh file: ") + e.what());
    }
    if (!j.contains("vertices") || !j.contains("cells"))
        throw InvalidInput("malformed mesh file: missing vertices or cells");

    std::vector<Vec2> verts;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2) throw InvalidInput("malformed vertex entry");
        verts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    std::vector<std::vector<int>> cells;
    for (const auto& c : j["cells"]) cells.push_back(c.get<std::vector<int>>());

    std::vector<std::pair<std::array<int, 2>, BcType>> boundary;
    if (j.contains("boundary")) {
        for (const auto& b : j["boundary"]) {
            const auto f = b["face"].get<std::array<int, 2>>();
            const std::string tag = b["tag"].get<std::string>();
            if (tag != "dirichlet" && tag != "neumann")
                throw InvalidInput("unknown boundary tag '" + tag + "'");
            boundary.emplace_back(f, tag == "dirichlet" ? BcType::Dirichlet : BcType::Neumann);
        }
    }
    return build_mesh(std::move(verts), std::move(cells), boundary);
}

void save_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << mesh_to_json(mesh);
}

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return mesh_from_json(ss.str());
}

} // namespace mpxa
