import json

import numpy as np
import pytest

from weierstrass_disks import (CheckRecord, ConstructionParams, GridSpec, HelicoidData,
                               SurfaceMesh, VerificationReport, ball_radius, build_domain,
                               build_mesh, contains, eval_F_batch, gauss_curvature, read_mesh,
                               self_intersections, write_mesh, write_report)
from weierstrass_disks.domain import mesh_columns
from weierstrass_disks.export import triangle_normals


def test_helicoid_structured_mesh():
    mesh = build_mesh(HelicoidData(), GridSpec(nx=32, ny=33))
    assert mesh.n_vertices == 32 * 33
    assert len(mesh.triangles) == 2 * 31 * 32
    res = self_intersections(mesh.positions, mesh.triangles)
    assert len(res.degenerate) == 0 and len(res.pairs) == 0


@pytest.mark.parametrize("points", [[0.0], [-0.2, 0.2], [-0.3, 0.0, 0.3]])
def test_vertex_count_and_membership(points):
    p = ConstructionParams(points, 0.05)
    grid = GridSpec(nx=40, ny=9)
    mesh = build_mesh(p, grid)
    ncols = mesh_columns(build_domain(p), grid)[0].size
    assert ncols == 40 * len(points) - (len(points) - 1)
    assert mesh.n_vertices == ncols * 9
    assert np.all(contains(build_domain(p), mesh.domain))


def test_vertices_equal_batch_evaluation():
    p = ConstructionParams([-0.2, 0.2], 0.1)
    grid = GridSpec(nx=30, ny=7)
    mesh = build_mesh(p, grid)
    F = eval_F_batch(p, mesh.domain.reshape(mesh.shape)).F.reshape(-1, 3)
    assert np.array_equal(mesh.positions, F)


@pytest.mark.parametrize("points, a", [([0.0], 0.1), ([-0.3, 0.0, 0.3], 0.05)])
def test_orientation_agrees_with_normal(points, a):
    p = ConstructionParams(points, a)
    mesh = build_mesh(p, GridSpec(nx=100, ny=21))
    nt = triangle_normals(mesh)
    centroid = mesh.domain[mesh.triangles].mean(axis=1)
    n = gauss_curvature(p, centroid, check_domain=False).normal
    agree = np.sum(nt * n, axis=1) > 0
    assert agree.mean() >= 0.999


def test_clip_to_ball():
    p = ConstructionParams([0.0], 0.1)
    R = ball_radius(0.0233708)
    mesh = build_mesh(p, GridSpec(nx=200, ny=41), clip_radius=R)
    assert np.all(np.linalg.norm(mesh.positions, axis=1) <= R + 1e-9)
    assert mesh.n_vertices > 0 and mesh.shape is None
    assert np.all(contains(build_domain(p), mesh.domain))
    assert mesh.provenance["clip_radius"] == R


def test_ball_radius():
    assert ball_radius(0.1) == 0.05
    assert ball_radius(2.0) == 0.25


def test_single_triangle_obj(tmp_path):
    mesh = SurfaceMesh(positions=np.eye(3), domain=np.zeros(3, complex),
                       triangles=np.array([[0, 1, 2]]))
    path = tmp_path / "t.obj"
    write_mesh(mesh, "obj", path)
    lines = path.read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 3
    assert [l for l in lines if l.startswith("f")] == ["f 1 2 3"]


@pytest.mark.parametrize("fmt, binary", [("obj", False), ("ply", False), ("ply", True)])
def test_round_trip(tmp_path, fmt, binary):
    mesh = build_mesh(ConstructionParams([-0.2, 0.2], 0.1), GridSpec(nx=20, ny=5))
    path = tmp_path / f"m.{fmt}"
    write_mesh(mesh, fmt, path, binary=binary)
    V, T = read_mesh(path)
    assert np.max(np.abs(V - mesh.positions)) < 1e-6
    assert np.array_equal(T, mesh.triangles)
    if binary:
        assert b"binary_little_endian" in path.read_bytes()[:100]
    else:
        assert path.read_text().startswith("ply\nformat ascii" if fmt == "ply" else "v ")


@pytest.mark.parametrize("fmt", ["obj", "ply"])
def test_empty_mesh(tmp_path, fmt):
    mesh = SurfaceMesh(positions=np.zeros((0, 3)), domain=np.zeros(0, complex),
                       triangles=np.zeros((0, 3), int))
    path = tmp_path / f"e.{fmt}"
    write_mesh(mesh, fmt, path)
    V, T = read_mesh(path)
    assert V.shape == (0, 3) and T.shape == (0, 3)


def test_bad_format(tmp_path):
    mesh = SurfaceMesh(positions=np.eye(3), domain=np.zeros(3, complex),
                       triangles=np.array([[0, 1, 2]]))
    with pytest.raises(ValueError):
        write_mesh(mesh, "stl", tmp_path / "x.stl")


def _report(checks):
    return VerificationReport(params={"points": [0.0], "a": 0.1}, grid={"nx": 2, "ny": 3},
                              checks=checks)


def test_report_empty(tmp_path):
    path = tmp_path / "r.json"
    write_report(_report([]), path)
    doc = json.loads(path.read_text())
    assert doc["checks"] == []
    assert doc["params"] == {"points": [0.0], "a": 0.1}
    assert doc["pass"] is True


def test_report_failure_propagates(tmp_path):
    rep = _report([CheckRecord("b", "anchor", True, 1.0, 0.0, None),
                   CheckRecord("a", "anchor", False, -1.0, 0.0, 0.1 + 0.2j)])
    path = tmp_path / "r.json"
    write_report(rep, path)
    doc = json.loads(path.read_text())
    assert doc["pass"] is False
    assert [c["name"] for c in doc["checks"]] == ["a", "b"]
    assert doc["checks"][0]["worst_z"] == [0.1, 0.2]
    assert set(doc["checks"][0]) >= {"name", "anchor", "pass", "margin", "tolerance", "worst_z"}


def test_report_idempotent(tmp_path):
    rep = _report([CheckRecord("x", "anchor", True, float("inf"), 0.0, None,
                               details={"arr": np.arange(3), "v": np.float64(2.5)})])
    p1, p2 = tmp_path / "1.json", tmp_path / "2.json"
    write_report(rep, p1)
    write_report(json.loads(p1.read_text()), p2)
    assert p1.read_text() == p2.read_text()
