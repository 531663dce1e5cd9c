import math

import numpy as np
import pytest

import decflow


def test_version():
    assert decflow.__version__ == decflow.version()
    assert decflow.__version__.count(".") == 2


def test_icosahedron():
    mesh = decflow.generate_mesh("sphere", 1)
    assert mesh.vertices.shape == (12, 3)
    assert mesh.faces.shape == (20, 3)
    assert mesh.edges.shape == (30, 2)
    assert mesh.euler_characteristic == 2
    assert mesh.well_centered
    assert np.allclose(np.linalg.norm(mesh.vertices, axis=1), 1.0)
    assert "V=12" in repr(mesh)


def test_exterior_derivatives_compose_to_zero():
    mesh = decflow.generate_mesh("torus", 16)
    product = mesh.d1() @ mesh.d0()
    assert mesh.euler_characteristic == 0
    assert product.shape == (mesh.faces.shape[0], mesh.vertices.shape[0])
    assert abs(product).max() == 0


def test_run_returns_diagnostics():
    result = decflow.run("surface = sphere\nresolution = 4\nt_end = 0.5\n")
    assert result["time"] == pytest.approx([0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
    assert max(result["div_res"][1:]) <= 1e-9
    energy = result["E"]
    assert energy[0] == pytest.approx(4 * math.pi / 3, rel=0.05)
    assert all(b <= a for a, b in zip(energy, energy[1:]))
    assert len(result["u"]) == 3 * len(result["p"]) - 6
    assert len(result["vortices"]) == 2


def test_errors_map_to_exceptions():
    with pytest.raises(decflow.ConfigError):
        decflow.run("re = -1\n")
    with pytest.raises(decflow.ConfigError):
        decflow.format_config("bogus = 1\n")
    with pytest.raises(decflow.MeshError):
        decflow.load_mesh("/nonexistent/mesh.off")
    assert issubclass(decflow.SolverError, decflow.DecflowError)


def test_flatfd_study_is_second_order():
    rows = decflow.flatfd_study([16, 32, 64])
    eocs = [r["eoc"] for r in rows if not math.isnan(r["eoc"])]
    assert eocs
    assert all(abs(e - 2.0) < 0.1 for e in eocs)


def test_eoc_table():
    assert decflow.eoc_table([0.04, 0.01], [0.2, 0.1]) == pytest.approx([2.0])
