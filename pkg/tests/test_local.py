import numpy as np
import pytest

from oracles import domain_points, fd_metric, kahler_from_values
from specialkahler.catalog import catalog_get
from specialkahler.errors import (DimensionError, DomainError, FrameDegeneracyError, HomogeneityError,
                                  PrepotentialNotFoundError)
from specialkahler.holo import parse_expr
from specialkahler.local import (ConePoint, LocalPrepotentialModel, LocalSectionModel, apply_symplectic_local,
                                 build_section, check_homogeneity, cone_metric, constraint_check,
                                 covariant_derivative, gauge_fix, kahler_shift, local_kahler, local_kinetic,
                                 local_metric, point_geometry, prepotential_exists, reconstruct_prepotential)
from specialkahler.symplectic import SymplecticFrame, SymplecticMatrix, random_symplectic

DUALITY_S = np.array([[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=float)


@pytest.fixture(scope="module")
def worked():
    return catalog_get("paper-n1").model.build_section()


@pytest.fixture(scope="module")
def dual():
    return LocalSectionModel.from_strings(["1", "i", "-i*z", "z"], ["z"])


@pytest.fixture(scope="module")
def stu():
    return catalog_get("stu").model.build_section()


def _model(f, fields, coords, variables):
    return LocalPrepotentialModel.from_strings(f, fields, coords, variables)


# homogeneity and construction -----------------------------------------------

def test_homogeneity_check():
    assert check_homogeneity(parse_expr("-i*X0*X1", ["X0", "X1"])).max_residual < 1e-14
    assert check_homogeneity(parse_expr("X1*X2*X3/X0", ["X0", "X1", "X2", "X3"]))
    report = check_homogeneity(parse_expr("X0", ["X0", "X1"]))
    assert not report and report.max_residual > 0.1
    with pytest.raises(HomogeneityError):
        build_section(_model("X0 + X1^3", ["X0", "X1"], ["1", "z"], ["z"]))


def test_section_examples():
    v = build_section(_model("-i*X0*X1", ["X0", "X1"], ["1", "z"], ["z"]))
    assert [str(c) for c in v.components] == ["1", "z", "-i*z", "-i"]
    swapped = build_section(_model("-i*X0*X1", ["X0", "X1"], ["z", "1"], ["z"]))
    np.testing.assert_allclose(swapped.values(2 + 1j), [2 + 1j, 1, -1j, -1j * (2 + 1j)])


def test_stu_section(stu):
    z = (0.3 - 1j, 0.7 - 2j, -0.1 - 0.5j)
    v = stu.values(z)
    z1, z2, z3 = z
    np.testing.assert_allclose(v, [1, z1, z2, z3, -z1 * z2 * z3, z2 * z3, z1 * z3, z1 * z2])


def test_dimension_checks():
    with pytest.raises(DimensionError):
        _model("-i*X0*X1", ["X0", "X1"], ["1", "z", "z"], ["z"])
    with pytest.raises(DimensionError):
        LocalSectionModel.from_strings(["1", "z"], ["z"])


# point geometry --------------------------------------------------------------

@pytest.mark.parametrize("z", [1, 2 + 1j, 0.5 - 0.3j, 3 + 4j])
def test_worked_example_values(worked, dual, z):
    z = complex(z)
    s = z + z.conjugate()
    assert local_kahler(worked, z) == pytest.approx(-np.log(2 * s.real), abs=1e-13)
    assert local_metric(worked, z)[0, 0] == pytest.approx(s ** -2, abs=1e-13)
    np.testing.assert_allclose(local_kinetic(worked, z).matrix, np.diag([-1j * z, -1j / z]), atol=1e-13)
    assert local_kahler(dual, z) == pytest.approx(local_kahler(worked, z), abs=1e-13)
    np.testing.assert_allclose(local_metric(dual, z), local_metric(worked, z), atol=1e-13)
    np.testing.assert_allclose(local_kinetic(dual, z).matrix, -1j * z * np.eye(2), atol=1e-13)


def test_domain_errors(worked):
    for z in (-1, 0, -0.5 + 2j):
        with pytest.raises(DomainError):
            local_kahler(worked, z)
    with pytest.raises(DomainError):
        LocalSectionModel.from_strings(["1", "z", "-i*z", "-i"], ["z"], base_point=-1)


def test_stu_base_point(stu):
    z = (-1j, -1j, -1j)
    assert local_kahler(stu, z) == pytest.approx(-np.log(8))
    np.testing.assert_allclose(local_metric(stu, z), 0.25 * np.eye(3), atol=1e-14)
    kin = local_kinetic(stu, z)
    assert kin.symmetry_residual < 1e-12 and kin.im_negative_definite
    # real points are on the boundary of the domain
    with pytest.raises(DomainError):
        local_kahler(stu, (1, 1, 1))


def test_stu_metric_matches_finite_differences(stu):
    rng = np.random.default_rng(11)
    desc = catalog_get("stu").model
    for z in domain_points(desc, stu, 10, rng):
        g = local_metric(stu, z)
        assert np.linalg.eigvalsh(g).min() > 0
        g_fd = fd_metric(lambda p: kahler_from_values(stu, "local", p), z)
        assert np.abs(g - g_fd).max() < 1e-6 * np.abs(g).max()


# gauge fixing and covariant derivatives --------------------------------------

def test_gauge_fix(worked, stu):
    g = gauge_fix(worked, 1)
    np.testing.assert_allclose(g.V, 0.5 * np.array([1, 1, -1j, -1j]), atol=1e-15)
    assert g.normalization == pytest.approx(1j)
    scaled = apply_symplectic_local(worked, np.eye(4), factor=3 - 4j)
    gs = gauge_fix(scaled, 1)
    phase = gs.V[0] / g.V[0]
    assert abs(phase) == pytest.approx(1)
    np.testing.assert_allclose(gs.V, phase * g.V, atol=1e-14)
    assert abs(gauge_fix(stu, (0.2 - 1j, -0.5j, 1 - 2j)).normalization - 1j) < 1e-12


def test_covariant_derivative_weights(stu):
    z = (0.2 - 1j, -0.5j, 1 - 2j)
    geo = point_geometry(stu, z)
    for a in range(3):
        dv = covariant_derivative(stu, z, a)
        dV = covariant_derivative(stu, z, a, target="V")
        np.testing.assert_allclose(dV, np.exp(geo.K / 2) * dv, atol=1e-14)
        np.testing.assert_allclose(covariant_derivative(stu, z, a, barred=True), dv.conj())


def test_covariant_derivative_of_constant_section():
    const = LocalSectionModel.from_strings(["1", "0", "-i", "0"], ["z"])
    geo = point_geometry(const, 0.3)
    assert geo.phi == pytest.approx(2)
    np.testing.assert_allclose(covariant_derivative(const, 0.3, 0), geo.dK[0] * geo.v)
    with pytest.raises(IndexError):
        covariant_derivative(const, 0.3, 1)


def test_constraints(worked, stu):
    c = constraint_check(worked, 1)
    assert c.pair_residual == 0 and c.vector_residual < 1e-15
    rng = np.random.default_rng(5)
    for z in domain_points(catalog_get("stu").model, stu, 10, rng):
        assert constraint_check(stu, z).passed(1e-10)


def test_corrupted_section_fails_constraints():
    # F = -(i/2)(X0^2 - X1^2 - X2^2) with F_1 shifted by z2/2
    good = ["1", "z1", "z2", "-i", "i*z1", "i*z2"]
    bad = good[:4] + ["i*z1 + 0.5*z2", "i*z2"]
    z = (0.1 + 0.05j, 0.2 - 0.1j)
    assert constraint_check(LocalSectionModel.from_strings(good, ["z1", "z2"]), z).passed()
    c = constraint_check(LocalSectionModel.from_strings(bad, ["z1", "z2"]), z)
    assert c.pair_residual > 1e-3 and c.vector_residual > 1e-3


# frames ----------------------------------------------------------------------

def test_existence(worked, dual):
    assert prepotential_exists(worked, 1)
    verdict = prepotential_exists(dual, 1)
    assert not verdict and verdict.condition_number > 1e10
    back = apply_symplectic_local(dual, SymplecticMatrix(DUALITY_S).inverse())
    assert prepotential_exists(back, 1)
    np.testing.assert_allclose(back.values(0.7 + 0.1j), worked.values(0.7 + 0.1j))


def test_duality_matrix_gives_dual_section(worked):
    out = apply_symplectic_local(worked, SymplecticMatrix(DUALITY_S))
    assert [str(c) for c in out.components] == ["1", "i", "-i*z", "z"]


def test_kahler_factor_shifts_k(worked):
    c = 0.3 + 0.8j
    out = apply_symplectic_local(worked, np.eye(4), factor=np.exp(c))
    z = 1.5 - 0.2j
    assert local_kahler(out, z) == pytest.approx(local_kahler(worked, z) - 2 * c.real)
    np.testing.assert_allclose(local_metric(out, z), local_metric(worked, z), atol=1e-14)


def test_random_frame_and_factor_keep_metric(stu):
    rng = np.random.default_rng(9)
    factor = parse_expr("1 + 0.3*z1 - 0.2i*z2*z3", stu.variables)
    desc = catalog_get("stu").model
    for _ in range(5):
        out = apply_symplectic_local(stu, random_symplectic(4, rng), factor)
        for z in domain_points(desc, stu, 5, rng):
            np.testing.assert_allclose(local_metric(out, z), local_metric(stu, z), atol=1e-9)
            shift = kahler_shift(factor, z)
            assert local_kahler(out, z) == pytest.approx(local_kahler(stu, z) + shift, abs=1e-10)


def test_noncanonical_frame_section():
    # the worked-example section written in a frame with omega' = 2 omega and v' = v / sqrt(2)
    frame = SymplecticFrame(2 * np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]))
    r = 2 ** -0.5
    v = LocalSectionModel.from_strings([f"{r}", f"{r}*z", f"-{r}i*z", f"-{r}i"], ["z"], frame=frame)
    worked = catalog_get("paper-n1").model.build_section()
    z = 2 + 1j
    assert local_kahler(v, z) == pytest.approx(local_kahler(worked, z))
    np.testing.assert_allclose(local_kinetic(v, z).matrix, local_kinetic(worked, z).matrix, atol=1e-13)


def test_singular_kinetic_denominator_reports_verdict():
    # X = (1, 1) is constant and real, so conj(D X) is parallel to X
    w = LocalSectionModel.from_strings(["1", "1", "-i*z", "z"], ["z"])
    assert point_geometry(w, 1).phi == pytest.approx(2)
    with pytest.raises(FrameDegeneracyError) as info:
        local_kinetic(w, 1)
    assert "metric there is positive" in str(info.value)


# reconstruction ----------------------------------------------------------------

def test_reconstruct_worked_example(worked):
    F = reconstruct_prepotential(worked, [1, 2 + 1j])
    for p in [(1, 2), (0.3 + 1j, -2)]:
        assert F(p) == pytest.approx(-1j * p[0] * p[1])


def test_reconstruct_stu(stu):
    F = reconstruct_prepotential(stu, [(-1j, -1j, -1j), (0.5 - 1j, 1 - 2j, -0.3j)])
    p = (1.2, 0.3 - 1j, 2j, -0.7)
    assert F(p) == pytest.approx(p[1] * p[2] * p[3] / p[0])


def test_reconstruct_dual_fails(dual):
    with pytest.raises(PrepotentialNotFoundError):
        reconstruct_prepotential(dual, [1])


# cone ---------------------------------------------------------------------------

def test_cone_composite_is_block_diagonal(worked):
    for z in (1, 0.5 + 2j):
        z = complex(z)
        g = cone_metric(worked, ConePoint(2.0, 0.4, z, "composite"))
        expect = np.zeros((4, 4))
        expect[0, 0] = 1
        expect[2, 2] = expect[3, 3] = 4 * (2 * z.real) ** -2
        np.testing.assert_allclose(g, expect, atol=1e-14)


def test_cone_theta_component(worked):
    for theta in (0, 1.3):
        g = cone_metric(worked, ConePoint(1.0, theta, 1))
        assert g[1, 1] == pytest.approx(1 / 18)


def test_cone_homothety_and_positivity(stu):
    z = (0.3 - 1j, -0.5j, 1 - 0.7j)
    g1 = cone_metric(stu, ConePoint(1.0, 0.2, z))
    g2 = cone_metric(stu, ConePoint(2.0, 0.2, z))
    np.testing.assert_allclose(g2[1:, 1:], 4 * g1[1:, 1:], atol=1e-14)
    assert g1[0, 0] == 1 and not g1[0, 1:].any()
    assert np.linalg.eigvalsh(g1).min() > 0


def test_cone_point_validation():
    with pytest.raises(DomainError):
        ConePoint(0, 0, 1)
    with pytest.raises(ValueError):
        ConePoint(1, 0, 1, "other")
