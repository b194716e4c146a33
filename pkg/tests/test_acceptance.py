"""Acceptance gate: ten criteria, one pass/fail line each.

Run with pytest (lines appear in the terminal summary) or directly as a
script: ``python tests/test_acceptance.py``.
"""
import sys
import warnings
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import (domain_points, fd_metric, kahler_from_values, random_prepotential,  # noqa: E402
                     small_ball_points)
from specialkahler import catalog  # noqa: E402
from specialkahler.errors import DomainError, SingularPointError  # noqa: E402
from specialkahler.local import (ConePoint, LocalPrepotentialModel, LocalSectionModel,  # noqa: E402
                                 apply_symplectic_local, build_section, cone_metric, constraint_check,
                                 local_kinetic, local_metric, point_geometry, prepotential_exists,
                                 reconstruct_prepotential)
from specialkahler.maxwell import compute_G, hodge_dual, random_field_strength, selfdual_split, transform_pair  # noqa: E402
from specialkahler.rigid import (rigid_kahler, rigid_kahler_prepotential, rigid_kinetic,  # noqa: E402
                                 rigid_metric, rigid_section)
from specialkahler.scan import scan_positivity  # noqa: E402
from specialkahler.symplectic import (SymplecticFrame, SymplecticMatrix, act_on_kinetic, inner,  # noqa: E402
                                      random_kinetic, random_symplectic)

SEED = 20240611

# the duality matrix exchanging X1 with its dual: X1 -> -F1, F1 -> X1
DUALITY_S = np.array([[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=float)


def _worked_section():
    return catalog.catalog_get("paper-n1").model.build_section()


def criterion_1():
    section = _worked_section()
    worst = 0.0
    for z in (1 + 0j, 2 + 1j, 0.5 - 0.3j):
        zb = np.conj(z)
        geo = point_geometry(section, z)
        errs = [
            np.abs(section.values(z) - np.array([1, z, -1j * z, -1j])).max(),
            abs(geo.phi - 2 * (z + zb)),
            abs(geo.metric[0, 0] - (z + zb) ** -2),
            np.abs(local_kinetic(section, z).matrix - np.diag([-1j * z, -1j / z])).max(),
        ]
        worst = max(worst, *errs)
    return worst < 1e-12, f"max abs error {worst:.2e} (< 1e-12) for v, exp(-K), g, N at z = 1, 2+i, 0.5-0.3i"


def criterion_2():
    section = _worked_section()
    s = SymplecticMatrix(DUALITY_S)
    dual = apply_symplectic_local(section, s)
    texts = [str(c) for c in dual.components]
    ok_text = texts == ["1", "i", "-i*z", "z"]
    points = [1, 2 + 1j, 0.5 - 0.3j, 3 - 2j]
    worst_v = max(np.abs(dual.values(z) - np.array([1, 1j, -1j * z, z])).max() for z in points)
    exists_dual = any(prepotential_exists(dual, z).exists for z in points)
    back = apply_symplectic_local(dual, s.inverse())
    exists_back = all(prepotential_exists(back, z).exists for z in points)
    worst_n = 0.0
    for z in points:
        via_action = act_on_kinetic(s, local_kinetic(section, z)).matrix
        direct = local_kinetic(dual, z).matrix
        worst_n = max(worst_n, np.abs(via_action - direct).max(),
                      np.abs(direct - (-1j * z) * np.eye(2)).max())
    ok = ok_text and worst_v < 1e-12 and not exists_dual and exists_back and worst_n < 1e-10
    return ok, (f"section {texts}, exists dual={exists_dual} inverted={exists_back}, "
                f"N routes agree to {worst_n:.2e} (< 1e-10)")


def criterion_3():
    rng = np.random.default_rng(SEED)
    names = [e.name for e in catalog.catalog_entries() if e.flavor == "rigid" and e.model.kind == "prepotential"]
    worst_k = worst_g = 0.0
    for name in names:
        desc = catalog.catalog_get(name).model
        model = desc.build()
        section = rigid_section(model)
        for z in domain_points(desc, section, 100, rng):
            k1 = rigid_kahler_prepotential(model, z)
            k2 = rigid_kahler(section, z)
            worst_k = max(worst_k, abs(k1 - k2))
            # G = e^T (2 Im N) conj(e); in special coordinates e = 1 and G = 2 Im N
            e = model.coordinate_jacobian(z)
            im_n = rigid_kinetic(section, z).matrix.imag
            g_special = np.linalg.solve(e.T, np.linalg.solve(e.conj().T, rigid_metric(section, z).T).T)
            worst_g = max(worst_g, np.abs(g_special - 2 * im_n).max())
    ok = len(names) >= 3 and worst_k < 1e-12 and worst_g < 1e-10
    return ok, f"{len(names)} rigid models x 100 points: |dK| {worst_k:.2e} (< 1e-12), |G - 2 Im N| {worst_g:.2e} (< 1e-10)"


def _round_trip(desc, rng):
    section = desc.build_section()
    pts = domain_points(desc, section, 50, rng)
    samples = [desc.base_point] + pts[:5]
    F = reconstruct_prepotential(section, samples)
    upper = [str(c) for c in section.canonical_components[:section.m]]
    rebuilt = build_section(LocalPrepotentialModel.from_strings(
        str(F), F.variables, upper, desc.variables, base_point=desc.base_point))
    worst_g = worst_factor = 0.0
    for z in pts:
        v_old, v_new = section.values(z), rebuilt.values(z)
        lam = (v_old.conj() @ v_new) / (v_old.conj() @ v_old)
        worst_factor = max(worst_factor, np.abs(v_new - lam * v_old).max() / np.abs(v_new).max())
        worst_g = max(worst_g, np.abs(local_metric(rebuilt, z) - local_metric(section, z)).max())
    return worst_g, worst_factor


def criterion_4():
    rng = np.random.default_rng(SEED)
    tested = []
    worst_g = worst_factor = 0.0
    for entry in catalog.catalog_entries():
        desc = entry.model
        if desc.flavor != "local":
            continue
        section = desc.build_section()
        if not prepotential_exists(section, desc.base_point):
            continue
        g, f = _round_trip(desc, rng)
        tested.append(desc.name)
        worst_g, worst_factor = max(worst_g, g), max(worst_factor, f)
    ok = len(tested) >= 1 and worst_g < 1e-9 and worst_factor < 1e-9
    return ok, (f"{', '.join(tested)}: metric agreement {worst_g:.2e} (< 1e-9), "
                f"section proportionality {worst_factor:.2e}")


def _corrupted_section():
    """An n = 2 prepotential section with one dual component spoiled."""
    model, _ = random_prepotential(np.random.default_rng(SEED), n=2)
    good = build_section(model)
    comps = list(good.components)
    z1 = comps[1]
    comps[4] = comps[4] + 0.5 * comps[2] * z1  # F_1 += z1 z2 / 2
    return LocalSectionModel(comps)


def criterion_5():
    rng = np.random.default_rng(SEED)
    worst_c = worst_s = 0.0
    models = points = 0
    while models < 100:
        model, _ = random_prepotential(rng)
        section = build_section(model)
        used = 0
        for z in small_ball_points(model.n, 10, rng):
            try:
                cons = constraint_check(section, z)
                kin = local_kinetic(section, z)
            except (DomainError, SingularPointError):
                continue
            worst_c = max(worst_c, cons.pair_residual, cons.vector_residual)
            worst_s = max(worst_s, kin.symmetry_residual)
            used += 1
        if used:
            models += 1
            points += used
    bad = _corrupted_section()
    fails = []
    for z in small_ball_points(2, 5, rng, radius=0.2):
        try:
            c = constraint_check(bad, z)
        except DomainError:
            continue
        fails.append(c.pair_residual > 1e-10 and c.vector_residual > 1e-10)
    ok = worst_c < 1e-10 and worst_s < 1e-9 and len(fails) > 0 and all(fails)
    return ok, (f"100 random models, {points} points: constraints {worst_c:.2e} (< 1e-10), "
                f"N symmetry {worst_s:.2e} (< 1e-9); corrupted section fails both at {sum(fails)}/{len(fails)} points")


def criterion_6():
    rng = np.random.default_rng(SEED)
    worst_inner = 0.0
    kin_ok = True
    worst_sym = 0.0
    for k in range(100):
        m = int(rng.integers(1, 5))
        frame = None
        if k % 2:
            t = random_symplectic(m, rng).s
            frame = SymplecticFrame(t.T @ SymplecticFrame.canonical(m).omega @ t)
        s = random_symplectic(m, rng, frame=frame)
        om = (frame or SymplecticFrame.canonical(m))
        v = rng.normal(size=2 * m) + 1j * rng.normal(size=2 * m)
        w = rng.normal(size=2 * m) + 1j * rng.normal(size=2 * m)
        scale = np.linalg.norm(v) * np.linalg.norm(w) * np.abs(om.omega).max()
        worst_inner = max(worst_inner, abs(inner(s.s @ v, s.s @ w, om) - inner(v, w, om)) / scale)
        nt = act_on_kinetic(s, random_kinetic(m, rng))
        worst_sym = max(worst_sym, nt.symmetry_residual)
        kin_ok &= nt.im_negative_definite
    worst_metric = 0.0
    for name in ("paper-n1", "stu", "minimal-n1"):
        desc = catalog.catalog_get(name).model
        section = desc.build_section()
        for _ in range(10):
            s = random_symplectic(section.m, rng)
            new = apply_symplectic_local(section, s)
            for z in domain_points(desc, section, 5, rng):
                worst_metric = max(worst_metric, np.abs(local_metric(new, z) - local_metric(section, z)).max())
    ok = worst_inner < 1e-10 and kin_ok and worst_sym < 1e-10 and worst_metric < 1e-9
    return ok, (f"inner products {worst_inner:.2e} (< 1e-10), N symmetry {worst_sym:.2e} with Im N < 0: {kin_ok}, "
                f"metric invariance {worst_metric:.2e} (< 1e-9)")


def criterion_7():
    rng = np.random.default_rng(SEED)
    worst_g = worst_sd = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 5))
        n = random_kinetic(m, rng)
        fplus, _ = selfdual_split(random_field_strength(m, rng))
        gplus = compute_G(n, fplus)
        s = random_symplectic(m, rng)
        ft, gt = transform_pair(s, fplus, gplus)
        nt = act_on_kinetic(s, n)
        worst_g = max(worst_g, np.abs(gt - compute_G(nt, ft)).max())
        worst_sd = max(worst_sd, np.abs(hodge_dual(fplus) - fplus).max())
    ok = worst_g < 1e-9 and worst_sd < 1e-12
    return ok, f"|G~ - N~ F~| {worst_g:.2e} (< 1e-9), |*F+ - F+| {worst_sd:.2e} (< 1e-12)"


def criterion_8():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    count = 0
    for entry in catalog.catalog_entries():
        desc = entry.model
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            section = desc.build_section()
        metric = local_metric if desc.flavor == "local" else rigid_metric
        for z in domain_points(desc, section, 100, rng):
            g = metric(section, z)
            g_fd = fd_metric(lambda p: kahler_from_values(section, desc.flavor, p), z)
            worst = max(worst, np.abs(g - g_fd).max() / np.abs(g).max())
            count += 1
    return worst < 1e-6, f"{count} points over all catalog models: max relative error {worst:.2e} (< 1e-6)"


def criterion_9():
    desc = catalog.catalog_get("paper-n1").model
    inside = [(0.1, 3, -2, 2), (0.1, 1, -5, 5)]
    outside = [(-2, -0.1, -2, 2), (-3, -0.1, -0.5, 0.5)]
    f_in = [scan_positivity(desc, [b], 10_000, seed=k).pass_fraction for k, b in enumerate(inside)]
    f_out = [scan_positivity(desc, [b], 10_000, seed=k).pass_fraction for k, b in enumerate(outside)]
    ok = all(f == 1.0 for f in f_in) and all(f == 0.0 for f in f_out)
    return ok, f"pass fraction Re z >= 0.1 boxes {f_in}, Re z <= -0.1 boxes {f_out} (10^4 samples each)"


def criterion_10():
    rng = np.random.default_rng(SEED)
    desc = catalog.catalog_get("paper-n1").model
    section = desc.build_section()
    worst = 0.0
    pd = True
    for z in domain_points(desc, section, 50, rng):
        r, theta, lam = rng.uniform(0.2, 3), rng.uniform(0, 2 * np.pi), rng.uniform(0.3, 3)
        g1 = cone_metric(section, ConePoint(r, theta, z, "zero"))
        g2 = cone_metric(section, ConePoint(lam * r, theta, z, "zero"))
        scale = np.abs(g1).max()
        worst = max(worst, abs(g1[0, 0] - 1), np.abs(g1[0, 1:]).max(),
                    np.abs(g2[1:, 1:] - lam ** 2 * g1[1:, 1:]).max() / (lam ** 2 * scale))
        pd &= bool(np.linalg.eigvalsh(g1).min() > 1e-10 * scale)
    ok = worst < 1e-10 and pd
    return ok, f"g_rr, dr cross terms, homothety residual {worst:.2e} (< 1e-10); positive definite: {pd}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]
_LINES = {}


@pytest.fixture(scope="module", autouse=True)
def _print_summary(request):
    yield
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is None:
        return
    reporter.write_line("")
    for k in sorted(_LINES):
        reporter.write_line(_LINES[k])


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    _LINES[number] = line
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for k, fn in enumerate(CRITERIA, start=1):
        ok, detail = fn()
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}", flush=True)
    sys.exit(1 if failed else 0)
