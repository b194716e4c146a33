"""Analysis commands behind the command-line interface.

Each command takes a parsed :class:`ModelDescription` and returns a
:class:`Report`; ``cmd_transform`` also returns the transformed model.
"""
from __future__ import annotations

import numpy as np

from .catalog import catalog_entries, check_entry
from .errors import (DomainError, FrameDegeneracyError, NotSymplecticError, PreconditionError,
                     SingularPointError)
from .holo import parse_expr
from .local import (ConePoint, apply_symplectic_local, cone_coordinate_labels, cone_metric,
                    constraint_check, kahler_shift, local_kinetic, point_geometry, prepotential_exists)
from .modelfile import ModelDescription
from .report import Report, measured
from .rigid import (ChartTransition, apply_transition, rigid_constraint, rigid_kahler, rigid_kinetic,
                    rigid_metric)
from .scan import scan_positivity
from .section import as_point
from .symplectic import SymplecticMatrix, act_on_kinetic, is_symplectic

__all__ = ["DEFAULT_TOL", "GLOBAL_CONDITION_NOTE", "cmd_analyze", "cmd_transform", "cmd_scan",
           "cmd_cone", "cmd_selfcheck", "report_exit_status"]

DEFAULT_TOL = 1e-10
GLOBAL_CONDITION_NOTE = ("Hodge/even-integer-cohomology condition: not verified (global condition); "
                         "all checks are local to the sampled points")
RIGID_NOTE = "rigid metric positivity is reported, not required"


def _point_label(z):
    return [complex(c) for c in z]


def _analyze_local(section, z, tol):
    geo = point_geometry(section, z)
    eig = np.linalg.eigvalsh(geo.metric)
    out = {
        "K": geo.K,
        "exp(-K)": geo.phi,
        "metric": geo.metric,
        "metric_eigenvalues": measured(eig, 0.0, "metric positive definite if all > tol"),
        "metric_positive": bool(eig.min() > 0),
    }
    cons = constraint_check(section, z)
    out["constraint <D_a v, D_b v>"] = measured(cons.pair_residual, tol, "relative residual")
    out["constraint <D_a v, v>"] = measured(cons.vector_residual, tol, "relative residual")
    out["constraints_hold"] = cons.passed(tol)
    ex = prepotential_exists(section, z)
    out["prepotential_exists"] = ex.exists
    out["existence_condition_number"] = measured(ex.condition_number, 1e10, "exists if below")
    try:
        kin = local_kinetic(section, z)
    except FrameDegeneracyError as err:
        out["N"] = None
        out["status"] = f"kinetic matrix degenerate: {err}"
        return out
    out["N"] = kin.matrix
    out["N_symmetry_residual"] = measured(kin.symmetry_residual, 100 * tol, "N = N^T")
    out["Im_N_eigenvalues"] = kin.im_eigenvalues
    out["Im_N_negative"] = kin.im_negative_definite
    out["status"] = "ok"
    return out


def _analyze_rigid(section, z, tol):
    metric = rigid_metric(section, z)
    eig = np.linalg.eigvalsh(metric)
    out = {
        "K": rigid_kahler(section, z),
        "metric": metric,
        "metric_eigenvalues": measured(eig, 0.0, "metric positive definite if all > tol"),
        "metric_positive": bool(eig.min() > 0),
    }
    res = rigid_constraint(section, z)
    out["constraint <d_a V, d_b V>"] = measured(res.residual, tol, "absolute residual")
    out["constraints_hold"] = res.residual < tol
    try:
        kin = rigid_kinetic(section, z)
    except FrameDegeneracyError as err:
        out["N"] = None
        out["status"] = f"kinetic matrix degenerate: {err}"
        return out
    out["N"] = kin.matrix
    out["N_symmetry_residual"] = measured(kin.symmetry_residual, 100 * tol, "N = N^T")
    out["Im_N_eigenvalues"] = kin.im_eigenvalues
    out["status"] = "ok"
    return out


def _points(desc, points):
    if points:
        return [as_point(p, desc.n) for p in points]
    if desc.base_point is None:
        raise PreconditionError("no points given and the model has no base point")
    return [desc.base_point]


def _base_report(command, desc, tol):
    notes = []
    if desc.flavor == "local":
        notes.append(GLOBAL_CONDITION_NOTE)
    else:
        notes.append(RIGID_NOTE)
    if desc.provenance:
        notes.append(f"model provenance: {desc.provenance}")
    return Report(command, desc.name, desc.digest, {"residual": tol}, notes=notes)


def cmd_analyze(desc: ModelDescription, points=None, tol: float = DEFAULT_TOL, command="analyze") -> Report:
    """K, metric, N, constraint residuals and existence verdict at each point.

    Points outside the domain get a per-point status instead of aborting.
    """
    section = desc.build_section()
    report = _base_report(command, desc, tol)
    for z in _points(desc, points):
        entry = {"point": _point_label(z)}
        try:
            if desc.flavor == "local":
                entry.update(_analyze_local(section, z, tol))
            else:
                entry.update(_analyze_rigid(section, z, tol))
        except DomainError as err:
            entry["status"] = f"domain error: {err}"
        except SingularPointError as err:
            entry["status"] = f"domain error: {err}"
        report.results.append(entry)
    return report


def report_exit_status(report: Report) -> int:
    """0 if every point is fine, 2 for domain errors, 3 for numerical degeneracy."""
    statuses = [r.get("status", "ok") for r in report.results]
    if any(s.startswith("domain error") for s in statuses):
        return 2
    if any(s.startswith("kinetic matrix degenerate") for s in statuses):
        return 3
    return 0


def _omega_or_none(frame):
    return None if frame.is_canonical else np.array(frame.omega)


def cmd_transform(desc: ModelDescription, matrix, factor: str | None = None, points=None,
                  tol: float = DEFAULT_TOL, name: str | None = None, command="transform"):
    """Apply a symplectic matrix (and optional Kahler factor) to a model.

    For local models ``factor`` is an expression in the model's coordinates,
    the multiplier ``e^f(z)``; for rigid models it must be a constant phase.
    Returns ``(report, new_description)``.
    """
    section = desc.build_section()
    check = is_symplectic(np.asarray(matrix, dtype=float), section.frame, tol)
    if not check:
        raise NotSymplecticError(check.residual, tol)
    s = SymplecticMatrix(np.asarray(matrix, dtype=float), section.frame)
    fexpr = None if factor is None else parse_expr(factor, desc.variables)
    if desc.flavor == "local":
        new_section = apply_symplectic_local(section, s, fexpr)
    else:
        if fexpr is None:
            new_section = apply_transition(section, ChartTransition(0.0, s))
        else:
            val = fexpr([0] * desc.n) if fexpr.is_constant else None
            if val is None or abs(abs(val) - 1) > 1e-12:
                raise PreconditionError("rigid transformations accept only a constant unit-modulus factor")
            # multiply by the parsed value directly so exact phases such as i stay exact
            new_section = section.transformed(complex(val) * s.s)
    new_desc = ModelDescription(
        name=name or f"{desc.name}-transformed", flavor=desc.flavor, variables=desc.variables,
        base_point=desc.base_point, section=tuple(str(c) for c in new_section.components),
        omega=_omega_or_none(section.frame), boxes=desc.boxes, provenance=desc.provenance,
        description=f"symplectic transform of {desc.name}")
    report = _base_report(command, desc, tol)
    report.tolerances["metric_invariance"] = 1e-9
    report.summary["symplectic_residual"] = measured(check.residual, tol, "S^T Omega S = Omega")
    report.summary["new_model"] = new_desc.name
    report.summary["new_model_digest"] = new_desc.digest
    report.summary["new_section"] = list(new_desc.section)
    for z in _points(desc, points):
        entry = {"point": _point_label(z)}
        try:
            if desc.flavor == "local":
                g_old = point_geometry(section, z)
                g_new = point_geometry(new_section, z)
                entry["metric_invariance_residual"] = measured(
                    float(np.abs(g_new.metric - g_old.metric).max()), 1e-9, "metric unchanged")
                shift = 0.0 if fexpr is None else kahler_shift(fexpr, z)
                entry["K_shift_residual"] = measured(abs(g_new.K - g_old.K - shift), 1e-9,
                                                     "K changes by -log|factor|^2")
                n_old = local_kinetic(section, z)
                n_new = local_kinetic(new_section, z)
                entry["old_existence"] = prepotential_exists(section, z).exists
                entry["new_existence"] = prepotential_exists(new_section, z).exists
            else:
                g_old = rigid_metric(section, z)
                g_new = rigid_metric(new_section, z)
                entry["metric_invariance_residual"] = measured(float(np.abs(g_new - g_old).max()), 1e-9,
                                                               "metric unchanged")
                n_old = rigid_kinetic(section, z)
                n_new = rigid_kinetic(new_section, z)
            entry["old_N"] = n_old.matrix
            entry["new_N"] = n_new.matrix
            via = act_on_kinetic(s, n_old)
            entry["N_transformation_residual"] = measured(float(np.abs(via.matrix - n_new.matrix).max()),
                                                          1e-9, "new N = (C + D N)(A + B N)^-1")
            entry["status"] = "ok"
        except (DomainError, SingularPointError) as err:
            entry["status"] = f"domain error: {err}"
        except FrameDegeneracyError as err:
            entry["status"] = f"kinetic matrix degenerate: {err}"
        report.results.append(entry)
    return report, new_desc


def cmd_scan(desc: ModelDescription, boxes=None, samples: int = 1000, seed: int = 0, workers: int = 1,
             tol: float = DEFAULT_TOL, command="scan") -> Report:
    """Fractions of sampled points with g > 0 and Im N < 0, plus a boundary estimate."""
    res = scan_positivity(desc, boxes, samples, seed, workers)
    report = _base_report(command, desc, tol)
    report.summary = {
        "boxes": [list(b) for b in res.boxes],
        "samples": res.samples,
        "seed": res.seed,
        "in_domain_fraction": res.fraction("in_domain"),
        "metric_positive_fraction": res.fraction("metric_positive"),
        "kinetic_negative_fraction": res.fraction("kinetic_negative"),
        "pass_fraction": res.pass_fraction,
        "pass_rule": "metric positive and Im N negative" if desc.flavor == "local" else "metric positive",
        "boundary_estimate": res.boundary_estimate(),
    }
    degenerate = sum(v.status == "kinetic matrix degenerate" for v in res.verdicts)
    if degenerate:
        report.summary["degenerate_points"] = degenerate
    return report


def cmd_cone(desc: ModelDescription, r: float, theta: float, z=None, a_mode: str = "zero",
             tol: float = DEFAULT_TOL, command="cone") -> Report:
    """Cone metric in coordinates (r, theta, Re z, Im z) with its block structure."""
    if desc.flavor != "local":
        raise PreconditionError("the cone metric is defined for local models only")
    section = desc.build_section()
    z = _points(desc, [z] if z is not None else None)[0]
    mat = cone_metric(section, ConePoint(r, theta, z, a_mode))
    n = desc.n
    eig = np.linalg.eigvalsh(mat)
    report = _base_report(command, desc, tol)
    report.results.append({
        "point": _point_label(z),
        "r": float(r),
        "theta": float(theta),
        "a_mode": a_mode,
        "coordinates": cone_coordinate_labels(n),
        "metric": mat,
        "g_rr": measured(mat[0, 0], tol, "equals 1"),
        "radial_cross_terms": measured(float(np.abs(mat[0, 1:]).max()), tol, "vanish"),
        "theta_theta": mat[1, 1],
        "theta_z_block": mat[1, 2:],
        "kahler_block": mat[2:, 2:],
        "eigenvalues": eig,
        "positive_definite": bool(eig.min() > tol),
    })
    return report


def cmd_selfcheck(tol_scale: float = 1.0, command="selfcheck") -> Report:
    """Evaluate every expected value in the catalog."""
    report = Report(command, "catalog", "", {"scale": tol_scale})
    failures = 0
    for entry in catalog_entries():
        for res in check_entry(entry):
            exp = res.expected
            ok = res.passed if exp.quantity == "exists" else res.error < exp.tol * tol_scale
            failures += not ok
            report.results.append({
                "model": entry.name, "quantity": exp.quantity, "point": list(exp.point),
                "provenance": exp.provenance,
                "error": measured(res.error, exp.tol * tol_scale, exp.note or exp.quantity),
                "passed": bool(ok),
            })
    report.summary = {"checks": len(report.results), "failures": failures}
    return report
