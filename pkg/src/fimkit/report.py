"""Report assembly and rendering for the command line.

Reports are plain trees of dicts, lists, strings, integers, booleans and
``None``, so the structured form is just JSON and round-trips exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import combinat as cb
from . import functors as fn
from . import homology as ho
from . import stability as st
from .module import TruncatedModule, check_module_axioms


def key(n) -> str:
    return cb.format_shape(tuple(n))


def dims_map(dims: dict, shapes=None) -> dict:
    shapes = shapes if shapes is not None else sorted(dims)
    return {key(n): int(dims.get(n, 0)) for n in shapes}


def support_map(g: ho.GradedDims) -> dict:
    return {key(n): g[n] for n in g.support()}


def frac(x) -> str | int:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def module_header(V: TruncatedModule) -> dict:
    return {"name": V.name, "field": V.field.name, "m": V.m, "box": list(V.box)}


def expand_report(V: TruncatedModule) -> dict:
    return {"module": module_header(V), "dims": dims_map(V.dims, V.shapes())}


def _verdict(v: ho.Verdict) -> dict:
    return {
        "value": v.label,
        "witness": key(v.witness) if v.witness is not None else None,
        "reason": v.reason,
    }


def homology_section(V: TruncatedModule, hom: ho.Homology) -> dict:
    return {
        "gd": hom.gd,
        "hd": {str(s): hom.hd(s) for s in range(len(hom.groups))},
        "H": {str(s): support_map(g) for s, g in enumerate(hom.groups)},
        "scope": "homology of the truncated module over the boxed category",
    }


def torsion_section(rep: ho.TorsionReport) -> dict:
    return {
        "td": list(rep.td),
        "td_total": rep.td_total,
        "margin": list(rep.margin),
        "status": "exact" if rep.certified else "inconclusive",
        "torsion_dims": support_map(rep.torsion_dims),
        "shift_bound": [
            {"direction": i + 1, "td": a, "td_after_shift": b, "ok": ok}
            for i, a, b, ok in rep.shift_check
        ],
    }


def nagpal_section(cx: ho.NagpalComplex) -> dict:
    return {
        "shift": list(cx.shift),
        "length": cx.l,
        "complete": cx.complete,
        "status": "exact" if cx.complete else "inconclusive",
        "N": list(cx.N),
        "gd_V": cx.gd_V,
        "gd_F": list(cx.gd_F),
        "F_dims": [support_map(ho.GradedDims(F.dims, F.box)) for F in cx.F],
        "F_relative_projective": [stage.F_verdict.label for stage in cx.stages if stage.F is not None],
        "homology": [support_map(h) for h in cx.homology],
        "degree_bounds_hold": cx.degree_bounds_hold(),
    }


def poly_list(polys) -> list[str]:
    return [st.format_poly(p) for p in polys]


def hilbert_section(fit: st.HilbertFit) -> dict:
    return {
        "status": fit.status,
        "grid_start": key(fit.grid_start),
        "polynomials": poly_list(fit.polys),
        "degrees_ok": fit.degrees_ok if fit.polys else None,
        "points_checked": len(fit.region),
        "residuals": {key(n): frac(r) for n, r in sorted(fit.residuals.items())},
    }


def multiplicity_map(mult: dict) -> dict:
    return {cb.format_multipartition(lams): c for lams, c in sorted(mult.items())}


def stability_section(rep: st.StabilityVerdict) -> dict:
    verdict = rep.verdict
    return {
        "threshold": key(rep.threshold),
        "verdict": {True: "true", False: "false", None: "inconclusive"}[verdict],
        "injective": rep.bullet("injective"),
        "generates": rep.bullet("generates"),
        "multiplicities_constant": rep.bullet("multiplicities_match"),
        "empirical_onset": rep.empirical_onset,
        "stable_multiplicities": multiplicity_map(rep.stable),
        "family_onsets": {cb.format_multipartition(lab): key(n) for lab, n in sorted(rep.onsets.items())},
    }


def unsupported(message: str) -> dict:
    return {"status": "unsupported", "message": message}


def analyze_report(V: TruncatedModule, s_max: int = 2) -> tuple[dict, list[str]]:
    """Full analysis and the list of theorem violations found."""
    violations = []
    hom = ho.homology(V, max(2, s_max))
    rp = ho.relative_projective_test(V, hom)
    if rp.h2_violation:
        violations.append("H_1 = 0 but H_2 != 0")
    tor = ho.torsion_analysis(V)
    for i, a, b, ok in tor.shift_check:
        if not ok and tor.certified:
            violations.append(f"td_{i + 1} of the shift is {b}, expected at most {a - 1}")
    cx = ho.nagpal_complex(V)
    if cx.complete and not cx.degree_bounds_hold():
        violations.append("complex degree bounds fail")
    pd = ho.projective_dim_classifier(V, hom)
    out = {
        "module": module_header(V),
        "homology": homology_section(V, hom),
        "relative_projective": _verdict(rp) | {"h2_cross_check": "violated" if rp.h2_violation else "ok"},
        "projective_dimension": pd.label,
        "torsion": torsion_section(tor),
        "nagpal": nagpal_section(cx),
        "hilbert": hilbert_section(st.hilbert_fit(V, cx.N, hom.gd)),
    }
    if V.field.p:
        out["stability"] = unsupported("representation stability needs characteristic 0")
    else:
        out["stability"] = stability_section(st.stability_report(V, cx.N))
    out["violations"] = violations
    return out, violations


def check_report(V: TruncatedModule, samples: int = 50, seed: int = 0) -> tuple[dict, bool]:
    axioms = check_module_axioms(V, samples=samples, seed=seed)
    checks = {name: ("pass" if v is None else f"FAIL at {v}") for name, v in axioms.results.items()}
    ok = axioms.ok
    if ok:
        functor = _functor_checks(V)
        checks.update(functor)
        ok = all(v == "pass" for v in checks.values())
    else:
        checks["functor_identities"] = "skipped (module is not lawful)"
    return {"module": module_header(V), "checks": checks, "ok": ok}, ok


def _functor_checks(V: TruncatedModule) -> dict:
    out = {}
    if all(b >= 1 for b in V.box):
        bad = [n for n, d in fn.four_term(V).items() if d]
        out["four_term"] = "pass" if not bad else f"FAIL at {key(bad[0])}"
        for i in range(V.m):
            dk = fn.derivative_and_kernel(V, i)
            bad = [n for n, (k, s, v, d) in dk.certificate.items() if k + s != v + d]
            out[f"derivative_kernel_{i + 1}"] = "pass" if not bad else f"FAIL at {key(bad[0])}"
    for i in range(V.m):
        for j in range(i + 1, V.m):
            if V.box[i] >= 1 and V.box[j] >= 1:
                a = fn.shift(fn.shift(V, i).output, j).output
                b = fn.shift(fn.shift(V, j).output, i).output
                out[f"shift_commute_{i + 1}{j + 1}"] = "pass" if fn.same_module(a, b) else "FAIL"
    for i in range(V.m):
        for j in range(V.m):
            need = 2 if i == j else 1
            if V.box[i] >= need and V.box[j] >= 1:
                ok = fn.sigma_d_isomorphism(V, i, j)
                out[f"shift_derivative_{i + 1}{j + 1}"] = "pass" if ok else "FAIL"
    return out


def shift_report(V: TruncatedModule, amounts) -> dict:
    res = fn.shift_by(V, amounts)
    W = res.output
    ranks = {key(n): res.natural[n].rank() for n in W.shapes()}
    return {
        "module": module_header(V),
        "shift": list(amounts),
        "box": list(W.box),
        "dims": dims_map(W.dims, W.shapes()),
        "natural_map_rank": ranks,
    }


def nagpal_report(V: TruncatedModule, amounts=None) -> dict:
    cx = ho.nagpal_complex(V, amounts)
    return {"module": module_header(V), "nagpal": nagpal_section(cx)}


def decompose_report(V: TruncatedModule) -> dict:
    return {
        "module": module_header(V),
        "multiplicities": {key(n): multiplicity_map(st.decompose(V, n)) for n in V.shapes()},
    }


def hilbert_report(V: TruncatedModule) -> tuple[dict, bool]:
    fit = st.hilbert_fit(V)
    return {"module": module_header(V), "hilbert": hilbert_section(fit)}, fit.ok


# -- rendering ----------------------------------------------------------------------

def emit_structured(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=True) + "\n"


def parse_structured(text: str) -> dict:
    return json.loads(text)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def emit_table(report: dict) -> str:
    lines: list[str] = []

    def walk(node, depth):
        pad = "  " * depth
        for k, v in node.items():
            if isinstance(v, dict):
                if not v:
                    lines.append(f"{pad}{k}: (none)")
                    continue
                lines.append(f"{pad}{k}:")
                walk(v, depth + 1)
            elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}{k}:")
                for idx, item in enumerate(v):
                    if isinstance(item, dict):
                        lines.append(f"{pad}  [{idx}]" + (" (none)" if not item else ""))
                        walk(item, depth + 2)
                    else:
                        lines.append(f"{pad}  [{idx}] {_scalar(item)}")
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")

    walk(report, 0)
    return "\n".join(lines) + "\n"
