"""JSON artifact formats and round-trip loaders.

All artifacts are canonical JSON (sorted keys, two-space indent) so that a
load/save cycle is byte-identical.  Field elements appear either as single
"0x.." literals or, inside matrices and weight vectors, as fixed-width hex
row strings whose element width is determined by the field.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .css import AutPerm, CodePartition, CssCode
from .curve import Backend
from .errors import ConfigError
from .field import GF, field_from_params
from .scheduler import Schedule
from .synth import CczGate, GateList, canonical_pattern
from .verifier import Certificate


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def sha256_of(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def save_json(path, obj) -> str:
    text = canonical_dumps(obj)
    Path(path).write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read artifact {path}: {exc}") from exc


def enc_elem(a: int) -> str:
    return f"{int(a):#x}"


def enc_row(gf: GF, row) -> str:
    w = gf.hex_width
    return "".join(f"{int(v):0{w}x}" for v in row)


def dec_row(gf: GF, text: str) -> np.ndarray:
    w = gf.hex_width
    if len(text) % w:
        raise ConfigError("hex row length does not match the element width")
    vals = [int(text[i : i + w], 16) for i in range(0, len(text), w)]
    gf.check(*vals)
    return np.array(vals, dtype=np.uint16)


def enc_matrix(gf: GF, M) -> list[str]:
    return [enc_row(gf, row) for row in M]


def dec_matrix(gf: GF, rows: list[str], ncols: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, ncols), dtype=np.uint16)
    M = np.stack([dec_row(gf, r) for r in rows])
    if M.shape[1] != ncols:
        raise ConfigError(f"matrix width {M.shape[1]} != expected {ncols}")
    return M


# -- curve artifact ----------------------------------------------------------


def curve_to_dict(backend: Backend) -> dict:
    spec, table = backend.spec, backend.table
    gf = spec.gf
    return {
        "field": gf.params(),
        "kind": spec.kind,
        "r": spec.r,
        "s": spec.s,
        "places": [
            {"id": p.id, "x": enc_elem(p.x), "y": enc_elem(p.y), "fiber": p.fiber_id}
            for p in table.places
        ],
        "fibers": {str(fid): list(ids) for fid, ids in table.fibers.items()},
        "distinguished_fiber": table.distinguished_fiber,
        "monomials": [list(m) for m in backend.basis.monomials],
        "aut_translations": [enc_elem(a.c) for a in backend.auts],
        "u": enc_row(gf, backend.u),
    }


def backend_from_dict(data: dict) -> Backend:
    from .curve import HERMITIAN, CurveSpec, build_backend

    gf = field_from_params(data["field"])
    if data["kind"] == HERMITIAN:
        # rebuild from the defining parameters, then cross-check the listed places
        beta_fiber = data["distinguished_fiber"]
        beta_x = int(data["places"][data["fibers"][str(beta_fiber)][0]]["x"], 16)
        spec = CurveSpec(gf, kind=HERMITIAN, s=data["s"], beta_x=beta_x)
        backend = build_backend(spec)
        listed = {(int(p["x"], 16), int(p["y"], 16)) for p in data["places"]}
        built = {(p.x, p.y) for p in backend.table.places}
        if listed != built:
            raise ConfigError("curve artifact places disagree with the stated parameters")
        return backend
    from .curve import toy_spec

    toy = dict(data)
    toy["u"] = [enc_elem(v) for v in dec_row(gf, data["u"])]
    return build_backend(toy_spec(toy))


# -- css artifact ------------------------------------------------------------


def css_to_dict(css: CssCode, curve_ref: dict | None = None) -> dict:
    gf = css.gf
    return {
        "field": gf.params(),
        "kind": css.kind,
        "r": css.r,
        "s": css.s,
        "curve_ref": curve_ref,
        "G1": enc_matrix(gf, css.G1),
        "G0": enc_matrix(gf, css.G0),
        "x": enc_row(gf, css.partition.x),
        "y": enc_row(gf, css.partition.y),
        "beta_place_ids": list(css.beta_place_ids),
        "alpha_place_ids": list(css.alpha_place_ids),
        "aut_table": {
            f"{A},{B}": {"c": enc_elem(aut.c), "alpha_perm": aut.alpha_perm.tolist()}
            for (A, B), aut in sorted(css.aut_table.items())
        },
        "params": dict(css.metadata),
    }


def css_from_dict(data: dict) -> CssCode:
    gf = field_from_params(data["field"])
    x = dec_row(gf, data["x"])
    y = dec_row(gf, data["y"])
    k, n = len(x), len(y)
    G1 = dec_matrix(gf, data["G1"], n)
    G0 = dec_matrix(gf, data["G0"], n)
    if G1.shape[0] != k:
        raise ConfigError("G1 row count disagrees with the partition")
    Gtilde = np.hstack(
        [
            np.vstack([np.eye(k, dtype=np.uint16), np.zeros((G0.shape[0], k), dtype=np.uint16)]),
            np.vstack([G1, G0]) if G0.size else G1,
        ]
    )
    aut_table = {}
    for key, val in data["aut_table"].items():
        A, B = (int(v) for v in key.split(","))
        aut_table[(A, B)] = AutPerm(int(val["c"], 16), np.array(val["alpha_perm"], dtype=np.int64))
    return CssCode(
        gf=gf,
        kind=data["kind"],
        r=data["r"],
        s=data["s"],
        Gtilde=Gtilde,
        G1=G1,
        G0=G0,
        partition=CodePartition(k, n, x, y),
        beta_place_ids=list(data["beta_place_ids"]),
        alpha_place_ids=list(data["alpha_place_ids"]),
        aut_table=aut_table,
        metadata=dict(data["params"]),
    )


# -- gate list / schedule / certificate ---------------------------------------


def gatelist_to_dict(gl: GateList, instance: dict | None = None) -> dict:
    return {
        "pattern": gl.pattern,
        "target": {
            "A": gl.target["A"],
            "B": gl.target["B"],
            "C": gl.target["C"],
            "gamma": enc_elem(gl.target["gamma"]),
        },
        "gates": [
            {"coeff": enc_elem(g.coeff), "legs": [list(leg) for leg in g.legs]}
            for g in gl.gates
        ],
        "instance": instance,
    }


def gatelist_from_dict(data: dict) -> GateList:
    target = {
        "A": int(data["target"]["A"]),
        "B": int(data["target"]["B"]),
        "C": int(data["target"]["C"]),
        "gamma": int(data["target"]["gamma"], 16),
    }
    gates = [
        CczGate(int(g["coeff"], 16), tuple((int(b), int(p)) for b, p in g["legs"]))
        for g in data["gates"]
    ]
    return GateList(canonical_pattern(data["pattern"]), target, gates)


def schedule_to_dict(sched: Schedule) -> dict:
    return {"depth": sched.depth, "layers": [list(layer) for layer in sched.layers]}


def schedule_from_dict(data: dict) -> Schedule:
    sched = Schedule([list(layer) for layer in data["layers"]])
    if sched.depth != data["depth"]:
        raise ConfigError("schedule depth disagrees with its layers")
    return sched


def certificate_to_dict(cert: Certificate, instance: dict | None = None) -> dict:
    return {
        "instance": instance,
        "pattern": cert.pattern,
        "target": {
            "A": cert.target["A"],
            "B": cert.target["B"],
            "C": cert.target["C"],
            "gamma": enc_elem(cert.target["gamma"]),
        },
        "method": cert.method,
        "mode": cert.mode,
        "seed": cert.seed,
        "result": cert.result,
        "witness": cert.witness,
        "details": cert.details,
        "tool_version": __version__,
    }
