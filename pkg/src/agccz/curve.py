"""Geometric data consumed by the code pipeline: rational places partitioned
into fibers over x-coordinates, a function basis closed under the fiber
automorphisms, and an all-nonzero twist vector making the evaluation code
self-orthogonal under the twisted bilinear form.

Two backends are provided.

``artin_schreier_hermitian``
    The curve y^r + y = x^(r+1) over GF(q), q = r^2.  Its r^3 affine rational
    points split into q fibers of constant x, each of size r; the translations
    y -> y + c for c in GF(r) fix every fiber setwise and act simply
    transitively on it.  The one-point function space with pole bound s is
    spanned by the monomials x^i y^j with j <= r-1 and i*r + j*(r+1) <= s,
    and the all-ones twist vector works for every s with 2s <= N + 2g - 2.

``exhaustive_toy``
    Arbitrary user-supplied place/fiber/basis/twist data.  Everything is
    re-validated against the same axioms on load, so a toy instance is exactly
    as trustworthy as the built-in curve.

The downstream constructions use nothing about the geometry beyond these
axioms, so any future backend satisfying them slots in unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from math import comb

import numpy as np

from .errors import AxiomViolation, ConfigError
from .field import GF, field_from_params

HERMITIAN = "artin_schreier_hermitian"
TOY = "exhaustive_toy"


def genus(r: int) -> int:
    return r * (r - 1) // 2


def num_places(r: int) -> int:
    return r**3


@dataclass
class CurveSpec:
    """Backend selector plus the pole bound of the one-point divisor."""

    gf: GF
    kind: str = HERMITIAN
    s: int | None = None
    beta_x: int | None = None        # x-coordinate of the distinguished fiber
    toy_data: dict | None = None     # parsed toy artifact for kind == TOY

    def __post_init__(self):
        if self.kind not in (HERMITIAN, TOY):
            raise ConfigError(f"unknown backend kind {self.kind!r}")
        if self.kind == HERMITIAN:
            if self.s is None:
                raise ConfigError("pole bound s is required for the curve backend")
            r = self.gf.r
            g2 = 2 * genus(r) - 2
            n = num_places(r)
            if not self.s > g2:
                raise ConfigError(f"s={self.s} must exceed 2g-2={g2}")
            if not 4 * self.s <= n + g2:
                raise ConfigError(f"4s={4 * self.s} exceeds N+2g-2={n + g2}")
            if self.beta_x is not None:
                self.gf.check(self.beta_x)
        else:
            if self.toy_data is None:
                raise ConfigError("toy backend needs place/fiber/basis data")

    @property
    def r(self) -> int:
        return self.gf.r


@dataclass
class Place:
    id: int
    x: int
    y: int
    fiber_id: int


@dataclass
class PlaceTable:
    places: list[Place]
    fibers: dict[int, list[int]]
    distinguished_fiber: int
    x_of: np.ndarray = dfield(init=False)
    y_of: np.ndarray = dfield(init=False)
    fiber_of: np.ndarray = dfield(init=False)
    coord_index: dict = dfield(init=False)

    def __post_init__(self):
        n = len(self.places)
        ids = sorted(p.id for p in self.places)
        if ids != list(range(n)):
            raise AxiomViolation("distinct-place-ids", "ids must be exactly 0..N-1")
        self.x_of = np.zeros(n, dtype=np.uint16)
        self.y_of = np.zeros(n, dtype=np.uint16)
        self.fiber_of = np.zeros(n, dtype=np.int64)
        self.coord_index = {}
        for p in self.places:
            self.x_of[p.id] = p.x
            self.y_of[p.id] = p.y
            self.fiber_of[p.id] = p.fiber_id
            if (p.x, p.y) in self.coord_index:
                raise AxiomViolation("distinct-places", f"repeated coordinates {(p.x, p.y)}")
            self.coord_index[(p.x, p.y)] = p.id

    @property
    def n_places(self) -> int:
        return len(self.places)

    @property
    def beta_ids(self) -> list[int]:
        return list(self.fibers[self.distinguished_fiber])

    @property
    def alpha_ids(self) -> list[int]:
        beta = set(self.beta_ids)
        return [p.id for p in self.places if p.id not in beta]


@dataclass
class RRBasis:
    """Monomial exponent pairs (i, j) meaning x^i y^j, with the pole bound."""

    monomials: list[tuple[int, int]]
    s: int | None

    def __len__(self) -> int:
        return len(self.monomials)

    def index(self) -> dict[tuple[int, int], int]:
        return {mon: idx for idx, mon in enumerate(self.monomials)}


@dataclass
class AutMap:
    """Translation y -> y + c as a total permutation of place ids."""

    c: int
    perm: np.ndarray


def monomials_for_bound(r: int, bound: int) -> list[tuple[int, int]]:
    """Monomials x^i y^j with j <= r-1 and weight i*r + j*(r+1) <= bound,
    in (weight, j) order.  Weights are pole orders at the point at infinity,
    so distinct monomials have distinct weights."""
    mons = []
    for j in range(min(r - 1, bound // (r + 1)) + 1):
        rem = bound - j * (r + 1)
        for i in range(rem // r + 1):
            mons.append((i, j))
    mons.sort(key=lambda m: (m[0] * r + m[1] * (r + 1), m[1]))
    return mons


def build_places(spec: CurveSpec) -> PlaceTable:
    """All affine rational points of the curve, grouped into fibers of size r."""
    if spec.kind == TOY:
        return load_toy(spec)[0]
    gf = spec.gf
    r = gf.r
    places: list[Place] = []
    fibers: dict[int, list[int]] = {}
    distinguished = None
    fiber_id = -1
    for x in gf.elements():
        target = gf.pow(x, r + 1)
        ys = [y for y in gf.elements() if gf.pow(y, r) ^ y == target]
        if not ys:
            continue
        fiber_id += 1
        fibers[fiber_id] = []
        if x == (spec.beta_x if spec.beta_x is not None else 0):
            distinguished = fiber_id
        for y in ys:
            pid = len(places)
            places.append(Place(pid, x, y, fiber_id))
            fibers[fiber_id].append(pid)
    if distinguished is None:
        raise ConfigError(f"no fiber over x={spec.beta_x:#x}")
    table = PlaceTable(places, fibers, distinguished)
    assert table.n_places == num_places(r)
    assert all(len(ids) == r for ids in fibers.values())
    return table


def rr_basis(spec: CurveSpec) -> RRBasis:
    """Monomial basis of the one-point space L(s P_inf); size s + 1 - g."""
    if spec.kind == TOY:
        return load_toy(spec)[1]
    r = spec.gf.r
    if not spec.s > 2 * genus(r) - 2:
        raise ConfigError(f"s={spec.s} <= 2g-2; dimension formula invalid")
    mons = monomials_for_bound(r, spec.s)
    # Riemann-Roch: the Weierstrass semigroup at P_inf is <r, r+1>
    assert len(mons) == spec.s + 1 - genus(r)
    return RRBasis(mons, spec.s)


def evaluate(gf: GF, monomial: tuple[int, int], x: int, y: int) -> int:
    i, j = monomial
    return gf.mul(gf.pow(x, i), gf.pow(y, j))


def eval_matrix(gf: GF, basis: RRBasis, table: PlaceTable, col_ids=None) -> np.ndarray:
    """Row j = evaluations of basis monomial j at the given places."""
    ids = np.asarray(col_ids if col_ids is not None else range(table.n_places))
    xs, ys = table.x_of[ids], table.y_of[ids]
    mt = gf.mul_table
    max_i = max((m[0] for m in basis.monomials), default=0)
    max_j = max((m[1] for m in basis.monomials), default=0)
    xp = [np.ones_like(xs)]
    for _ in range(max_i):
        xp.append(mt[xp[-1], xs])
    yp = [np.ones_like(ys)]
    for _ in range(max_j):
        yp.append(mt[yp[-1], ys])
    return np.stack([mt[xp[i], yp[j]] for i, j in basis.monomials])


def automorphisms(spec: CurveSpec, table: PlaceTable) -> list[AutMap]:
    """The r translations y -> y + c, c in GF(r), as place permutations."""
    if spec.kind == TOY:
        return _translation_maps(spec.gf, table, _toy_translations(spec))
    constants = spec.gf.subfield_elements()
    return _translation_maps(spec.gf, table, constants)


def _translation_maps(gf: GF, table: PlaceTable, constants: list[int]) -> list[AutMap]:
    auts = []
    for c in constants:
        perm = np.zeros(table.n_places, dtype=np.int64)
        for p in table.places:
            image = table.coord_index.get((p.x, p.y ^ c))
            if image is None:
                raise AxiomViolation(
                    "translation-closure", f"y -> y + {c:#x} leaves the place set at {(p.x, p.y)}"
                )
            perm[p.id] = image
        auts.append(AutMap(c, perm))
    return auts


def pullback(gf: GF, basis: RRBasis, coeffs, aut: AutMap | int) -> np.ndarray:
    """Coefficients of f composed with the inverse translation, in the same
    basis: substitute y -> y + c.  In characteristic two the translation is
    its own inverse, so evaluate(pullback(f, phi), P) = evaluate(f, phi(P))
    = evaluate(f, phi^{-1}(P))."""
    c = aut.c if isinstance(aut, AutMap) else aut
    index = basis.index()
    out = np.zeros(len(basis), dtype=np.uint16)
    coeffs = np.asarray(coeffs, dtype=np.uint16)
    for idx, (i, j) in enumerate(basis.monomials):
        a = int(coeffs[idx])
        if a == 0:
            continue
        for l in range(j + 1):
            if comb(j, l) % 2 == 0:
                continue
            term = gf.mul(a, gf.pow(c, j - l))
            if term == 0:
                continue
            tgt = index.get((i, l))
            if tgt is None:
                raise AxiomViolation(
                    "pullback-closure", f"x^{i} y^{l} escapes the basis under y -> y + {c:#x}"
                )
            out[tgt] ^= term
    return out


def dual_twist_vector(spec: CurveSpec, table: PlaceTable, basis: RRBasis) -> np.ndarray:
    """All-nonzero u (place-id order) with sum_P u_P f(P) g(P) = 0 for all
    basis pairs.  For the full-support curve backend this is the all-ones
    vector; the candidate is verified by brute force, never assumed."""
    if spec.kind == TOY:
        u = _toy_u(spec)
    else:
        r = spec.gf.r
        if not 2 * spec.s <= num_places(r) + 2 * genus(r) - 2:
            raise ConfigError(f"2s={2 * spec.s} exceeds N+2g-2; no twist vector guarantee")
        u = np.ones(table.n_places, dtype=np.uint16)
    verify_pair_annihilation(spec.gf, table, basis, u)
    return u


def verify_pair_annihilation(gf: GF, table: PlaceTable, basis: RRBasis, u: np.ndarray) -> None:
    if np.any(u == 0) or len(u) != table.n_places:
        raise AxiomViolation("twist-nonzero", "u must be all-nonzero of length N")
    ev = eval_matrix(gf, basis, table)
    weighted = gf.mul_table[ev, u[None, :]]
    gram = np.bitwise_xor.reduce(
        gf.mul_table[ev[:, None, :], weighted[None, :, :]], axis=2
    )
    if np.any(gram != 0):
        j1, j2 = np.argwhere(gram != 0)[0]
        raise AxiomViolation(
            "pair-annihilation",
            f"sum_P u_P f{j1} f{j2} (P) = {int(gram[j1, j2]):#x} != 0",
        )


def verify_fourfold_annihilation(
    gf: GF, table: PlaceTable, basis: RRBasis, u: np.ndarray, exhaustive_limit: int = 2**28
) -> str:
    """sum_P u_P f1 f2 f3 f4 (P) = 0 over basis 4-tuples.  Exhaustive via the
    pairwise-product matrix when m^4 * N fits the budget, else >= 1000 seeded
    random tuples.  Returns the mode used."""
    ev = eval_matrix(gf, basis, table)
    m, n = ev.shape
    mt = gf.mul_table
    if m**4 * n <= exhaustive_limit:
        pairs = mt[ev[:, None, :], ev[None, :, :]].reshape(m * m, n)
        weighted = mt[pairs, u[None, :]]
        gram = np.bitwise_xor.reduce(mt[pairs[:, None, :], weighted[None, :, :]], axis=2)
        if np.any(gram != 0):
            a, b = np.argwhere(gram != 0)[0]
            raise AxiomViolation(
                "fourfold-annihilation",
                f"tuple ({a // m},{a % m},{b // m},{b % m}) sums to {int(gram[a, b]):#x}",
            )
        return "exhaustive"
    rng = np.random.default_rng(0xA4)
    tuples = rng.integers(0, m, size=(1000, 4))
    prods = mt[mt[ev[tuples[:, 0]], ev[tuples[:, 1]]], mt[ev[tuples[:, 2]], ev[tuples[:, 3]]]]
    sums = np.bitwise_xor.reduce(mt[prods, u[None, :]], axis=1)
    if np.any(sums != 0):
        bad = int(np.argmax(sums != 0))
        raise AxiomViolation(
            "fourfold-annihilation", f"tuple {tuple(int(v) for v in tuples[bad])} sums nonzero"
        )
    return "sampled"


def validate_axioms(
    gf: GF, table: PlaceTable, basis: RRBasis, auts: list[AutMap], u: np.ndarray
) -> dict:
    """Check every axiom the gate constructions rely on; raise AxiomViolation
    with the failing axiom's name otherwise.  Returns a small report."""
    # fiber partition, consistent with x
    seen: set[int] = set()
    sizes = set()
    for fid, ids in table.fibers.items():
        if not ids:
            raise AxiomViolation("fiber-partition", f"empty fiber {fid}")
        sizes.add(len(ids))
        for pid in ids:
            if pid in seen:
                raise AxiomViolation("fiber-partition", f"place {pid} in two fibers")
            seen.add(pid)
            if table.fiber_of[pid] != fid:
                raise AxiomViolation("fiber-consistency", f"place {pid} mislabelled")
        xs = {int(table.x_of[pid]) for pid in ids}
        if len(xs) != 1:
            raise AxiomViolation("fiber-consistency", f"fiber {fid} mixes x-coordinates")
    if seen != set(range(table.n_places)):
        raise AxiomViolation("fiber-partition", "fibers do not cover all places")
    x_classes = {}
    for p in table.places:
        x_classes.setdefault(p.x, set()).add(p.fiber_id)
    if any(len(f) != 1 for f in x_classes.values()):
        raise AxiomViolation("fiber-consistency", "one x-coordinate split across fibers")

    # automorphism group: closed, constants in GF(r), fibers preserved setwise
    consts = sorted(a.c for a in auts)
    if len(set(consts)) != len(consts) or 0 not in consts:
        raise AxiomViolation("translation-group", "constants must be distinct and contain 0")
    cset = set(consts)
    for c1 in consts:
        if not gf.in_subfield(c1):
            raise AxiomViolation("translation-group", f"constant {c1:#x} outside GF(r)")
        for c2 in consts:
            if c1 ^ c2 not in cset:
                raise AxiomViolation("translation-group", "constants not closed under addition")
    if sizes != {len(auts)}:
        raise AxiomViolation(
            "complete-splitting", f"fiber sizes {sorted(sizes)} != group order {len(auts)}"
        )
    by_c = {a.c: a for a in auts}
    ident = by_c[0]
    if not np.array_equal(ident.perm, np.arange(table.n_places)):
        raise AxiomViolation("translation-group", "c = 0 is not the identity permutation")
    for a in auts:
        if sorted(a.perm.tolist()) != list(range(table.n_places)):
            raise AxiomViolation("translation-group", f"c={a.c:#x} is not a permutation")
        if np.any(table.fiber_of[a.perm] != table.fiber_of):
            raise AxiomViolation("fiber-preservation", f"c={a.c:#x} moves a place across fibers")
    # composition law: perm_{c1} after perm_{c2} = perm_{c1+c2}
    for a1 in auts:
        for a2 in auts:
            if not np.array_equal(a1.perm[a2.perm], by_c[a1.c ^ a2.c].perm):
                raise AxiomViolation("translation-group", "composition law broken")

    # simply transitive on every fiber
    for fid, ids in table.fibers.items():
        for p in ids:
            for p2 in ids:
                hits = [a.c for a in auts if a.perm[p] == p2]
                if len(hits) != 1:
                    raise AxiomViolation(
                        "simple-transitivity", f"{len(hits)} maps send {p} to {p2} in fiber {fid}"
                    )

    # pullback closure and the evaluation identity at every place
    ev = eval_matrix(gf, basis, table)
    m = len(basis)
    for a in auts:
        inv_perm = np.argsort(a.perm)
        for j in range(m):
            unit = np.zeros(m, dtype=np.uint16)
            unit[j] = 1
            co = pullback(gf, basis, unit, a)  # may raise pullback-closure
            lhs = np.bitwise_xor.reduce(gf.mul_table[co[:, None], ev], axis=0)
            rhs = ev[j][inv_perm]
            if not np.array_equal(lhs, rhs):
                raise AxiomViolation(
                    "pullback-evaluation", f"basis {j} under c={a.c:#x} breaks the identity"
                )

    verify_pair_annihilation(gf, table, basis, u)
    four_mode = verify_fourfold_annihilation(gf, table, basis, u)
    return {
        "n_places": table.n_places,
        "fibers": len(table.fibers),
        "fiber_size": len(auts),
        "basis_size": m,
        "fourfold_mode": four_mode,
    }


@dataclass
class Backend:
    """Validated bundle of everything the code pipeline consumes."""

    spec: CurveSpec
    table: PlaceTable
    basis: RRBasis
    auts: list[AutMap]
    u: np.ndarray
    report: dict


def build_backend(spec: CurveSpec) -> Backend:
    if spec.kind == TOY:
        table, basis, auts, u = load_toy(spec)
    else:
        table = build_places(spec)
        basis = rr_basis(spec)
        auts = automorphisms(spec, table)
        u = dual_twist_vector(spec, table, basis)
    report = validate_axioms(spec.gf, table, basis, auts, u)
    return Backend(spec, table, basis, auts, u, report)


# -- toy backend -----------------------------------------------------------


def _toy_translations(spec: CurveSpec) -> list[int]:
    return [int(c, 16) for c in spec.toy_data["aut_translations"]]


def _toy_u(spec: CurveSpec) -> np.ndarray:
    return np.array([int(v, 16) for v in spec.toy_data["u"]], dtype=np.uint16)


def load_toy(spec: CurveSpec):
    """Parse user-supplied place/fiber/basis data; axioms are re-validated by
    build_backend, structural sanity is enforced here."""
    data = spec.toy_data
    try:
        places = [
            Place(int(p["id"]), int(p["x"], 16), int(p["y"], 16), int(p["fiber"]))
            for p in data["places"]
        ]
        fibers = {int(k): list(v) for k, v in data["fibers"].items()}
        distinguished = int(data["distinguished_fiber"])
        monomials = [tuple(int(e) for e in mon) for mon in data["monomials"]]
        table = PlaceTable(places, fibers, distinguished)
        basis = RRBasis(monomials, data.get("s"))
        auts = _translation_maps(spec.gf, table, _toy_translations(spec))
        u = _toy_u(spec)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed toy data: {exc}") from exc
    for p in places:
        spec.gf.check(p.x, p.y)
    if distinguished not in fibers:
        raise ConfigError(f"distinguished fiber {distinguished} not present")
    if len(set(monomials)) != len(monomials):
        raise ConfigError("repeated monomials in toy basis")
    return table, basis, auts, u


def builtin_toy_r2() -> dict:
    """A hand-checked 8-place toy over GF(4) with two logical places.

    Fibers pair (x, y) with (x, y+1) and the y-values are balanced across the
    field, so the all-ones twist vector annihilates every product of up to
    four functions from span{1, y}.  Unlike the r=2 curve instance, the basis
    separates the places inside a fiber, so the whole gate pipeline (k = m =
    2, empty stabilizer side) can run end to end on it.
    """
    coords = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
    places = [
        {"id": i, "x": f"{x:#x}", "y": f"{y:#x}", "fiber": x}
        for i, (x, y) in enumerate(coords)
    ]
    return {
        "field": {"t": 1, "reduction_polynomial": "0x7"},
        "kind": TOY,
        "r": 2,
        "s": None,
        "places": places,
        "fibers": {"0": [0, 1], "1": [2, 3], "2": [4, 5], "3": [6, 7]},
        "distinguished_fiber": 0,
        "monomials": [[0, 0], [0, 1]],
        "aut_translations": ["0x0", "0x1"],
        "u": ["0x1"] * 8,
    }


def toy_spec(data: dict) -> CurveSpec:
    gf = field_from_params(data["field"])
    return CurveSpec(gf, kind=TOY, s=data.get("s"), toy_data=data)
