"""Lattice hole-pairing model with an exact operator-algebra backend.

Spin-1/2 electrons live on a rectangular lattice; each site carries one of
four states (doubly occupied, spin up, spin down, hole).  The module has
three layers:

* exact Jordan-Wigner fermion operators on lattices of at most six sites,
  with exhaustive checks of the anticommutation relations, the
  current-operator commutator identities, and the directed-hop composition
  laws (`build_fermion_ops`, `current_ops`, `check_commutators`,
  `check_composition`);
* the 4x4 single-vertex representation of the directed hop maps
  (`vertex_matrices`);
* a diagonal stationary energy on occupation patterns with exact
  ground-state enumeration, simulated annealing for larger lattices, and
  hole-pairing diagnostics (`energy`, `ground_search_exact`,
  `ground_search_anneal`, `pairing_diagnostics`, `energy_estimates`).

Conventions: site index s = x * ly + y; fermion mode index 2 * site + spin
with spin 0 = up, 1 = down; an occupation code per site packs n_up in bit 0
and n_dn in bit 1, so code 0 is a hole.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy import sparse

__all__ = [
    "SPIN_UP",
    "SPIN_DOWN",
    "BASIS_STATES",
    "Lattice",
    "QuiverParams",
    "Occupation",
    "FermionOps",
    "CurrentOps",
    "AlgebraReport",
    "CompositionReport",
    "VertexMatrices",
    "AnnealResult",
    "HoleDiagnostics",
    "build_fermion_ops",
    "current_ops",
    "check_commutators",
    "check_composition",
    "vertex_matrices",
    "energy",
    "energy_batch",
    "ground_search_exact",
    "ground_search_anneal",
    "pairing_diagnostics",
    "energy_estimates",
]

SPIN_UP = 0
SPIN_DOWN = 1

# Single-vertex basis order used by vertex_matrices().
BASIS_STATES = ("double", "up", "down", "hole")

_MAX_ALGEBRA_SITES = 6      # Fock dimension 4**6 = 4096
_MAX_TUPLE_SITES = 4        # exhaustive 4-tuple loops stay affordable
_MAX_ENUM_STATES = 20_000_000

_CODE_ELECTRONS = (0, 1, 1, 2)
_CODE_CHARS = (".", "u", "d", "2")


# ---------------------------------------------------------------------------
# lattice geometry


@dataclass(frozen=True)
class Lattice:
    """Rectangular lattice with open or periodic boundary.

    Derived geometry: `bonds` lists each nearest-neighbor bond once as a
    (site, +x or +y neighbor) pair; `bonds_ordered` repeats every bond in
    both directions; `nnn_triples` lists (center, from, to) where from/to
    are distinct nearest neighbors of the center separated by a diagonal
    step (squared Euclidean distance 2, minimum-image for periodic
    boundaries).  Periodic wrap needs both dimensions >= 2; on a width-2
    periodic dimension the same site pair appears twice in `bonds` (a
    double bond), keeping four incident bonds per site.
    """

    lx: int
    ly: int
    boundary: str = "open"

    def __post_init__(self):
        if self.lx < 1 or self.ly < 1:
            raise ValueError("lattice dimensions must be positive")
        if self.boundary not in ("open", "periodic"):
            raise ValueError("boundary must be 'open' or 'periodic'")
        if self.boundary == "periodic" and min(self.lx, self.ly) < 2:
            raise ValueError("periodic boundaries need lx >= 2 and ly >= 2")

    @property
    def n_sites(self) -> int:
        return self.lx * self.ly

    def site(self, x: int, y: int) -> int:
        if not (0 <= x < self.lx and 0 <= y < self.ly):
            raise ValueError(f"coordinates ({x}, {y}) outside {self.lx}x{self.ly} lattice")
        return x * self.ly + y

    def coords(self, s: int) -> tuple[int, int]:
        if not 0 <= s < self.n_sites:
            raise ValueError(f"site index {s} outside lattice with {self.n_sites} sites")
        return divmod(s, self.ly)

    def displacement(self, a: int, b: int) -> tuple[int, int]:
        """Minimum-image displacement from site a to site b."""
        ax, ay = self.coords(a)
        bx, by = self.coords(b)
        dx, dy = bx - ax, by - ay
        if self.boundary == "periodic":
            if 2 * dx > self.lx:
                dx -= self.lx
            elif 2 * dx < -self.lx:
                dx += self.lx
            if 2 * dy > self.ly:
                dy -= self.ly
            elif 2 * dy < -self.ly:
                dy += self.ly
        return dx, dy

    @cached_property
    def bonds(self) -> tuple[tuple[int, int], ...]:
        out = []
        for x in range(self.lx):
            for y in range(self.ly):
                a = self.site(x, y)
                if x + 1 < self.lx:
                    out.append((a, self.site(x + 1, y)))
                elif self.boundary == "periodic":
                    out.append((a, self.site(0, y)))
                if y + 1 < self.ly:
                    out.append((a, self.site(x, y + 1)))
                elif self.boundary == "periodic":
                    out.append((a, self.site(x, 0)))
        return tuple(out)

    @cached_property
    def bonds_ordered(self) -> tuple[tuple[int, int], ...]:
        return self.bonds + tuple((b, a) for a, b in self.bonds)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Distinct nearest-neighbor sites of every site."""
        nb = [set() for _ in range(self.n_sites)]
        for a, b in self.bonds:
            nb[a].add(b)
            nb[b].add(a)
        return tuple(tuple(sorted(s)) for s in nb)

    @cached_property
    def nnn_triples(self) -> tuple[tuple[int, int, int], ...]:
        out = []
        for a in range(self.n_sites):
            for m in self.neighbors[a]:
                for n in self.neighbors[a]:
                    if m == n:
                        continue
                    dx, dy = self.displacement(m, n)
                    if dx * dx + dy * dy == 2:
                        out.append((a, m, n))
        return tuple(out)

    @cached_property
    def bond_index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        arr = np.array(self.bonds_ordered, dtype=np.intp).reshape(-1, 2)
        return arr[:, 0], arr[:, 1]

    @cached_property
    def nnn_index_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.nnn_triples:
            empty = np.zeros(0, dtype=np.intp)
            return empty, empty.copy(), empty.copy()
        arr = np.array(self.nnn_triples, dtype=np.intp)
        return arr[:, 0], arr[:, 1], arr[:, 2]


# ---------------------------------------------------------------------------
# model parameters and occupation patterns


@dataclass(frozen=True)
class QuiverParams:
    """Couplings and flags of the stationary lattice energy.

    U >= 0 penalizes double occupancy, t >= 0 rewards a nearest-neighbor
    hop channel (electron at the bond head, vacancy at the tail), k >= 0
    penalizes adjacent holes, and J >= 0 rewards diagonal
    (next-to-nearest-neighbor) hop channels around a center site.  The
    flags select how the diagonal term is gated: alpha_q = 1 counts it at
    every center, beta_q = 1 counts it only at centers that are holes.
    The two canonical settings are (1, 0) and (0, 1); other combinations
    are accepted with a warning.

    bond_convention fixes the normalization of the nearest-neighbor sums:
    "ordered" (default) runs over both directions of every bond as the
    directed-hop reading suggests, "unordered" counts each bond once by
    averaging the two directions, which halves the t and k sums and leaves
    the U and J terms unchanged.
    """

    U: float
    t: float
    k: float
    J: float
    alpha_q: int
    beta_q: int
    bond_convention: str = "ordered"

    def __post_init__(self):
        for name in ("U", "t", "k", "J"):
            val = float(getattr(self, name))
            if not math.isfinite(val) or val < 0.0:
                raise ValueError(f"{name} must be finite and >= 0")
            object.__setattr__(self, name, val)
        for name in ("alpha_q", "beta_q"):
            if getattr(self, name) not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1")
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.bond_convention not in ("ordered", "unordered"):
            raise ValueError("bond_convention must be 'ordered' or 'unordered'")
        if not self.canonical:
            warnings.warn(
                f"non-canonical flag combination (alpha_q, beta_q) = "
                f"({self.alpha_q}, {self.beta_q}); canonical settings are (1, 0) and (0, 1)",
                stacklevel=3,
            )

    @property
    def canonical(self) -> bool:
        return (self.alpha_q, self.beta_q) in ((1, 0), (0, 1))


@dataclass(frozen=True)
class Occupation:
    """Per-site electron content, packed as one code in 0..3 per site.

    Bit 0 of a code is the up occupation, bit 1 the down occupation:
    0 = hole, 1 = up, 2 = down, 3 = double.
    """

    codes: tuple[int, ...]

    def __post_init__(self):
        codes = tuple(int(c) for c in self.codes)
        if any(c < 0 or c > 3 for c in codes):
            raise ValueError("occupation codes must lie in 0..3")
        object.__setattr__(self, "codes", codes)

    @classmethod
    def from_pairs(cls, pairs) -> "Occupation":
        """Build from per-site (n_up, n_dn) pairs."""
        codes = []
        for n_up, n_dn in pairs:
            if n_up not in (0, 1) or n_dn not in (0, 1):
                raise ValueError("occupations must be 0 or 1")
            codes.append(n_up | (n_dn << 1))
        return cls(tuple(codes))

    @classmethod
    def from_arrays(cls, up, dn) -> "Occupation":
        up = np.asarray(up, dtype=np.int64)
        dn = np.asarray(dn, dtype=np.int64)
        if up.shape != dn.shape or up.ndim != 1:
            raise ValueError("up and dn must be equal-length 1-d arrays")
        return cls.from_pairs(zip(up.tolist(), dn.tolist()))

    @property
    def n_sites(self) -> int:
        return len(self.codes)

    @property
    def electron_count(self) -> int:
        return sum(_CODE_ELECTRONS[c] for c in self.codes)

    def pair(self, site: int) -> tuple[int, int]:
        c = self.codes[site]
        return c & 1, (c >> 1) & 1

    def up_dn_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        codes = np.array(self.codes, dtype=np.int64)
        return codes & 1, (codes >> 1) & 1

    def holes(self) -> tuple[int, ...]:
        return tuple(s for s, c in enumerate(self.codes) if c == 0)

    def spin_flipped(self) -> "Occupation":
        return Occupation(tuple(((c & 1) << 1) | ((c >> 1) & 1) for c in self.codes))

    def relabeled(self, perm) -> "Occupation":
        """Apply a site permutation: new site perm[s] receives the old state of s."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n_sites)):
            raise ValueError("perm must be a permutation of the site indices")
        codes = [0] * self.n_sites
        for s, c in enumerate(self.codes):
            codes[perm[s]] = c
        return Occupation(tuple(codes))

    def __str__(self) -> str:
        return "".join(_CODE_CHARS[c] for c in self.codes)


# ---------------------------------------------------------------------------
# exact fermion operators


def _fro(mat) -> float:
    """Frobenius norm of a sparse matrix."""
    if mat.nnz == 0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(mat.data) ** 2)))


@dataclass(frozen=True)
class FermionOps:
    """Jordan-Wigner annihilation/creation operators for every lattice mode."""

    lattice: Lattice
    c: tuple
    cdag: tuple
    dim: int

    @property
    def n_modes(self) -> int:
        return 2 * self.lattice.n_sites

    def mode(self, site: int, spin: int) -> int:
        if not 0 <= site < self.lattice.n_sites:
            raise ValueError(f"site index {site} outside lattice")
        if spin not in (SPIN_UP, SPIN_DOWN):
            raise ValueError("spin must be SPIN_UP (0) or SPIN_DOWN (1)")
        return 2 * site + spin

    def car_residual(self) -> float:
        """Worst Frobenius deviation from the canonical anticommutation relations."""
        eye = sparse.identity(self.dim, dtype=complex, format="csr")
        worst = 0.0
        for i in range(self.n_modes):
            for j in range(i, self.n_modes):
                anti = self.c[i] @ self.c[j] + self.c[j] @ self.c[i]
                worst = max(worst, _fro(anti))
                anti = self.cdag[i] @ self.cdag[j] + self.cdag[j] @ self.cdag[i]
                worst = max(worst, _fro(anti))
        for i in range(self.n_modes):
            for j in range(self.n_modes):
                mixed = self.c[i] @ self.cdag[j] + self.cdag[j] @ self.c[i]
                if i == j:
                    mixed = mixed - eye
                worst = max(worst, _fro(mixed))
        return worst


def build_fermion_ops(lattice: Lattice) -> FermionOps:
    """Exact sparse fermion operators, one mode per (site, spin).

    The Jordan-Wigner string runs over modes in site-major order
    (mode = 2 * site + spin), which fixes all sign conventions; any
    consistent ordering satisfies the same algebra.
    """
    n = lattice.n_sites
    if n > _MAX_ALGEBRA_SITES:
        raise ValueError(
            f"lattice has {n} sites; exact Fock operators are capped at "
            f"{_MAX_ALGEBRA_SITES} sites (dimension 4096)"
        )
    n_modes = 2 * n
    eye2 = sparse.identity(2, dtype=complex, format="csr")
    zmat = sparse.csr_matrix(np.diag([1.0 + 0j, -1.0 + 0j]))
    # annihilator in the (empty, occupied) single-mode basis
    lower = sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    ann = []
    for mode in range(n_modes):
        acc = None
        for pos in range(n_modes):
            factor = zmat if pos < mode else lower if pos == mode else eye2
            acc = factor if acc is None else sparse.kron(acc, factor, format="csr")
        ann.append(acc)
    cdag = tuple(op.conj().T.tocsr() for op in ann)
    return FermionOps(lattice=lattice, c=tuple(ann), cdag=cdag, dim=2 ** n_modes)


@dataclass(frozen=True)
class CurrentOps:
    """Density rho(a), antisymmetric flux j(a, b), symmetric flux k(a, b),
    and directed hop v(a, b) = cdag_b c_a for one spin channel."""

    rho: object
    j: object
    k: object
    v: object


def current_ops(ops: FermionOps, a: int, b: int, sigma: int) -> CurrentOps:
    """Current-algebra generators for the ordered site pair (a, b) at one spin.

    rho = cdag_a c_a, j = -i (cdag_b c_a - cdag_a c_b),
    k = cdag_b c_a + cdag_a c_b, v = (k + i j) / 2 = cdag_b c_a.
    Coincident sites are allowed: j(a, a) = 0, k(a, a) = 2 rho(a),
    v(a, a) = rho(a).
    """
    ma = ops.mode(a, sigma)
    mb = ops.mode(b, sigma)
    ca, cb = ops.c[ma], ops.c[mb]
    da, db = ops.cdag[ma], ops.cdag[mb]
    rho = da @ ca
    jop = -1j * (db @ ca - da @ cb)
    kop = db @ ca + da @ cb
    vop = 0.5 * (kop + 1j * jop)
    return CurrentOps(rho=rho, j=jop, k=kop, v=vop)


@dataclass(frozen=True)
class AlgebraReport:
    """Residuals of the five current-algebra commutator identities."""

    max_residual: float
    residuals: dict
    n_checks: int


def _pair_ops(ops: FermionOps):
    """All rho, j, k, v operators keyed by (spin, sites)."""
    n = ops.lattice.n_sites
    rho, jop, kop, vop = {}, {}, {}, {}
    for s in (SPIN_UP, SPIN_DOWN):
        for a in range(n):
            for b in range(n):
                cur = current_ops(ops, a, b, s)
                jop[s, a, b] = cur.j
                kop[s, a, b] = cur.k
                vop[s, a, b] = cur.v
                if a == b:
                    rho[s, a] = cur.rho
    return rho, jop, kop, vop


def check_commutators(lattice: Lattice) -> AlgebraReport:
    """Exhaustively verify the current-algebra commutators on a small lattice.

    All five identities are evaluated over every site tuple (coincident
    indices included) and every spin pair; cross-spin commutators must
    vanish.  Residuals are Frobenius norms of (LHS - RHS).
    """
    n = lattice.n_sites
    if n > _MAX_TUPLE_SITES:
        raise ValueError(
            f"commutator sweep is exhaustive over site tuples; lattice capped "
            f"at {_MAX_TUPLE_SITES} sites, got {n}"
        )
    ops = build_fermion_ops(lattice)
    rho, jop, kop, _ = _pair_ops(ops)
    sites = range(n)
    spins = (SPIN_UP, SPIN_DOWN)
    residuals = {
        "density_flux": 0.0,
        "density_sym": 0.0,
        "flux_flux": 0.0,
        "flux_sym": 0.0,
        "sym_sym": 0.0,
    }
    n_checks = 0

    def comm(x, y):
        return x @ y - y @ x

    for s1 in spins:
        for s2 in spins:
            same = s1 == s2
            for a in sites:
                ra = rho[s1, a]
                for m in sites:
                    for nn in sites:
                        coef = (a == nn) - (a == m)
                        lhs = comm(ra, jop[s2, m, nn])
                        rhs = (-1j * coef) * kop[s2, m, nn] if same and coef else None
                        diff = lhs if rhs is None else lhs - rhs
                        residuals["density_flux"] = max(residuals["density_flux"], _fro(diff))
                        lhs = comm(ra, kop[s2, m, nn])
                        rhs = (1j * coef) * jop[s2, m, nn] if same and coef else None
                        diff = lhs if rhs is None else lhs - rhs
                        residuals["density_sym"] = max(residuals["density_sym"], _fro(diff))
                        n_checks += 2
            for a in sites:
                for b in sites:
                    for m in sites:
                        for nn in sites:
                            lhs = comm(jop[s1, a, b], jop[s2, m, nn])
                            if same:
                                rhs = 1j * (
                                    -(a == m) * jop[s2, b, nn]
                                    + (a == nn) * jop[s2, b, m]
                                    - (b == nn) * jop[s2, a, m]
                                    + (b == m) * jop[s2, a, nn]
                                )
                                diff = lhs - rhs
                            else:
                                diff = lhs
                            residuals["flux_flux"] = max(residuals["flux_flux"], _fro(diff))
                            lhs = comm(jop[s1, a, b], kop[s2, m, nn])
                            if same:
                                rhs = 1j * (
                                    -(a == m) * kop[s2, nn, b]
                                    - (a == nn) * kop[s2, m, b]
                                    + (b == nn) * kop[s2, m, a]
                                    + (b == m) * kop[s2, nn, a]
                                )
                                diff = lhs - rhs
                            else:
                                diff = lhs
                            residuals["flux_sym"] = max(residuals["flux_sym"], _fro(diff))
                            lhs = comm(kop[s1, a, b], kop[s2, m, nn])
                            if same:
                                rhs = 1j * (
                                    (a == m) * jop[s2, nn, b]
                                    + (a == nn) * jop[s2, m, b]
                                    + (b == nn) * jop[s2, m, a]
                                    + (b == m) * jop[s2, nn, a]
                                )
                                diff = lhs - rhs
                            else:
                                diff = lhs
                            residuals["sym_sym"] = max(residuals["sym_sym"], _fro(diff))
                            n_checks += 3
    return AlgebraReport(
        max_residual=max(residuals.values()),
        residuals=residuals,
        n_checks=n_checks,
    )


@dataclass(frozen=True)
class CompositionReport:
    """Residuals of the directed-hop composition and roundtrip laws.

    `coincident_gap` reports the literal LHS - RHS mismatch of the
    roundtrip law at coincident endpoints (a, a), where it degenerates:
    v(a, a) v(a, a) = rho(a) while rho(a)(1 - rho(a)) = 0.  It is exposed
    for documentation and excluded from `max_residual`; the exact
    statements at a = b are idempotence and complement annihilation.
    """

    max_residual: float
    composition_residual: float
    roundtrip_residual: float
    idempotence_residual: float
    complement_residual: float
    coincident_gap: float
    n_checks: int


def check_composition(lattice: Lattice) -> CompositionReport:
    """Exhaustively verify the hop composition and roundtrip laws.

    Composition: v(a, b) v(m, n) = [a == n] v(m, b) + [m == n] v(a, b)
    - v(m, b) v(a, n), over all site 4-tuples and both spins.
    Roundtrip: v(a, b) v(b, a) = rho(b)(1 - rho(a)) for a != b.
    """
    n = lattice.n_sites
    if n > _MAX_TUPLE_SITES:
        raise ValueError(
            f"composition sweep is exhaustive over site tuples; lattice capped "
            f"at {_MAX_TUPLE_SITES} sites, got {n}"
        )
    ops = build_fermion_ops(lattice)
    rho, _, _, vop = _pair_ops(ops)
    eye = sparse.identity(ops.dim, dtype=complex, format="csr")
    sites = range(n)
    comp = 0.0
    roundtrip = 0.0
    idem = 0.0
    complement = 0.0
    gap = 0.0
    n_checks = 0
    for s in (SPIN_UP, SPIN_DOWN):
        for a in sites:
            for b in sites:
                vab = vop[s, a, b]
                for m in sites:
                    for nn in sites:
                        lhs = vab @ vop[s, m, nn]
                        rhs = -(vop[s, m, b] @ vop[s, a, nn])
                        if a == nn:
                            rhs = rhs + vop[s, m, b]
                        if m == nn:
                            rhs = rhs + vab
                        comp = max(comp, _fro(lhs - rhs))
                        n_checks += 1
                lhs = vab @ vop[s, b, a]
                rhs = rho[s, b] @ (eye - rho[s, a])
                if a == b:
                    gap = max(gap, _fro(lhs - rhs))
                else:
                    roundtrip = max(roundtrip, _fro(lhs - rhs))
                n_checks += 1
        for a in sites:
            idem = max(idem, _fro(rho[s, a] @ rho[s, a] - rho[s, a]))
            complement = max(complement, _fro(rho[s, a] @ (eye - rho[s, a])))
            n_checks += 2
    return CompositionReport(
        max_residual=max(comp, roundtrip, idem, complement),
        composition_residual=comp,
        roundtrip_residual=roundtrip,
        idempotence_residual=idem,
        complement_residual=complement,
        coincident_gap=gap,
        n_checks=n_checks,
    )


# ---------------------------------------------------------------------------
# single-vertex representation


@dataclass(frozen=True)
class VertexMatrices:
    """4x4 hop and density maps on one vertex, basis order BASIS_STATES."""

    v_up: np.ndarray
    v_dn: np.ndarray
    rho_up: np.ndarray
    rho_dn: np.ndarray


def vertex_matrices() -> VertexMatrices:
    """Representation matrices of the directed hop and density maps.

    Entry (r, c) of a hop matrix is 1 when the hop can move the spin out of
    a source vertex in state c and deposit it on a target vertex reaching
    state r; density maps project onto the states containing that spin.
    Arrays are returned read-only.
    """
    v_up = np.array(
        [[0, 0, 1, 1], [0, 0, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=float
    )
    v_dn = np.array(
        [[0, 1, 0, 1], [0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 0, 0]], dtype=float
    )
    rho_up = np.diag([1.0, 1.0, 0.0, 0.0])
    rho_dn = np.diag([1.0, 0.0, 1.0, 0.0])
    for arr in (v_up, v_dn, rho_up, rho_dn):
        arr.setflags(write=False)
    return VertexMatrices(v_up=v_up, v_dn=v_dn, rho_up=rho_up, rho_dn=rho_dn)


# ---------------------------------------------------------------------------
# stationary energy


def _bond_scale(p: QuiverParams) -> float:
    # "unordered" counts each bond once by averaging both directions
    return 1.0 if p.bond_convention == "ordered" else 0.5


def energy_batch(up, dn, lattice: Lattice, p: QuiverParams) -> np.ndarray:
    """Stationary energies of a batch of occupation patterns.

    up, dn: arrays of shape (m, n_sites) with 0/1 entries.  The energy of
    a row is

        U * sum_a n_up n_dn
        - t * sum_(a,b),sigma n_sigma(b) (1 - n_sigma(a))
        + k * sum_(a,b),sigma h(a) h(b)
        - J * sum_a,sigma (alpha_q + beta_q h(a))
              * sum_(m,n) in diag(a), sigma' n_sigma'(n) (1 - n_sigma'(m))

    with h = (1 - n_up)(1 - n_dn), (a, b) running over ordered bonds (both
    directions; halved under the unordered convention) and diag(a) the
    ordered diagonal neighbor pairs of center a.  The spin sums over
    spin-blind summands contribute their multiplicity literally (factor 2
    on the hole-hole and diagonal terms).

    Every sum above is an integer count; the counts are reduced first and
    combined with the couplings in a fixed scalar order, so the energy is
    bitwise invariant under any occupation symmetry that preserves the
    counts (global spin flip, lattice symmetries).
    """
    up = np.asarray(up, dtype=np.float64)
    dn = np.asarray(dn, dtype=np.float64)
    if up.ndim != 2 or up.shape != dn.shape or up.shape[1] != lattice.n_sites:
        raise ValueError("up and dn must both have shape (m, n_sites)")
    hole = (1.0 - up) * (1.0 - dn)
    a_arr, b_arr = lattice.bond_index_arrays
    scale = _bond_scale(p)
    hop = up[:, b_arr] * (1.0 - up[:, a_arr]) + dn[:, b_arr] * (1.0 - dn[:, a_arr])
    e = p.U * np.einsum("ms,ms->m", up, dn)
    e = e - (p.t * scale) * hop.sum(axis=1)
    e = e + (2.0 * p.k * scale) * np.einsum("mi,mi->m", hole[:, a_arr], hole[:, b_arr])
    c_arr, m_arr, n_arr = lattice.nnn_index_arrays
    if c_arr.size and (p.alpha_q or p.beta_q):
        hop2 = up[:, n_arr] * (1.0 - up[:, m_arr]) + dn[:, n_arr] * (1.0 - dn[:, m_arr])
        if p.alpha_q:
            e = e - (2.0 * p.J) * hop2.sum(axis=1)
        if p.beta_q:
            e = e - (2.0 * p.J) * np.einsum("mi,mi->m", hole[:, c_arr], hop2)
    return e


def energy(occ: Occupation, lattice: Lattice, p: QuiverParams) -> float:
    """Stationary energy of one occupation pattern (see energy_batch)."""
    if occ.n_sites != lattice.n_sites:
        raise ValueError("occupation length does not match the lattice")
    up, dn = occ.up_dn_arrays()
    return float(energy_batch(up[None, :], dn[None, :], lattice, p)[0])


# ---------------------------------------------------------------------------
# ground-state search


def _decode_codes(code: int, n: int) -> tuple[int, ...]:
    # site 0 in the most significant digit pair: integer order is
    # lexicographic order of the per-site code tuple
    return tuple((code >> (2 * (n - 1 - s))) & 3 for s in range(n))


def ground_search_exact(lattice: Lattice, p: QuiverParams, electrons: int):
    """Exact minimum energy and the complete set of minimizers.

    Enumerates every occupation with the requested electron count in
    lexicographic order over per-site codes and returns
    (min_energy, minimizers) with minimizers a tuple of Occupation in
    enumeration order.
    """
    n = lattice.n_sites
    total = 4 ** n
    if total > _MAX_ENUM_STATES:
        raise ValueError(
            f"exact enumeration needs {total} occupation patterns, above the "
            f"cap {_MAX_ENUM_STATES}; use ground_search_anneal for this lattice"
        )
    if not 0 <= electrons <= 2 * n:
        raise ValueError(f"electron count must lie in 0..{2 * n}")
    shifts = 2 * np.arange(n - 1, -1, -1, dtype=np.int64)
    per_code = np.array(_CODE_ELECTRONS, dtype=np.int64)
    best = math.inf
    best_codes: list[int] = []
    chunk = 1 << 18
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (codes[:, None] >> shifts[None, :]) & 3
        mask = per_code[digits].sum(axis=1) == electrons
        if not mask.any():
            continue
        digits = digits[mask]
        codes = codes[mask]
        e = energy_batch(digits & 1, (digits >> 1) & 1, lattice, p)
        emin = float(e.min())
        if emin < best:
            best = emin
            best_codes = []
        if emin == best:
            best_codes.extend(int(c) for c in codes[e == best])
    minimizers = tuple(Occupation(_decode_codes(c, n)) for c in best_codes)
    return best, minimizers


@lru_cache(maxsize=8)
def _anneal_tables(lattice: Lattice):
    """Per-site lists of ordered-bond and diagonal-triple indices touching it."""
    bond_touch = [[] for _ in range(lattice.n_sites)]
    for idx, (a, b) in enumerate(lattice.bonds_ordered):
        bond_touch[a].append(idx)
        bond_touch[b].append(idx)
    triple_touch = [[] for _ in range(lattice.n_sites)]
    for idx, (c, m, n) in enumerate(lattice.nnn_triples):
        for s in {c, m, n}:
            triple_touch[s].append(idx)
    return (
        tuple(tuple(x) for x in bond_touch),
        tuple(tuple(x) for x in triple_touch),
    )


def _local_energy(up, dn, sites_aff, bond_idx, triple_idx, bonds, triples, p, scale):
    """Energy restricted to the given on-site, bond, and triple terms."""
    e = 0.0
    u_coef, t_coef, k_coef, j_coef = p.U, p.t * scale, p.k * scale * 2.0, p.J * 2.0
    alpha, beta = p.alpha_q, p.beta_q
    for s in sites_aff:
        e += u_coef * up[s] * dn[s]
    for i in bond_idx:
        a, b = bonds[i]
        e -= t_coef * (up[b] * (1 - up[a]) + dn[b] * (1 - dn[a]))
        if k_coef:
            e += k_coef * (1 - up[a]) * (1 - dn[a]) * (1 - up[b]) * (1 - dn[b])
    for i in triple_idx:
        c, m, n = triples[i]
        w = alpha + beta * (1 - up[c]) * (1 - dn[c])
        if w:
            e -= j_coef * w * (up[n] * (1 - up[m]) + dn[n] * (1 - dn[m]))
    return e


@dataclass(frozen=True)
class AnnealResult:
    """Best state found by simulated annealing.

    Iterating the result yields (best_energy, best_occupation); `trace`
    holds the running energy after each sweep and `n_accepted` the number
    of accepted moves.
    """

    best_energy: float
    best_occupation: Occupation
    trace: tuple
    n_accepted: int

    def __iter__(self):
        return iter((self.best_energy, self.best_occupation))


def ground_search_anneal(
    lattice: Lattice,
    p: QuiverParams,
    electrons: int,
    schedule=None,
    rng=None,
) -> AnnealResult:
    """Simulated annealing over occupation patterns at fixed electron count.

    schedule = (T_init, cooling, sweeps): the temperature starts at T_init
    and is multiplied by cooling after each sweep of 2 * n_sites proposed
    moves.  Moves are single-electron relocation to any empty spin slot and
    an on-site spin flip at a singly occupied site; both preserve the
    electron count.  T_init = 0 gives greedy descent (only downhill or flat
    moves accepted), so the per-sweep energy trace is monotone.  The final
    best energy is recomputed with `energy`, so it can never undercut the
    exact enumeration minimum.  Deterministic for a given rng seed.
    """
    n = lattice.n_sites
    if not 0 <= electrons <= 2 * n:
        raise ValueError(f"electron count must lie in 0..{2 * n}")
    if rng is None:
        rng = np.random.default_rng(0)
    if schedule is None:
        schedule = (2.0 * p.t if p.t > 0 else 1.0, 0.95, 2000)
    t_init, cooling, sweeps = schedule
    sweeps = int(sweeps)
    if t_init < 0 or not (0.0 < cooling < 1.0) or sweeps < 1:
        raise ValueError("schedule must be (T_init >= 0, cooling in (0, 1), sweeps >= 1)")

    up = [0] * n
    dn = [0] * n
    for slot in rng.permutation(2 * n)[:electrons].tolist():
        if slot % 2 == 0:
            up[slot // 2] = 1
        else:
            dn[slot // 2] = 1

    bonds = lattice.bonds_ordered
    triples = lattice.nnn_triples
    bond_touch, triple_touch = _anneal_tables(lattice)
    scale = _bond_scale(p)
    n_slots = 2 * n
    full = electrons == n_slots
    empty = electrons == 0

    e_now = energy(Occupation.from_arrays(up, dn), lattice, p)
    best_e = e_now
    best_state = (tuple(up), tuple(dn))
    trace = []
    accepted = 0
    temp = float(t_init)
    exp = math.exp

    for _ in range(sweeps):
        for _ in range(n_slots):
            relocate = rng.random() < 0.5
            if relocate:
                if empty or full:
                    continue
                src = dst = -1
                for _ in range(64):
                    slot = int(rng.integers(0, n_slots))
                    arr = up if slot % 2 == 0 else dn
                    if arr[slot // 2]:
                        src = slot
                        break
                for _ in range(64):
                    slot = int(rng.integers(0, n_slots))
                    arr = up if slot % 2 == 0 else dn
                    if not arr[slot // 2]:
                        dst = slot
                        break
                if src < 0 or dst < 0:
                    continue
                touched = (src // 2, dst // 2)

                def apply():
                    (up if src % 2 == 0 else dn)[src // 2] = 0
                    (up if dst % 2 == 0 else dn)[dst // 2] = 1

                def revert():
                    (up if src % 2 == 0 else dn)[src // 2] = 1
                    (up if dst % 2 == 0 else dn)[dst // 2] = 0

            else:
                site = -1
                for _ in range(64):
                    cand = int(rng.integers(0, n))
                    if up[cand] + dn[cand] == 1:
                        site = cand
                        break
                if site < 0:
                    continue
                touched = (site,)

                def apply(site=site):
                    up[site], dn[site] = dn[site], up[site]

                revert = apply

            if len(touched) == 2 and touched[0] != touched[1]:
                sites_aff = touched
                bond_idx = set(bond_touch[touched[0]]) | set(bond_touch[touched[1]])
                triple_idx = set(triple_touch[touched[0]]) | set(triple_touch[touched[1]])
            else:
                sites_aff = touched[:1]
                bond_idx = bond_touch[touched[0]]
                triple_idx = triple_touch[touched[0]]
            before = _local_energy(up, dn, sites_aff, bond_idx, triple_idx, bonds, triples, p, scale)
            apply()
            after = _local_energy(up, dn, sites_aff, bond_idx, triple_idx, bonds, triples, p, scale)
            d_e = after - before
            if d_e <= 0.0 or (temp > 0.0 and rng.random() < exp(-d_e / temp)):
                e_now += d_e
                accepted += 1
                if e_now < best_e:
                    best_e = e_now
                    best_state = (tuple(up), tuple(dn))
            else:
                revert()
        trace.append(e_now)
        temp *= cooling

    occ = Occupation.from_arrays(*best_state)
    return AnnealResult(
        best_energy=energy(occ, lattice, p),
        best_occupation=occ,
        trace=tuple(trace),
        n_accepted=accepted,
    )


# ---------------------------------------------------------------------------
# hole-pairing diagnostics


@dataclass(frozen=True)
class HoleDiagnostics:
    """Hole adjacency summary of one occupation pattern.

    adjacent_pairs counts unordered nearest-neighbor hole pairs,
    diagonal_pairs unordered hole pairs one diagonal step apart, and
    cluster_histogram maps cluster size to count for the connected
    components of the hole set under nearest-neighbor adjacency.
    """

    occupation: Occupation
    hole_count: int
    adjacent_pairs: int
    diagonal_pairs: int
    cluster_histogram: dict
    largest_cluster: int


def pairing_diagnostics(occs, lattice: Lattice) -> tuple:
    """Per-occupation hole pairing report (see HoleDiagnostics)."""
    out = []
    unique_bonds = {tuple(sorted(b)) for b in lattice.bonds}
    for occ in occs:
        if occ.n_sites != lattice.n_sites:
            raise ValueError("occupation length does not match the lattice")
        holes = set(occ.holes())
        adjacent = sum(1 for a, b in unique_bonds if a in holes and b in holes)
        hole_list = sorted(holes)
        diagonal = 0
        for i, a in enumerate(hole_list):
            for b in hole_list[i + 1:]:
                dx, dy = lattice.displacement(a, b)
                if dx * dx + dy * dy == 2:
                    diagonal += 1
        histogram: dict[int, int] = {}
        seen: set[int] = set()
        for start in hole_list:
            if start in seen:
                continue
            stack = [start]
            seen.add(start)
            size = 0
            while stack:
                s = stack.pop()
                size += 1
                for nb in lattice.neighbors[s]:
                    if nb in holes and nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            histogram[size] = histogram.get(size, 0) + 1
        out.append(
            HoleDiagnostics(
                occupation=occ,
                hole_count=len(holes),
                adjacent_pairs=adjacent,
                diagonal_pairs=diagonal,
                cluster_histogram=histogram,
                largest_cluster=max(histogram) if histogram else 0,
            )
        )
    return tuple(out)


def energy_estimates(n_sites: int, h: int, p: QuiverParams) -> tuple[float, float]:
    """Crude lowest-energy estimates for h holes on n_sites sites.

    Returns the two closed-form estimates for the canonical flag settings
    (alpha_q, beta_q) = (1, 0) and (0, 1).  They assume a rigid
    antiferromagnetic background and a quadratic hop count, so they are
    displayed next to enumerated minima rather than asserted against them;
    exact minima are typically lower because the spin background is
    optimized freely.
    """
    if h < 0 or n_sites < 1 or h > n_sites:
        raise ValueError("need 0 <= h <= n_sites and n_sites >= 1")
    pairs = (n_sites - h) * (n_sites - h - 1) / 2.0
    e_10 = -p.t * pairs - 4.0 * p.J * h
    e_01 = -p.t * pairs - 2.0 * p.J * h + p.k * h / 2.0
    return e_10, e_01
