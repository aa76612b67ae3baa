"""The decay certificate: gadget regions, Φ, α-inequalities, LP, verification.

Two fixed gadget regions drive the argument: F (12 vertices, anchored at an
edge v_F–w_F) whose 2^11 anchored subregions index the classes of boundary
pairs, and G (17 vertices around an anchored edge v_G–w_G, with w_G itself
outside G).  For every admissible subregion G' of G, the map Φ produces an
index m of a μ-minimizing embeddable M-region and six F-subregion codes
b_0..b_5 (the class of the pair itself and of its five potential children).
A table of rationals α_1..α_2048 ∈ [2, 6] certifies exponential decay if

    μ_m · (α_{b_1} + … + α_{b_5}) ≤ α_{b_0} · (1 − ε)

holds for every admissible G', with α_0 = 0 and ε = 1/1000.  Verification
is pure rational arithmetic; the LP solver only proposes candidates.

All geometry (F, G, the placements, the M-regions) is configuration data in
region files, reconstructed from the published figures and tagged as such.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .lattice import (
    Coord, Region, Symmetry, apply_symmetry, load_region, neighbour_ring,
)
from .mu import MuTable, load_mu_table, load_mu_regions

DATA_DIR = Path(__file__).parent / "data"

_MIRROR = Symmetry(rotation=0, reflected=True)  # x -> -x, fixes the v–w axis


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# F-subregion codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FGadget:
    region: Region
    v_f: Coord
    w_f: Coord
    free: tuple[Coord, ...]  # the 11 non-v_F vertices, in fixed (sorted) order

    @classmethod
    def load(cls, path) -> "FGadget":
        R, v, w = load_region(path)
        if v is None or w is None:
            raise GeometryError("F file needs distinguished_v and distinguished_w")
        if v not in R.vertices or w in R.vertices:
            raise GeometryError("need v_F in F and w_F outside F")
        free = tuple(sorted(R.vertices - {v}))
        return cls(R, v, w, free)


def f_code(gadget: FGadget, S: frozenset[Coord]) -> int:
    """Code of an anchored subregion of F: bit string index + 1 ∈ [1, 2048]."""
    if gadget.v_f not in S:
        raise GeometryError("subregion must contain v_F")
    if not S <= gadget.region.vertices:
        raise GeometryError("subregion must be contained in F")
    bits = 0
    for z in gadget.free:
        bits = (bits << 1) | (1 if z in S else 0)
    return bits + 1


def f_decode(gadget: FGadget, code: int) -> frozenset[Coord]:
    if not 1 <= code <= 1 << len(gadget.free):
        raise GeometryError(f"code {code} out of range")
    bits = code - 1
    S = {gadget.v_f}
    for i, z in enumerate(gadget.free):
        if bits & (1 << (len(gadget.free) - 1 - i)):
            S.add(z)
    return frozenset(S)


def code_bits(gadget: FGadget, code: int) -> str:
    return format(code - 1, f"0{len(gadget.free)}b")


def code_from_bits(bits: str) -> int:
    return int(bits, 2) + 1


# ---------------------------------------------------------------------------
# G and its admissible subregions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GGadget:
    region: Region
    v_g: Coord
    w_g: Coord
    order: tuple[Coord, ...]       # fixed vertex order for the 17-bit counter
    w_neighbours: tuple[Coord, ...]  # neighbours of w_G other than v_G, in G

    @classmethod
    def load(cls, path) -> "GGadget":
        R, v, w = load_region(path)
        if v is None or w is None:
            raise GeometryError("G file needs distinguished_v and distinguished_w")
        if v not in R.vertices or w in R.vertices:
            raise GeometryError("need v_G in G and w_G outside G")
        order = tuple(sorted(R.vertices))
        wn = tuple(sorted(u for u in neighbour_ring(w)
                          if u != v and u in R.vertices))
        return cls(R, v, w, order, wn)


def enumerate_G(gadget: GGadget) -> Iterator[frozenset[Coord]]:
    """All admissible subregions G' ⊆ G: v_G present, some w_G-neighbour absent.

    Runs a plain binary counter over the fixed vertex order and filters,
    so the stream order is deterministic.
    """
    n = len(gadget.order)
    pos = {z: i for i, z in enumerate(gadget.order)}
    v_bit = 1 << (n - 1 - pos[gadget.v_g])
    wn_bits = [(1 << (n - 1 - pos[u])) for u in gadget.w_neighbours]
    full_wn = sum(wn_bits)
    for pattern in range(1 << n):
        if not pattern & v_bit:
            continue
        if pattern & full_wn == full_wn and len(gadget.w_neighbours) >= 5:
            continue
        yield frozenset(z for z in gadget.order
                        if pattern & (1 << (n - 1 - pos[z])))


def count_G(gadget: GGadget) -> int:
    return sum(1 for _ in enumerate_G(gadget))


# ---------------------------------------------------------------------------
# Placements of F inside G
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    """An orientation-preserving isometry of F, given by the image of (v_F, w_F)."""

    k: int
    anchor: Coord        # image of v_F
    image_w: Coord       # image of w_F
    mapping: dict[Coord, Coord]


def _rotation_between(src: Coord, dst: Coord) -> Symmetry:
    for r in range(6):
        if apply_symmetry(src, Symmetry(rotation=r)) == dst:
            return Symmetry(rotation=r)
    raise GeometryError(f"no rotation maps {src} to {dst}")


def build_placements(f: FGadget, spec_lines: Sequence[tuple[int, Coord, Coord]],
                     ) -> tuple[Placement, ...]:
    out = []
    for k, anchor, image_w in spec_lines:
        delta_src = (f.w_f[0] - f.v_f[0], f.w_f[1] - f.v_f[1])
        delta_dst = (image_w[0] - anchor[0], image_w[1] - anchor[1])
        rot = _rotation_between(delta_src, delta_dst)
        mapping = {}
        for z in f.region.vertices:
            rel = (z[0] - f.v_f[0], z[1] - f.v_f[1])
            img = apply_symmetry(rel, rot)
            mapping[z] = (img[0] + anchor[0], img[1] + anchor[1])
        out.append(Placement(k, anchor, image_w, mapping))
    return tuple(sorted(out, key=lambda p: p.k))


def load_placements(path, f: FGadget) -> tuple[Placement, ...]:
    lines = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] != "placement" or len(parts) != 6:
                raise GeometryError(f"bad placement line {raw!r}")
            k, ax, ay, wx, wy = map(int, parts[1:])
            lines.append((k, (ax, ay), (wx, wy)))
    if sorted(l[0] for l in lines) != list(range(6)):
        raise GeometryError("placements file must define k = 0..5")
    return build_placements(f, lines)


# ---------------------------------------------------------------------------
# Φ
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiResult:
    m: int
    b: tuple[int, int, int, int, int, int]


@dataclass
class Certifier:
    """Loaded gadget geometry plus μ-table; computes Φ and the inequalities."""

    f: FGadget
    g: GGadget
    placements: tuple[Placement, ...]
    mu_table: MuTable
    m_images: dict[int, tuple[frozenset[Coord], frozenset[Coord]]]

    @classmethod
    def load(cls, data_dir: Path = DATA_DIR,
             mu_table_path: Optional[Path] = None) -> "Certifier":
        data_dir = Path(data_dir)
        f = FGadget.load(data_dir / "f.region")
        g = GGadget.load(data_dir / "g.region")
        placements = load_placements(data_dir / "placements.txt", f)
        for p in placements:
            image = set(p.mapping.values())
            if not image <= (g.region.vertices | {g.w_g}):
                raise GeometryError(
                    f"placement {p.k} leaves G ∪ {{w_G}}: "
                    f"{sorted(image - g.region.vertices - {g.w_g})}")
        table = load_mu_table(mu_table_path or data_dir / "mu_table.txt")
        regions = load_mu_regions(table, data_dir)
        m_images = {}
        for i, (R, vm, wm) in regions.items():
            t = (g.v_g[0] - vm[0], g.v_g[1] - vm[1])
            if (wm[0] + t[0], wm[1] + t[1]) != g.w_g:
                raise GeometryError(f"M{i}: v/w anchor does not align with G")
            ident = frozenset((z[0] + t[0], z[1] + t[1]) for z in R.vertices)
            mirror = frozenset(
                apply_symmetry(z, _MIRROR, g.v_g) for z in ident)
            m_images[i] = (ident, mirror)
        return cls(f, g, placements, table, m_images)

    def embeddable(self, gp: frozenset[Coord]) -> list[int]:
        out = []
        for i, (ident, mirror) in sorted(self.m_images.items()):
            if ident <= gp or mirror <= gp:
                out.append(i)
        return out

    def phi(self, gp: frozenset[Coord]) -> PhiResult:
        if self.g.v_g not in gp:
            raise GeometryError("G' must contain v_G")
        cand = self.embeddable(gp)
        if not cand:
            raise GeometryError("no M-region embeds in G' (inconsistent data)")
        m = min(cand, key=lambda i: (self.mu_table.value(i), i))
        bs = []
        for p in self.placements:
            if p.anchor not in gp:
                bs.append(0)
                continue
            S = frozenset(z for z, img in p.mapping.items() if img in gp)
            bs.append(f_code(self.f, S))
        return PhiResult(m, tuple(bs))


# ---------------------------------------------------------------------------
# Inequalities, LP, verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Inequality:
    m: int
    b: tuple[int, int, int, int, int, int]
    multiplicity: int


def generate_inequalities(cert: Certifier) -> list[Inequality]:
    """One deduplicated record per Φ-image over all admissible G'."""
    seen: dict[tuple, int] = {}
    for gp in enumerate_G(cert.g):
        r = cert.phi(gp)
        key = (r.m, r.b)
        seen[key] = seen.get(key, 0) + 1
    return [Inequality(m, b, mult)
            for (m, b), mult in sorted(seen.items())]


@dataclass(frozen=True)
class AlphaTable:
    values: dict[int, Fraction]    # code -> α; code 0 maps to 0 implicitly
    nbits: int = 11

    def __getitem__(self, code: int) -> Fraction:
        if code == 0:
            return Fraction(0)
        return self.values[code]


def parse_alpha_table(text: str, nbits: int = 11) -> AlphaTable:
    values: dict[int, Fraction] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        bits, frac = line.split()
        if len(bits) != nbits or set(bits) - {"0", "1"}:
            raise ValueError(f"bad code {bits!r}")
        num, den = frac.split("/") if "/" in frac else (frac, "1")
        values[int(bits, 2) + 1] = Fraction(int(num), int(den))
    return AlphaTable(values, nbits)


def format_alpha_table(table: AlphaTable) -> str:
    lines = []
    for code in sorted(table.values):
        a = table.values[code]
        lines.append(f"{format(code - 1, f'0{table.nbits}b')} "
                     f"{a.numerator}/{a.denominator}")
    return "\n".join(lines) + "\n"


def load_alpha_table(path, nbits: int = 11) -> AlphaTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_alpha_table(fh.read(), nbits)


@dataclass(frozen=True)
class Violation:
    m: int
    b: tuple[int, int, int, int, int, int]
    lhs: Fraction
    rhs: Fraction


ALPHA_LO = Fraction(2)
ALPHA_HI = Fraction(6)


def verify_alphas(alphas: AlphaTable, inequalities: Sequence[Inequality],
                  mu_table: MuTable, eps: Fraction) -> list[Violation]:
    """Exact-rational check of every inequality; empty result means pass.

    Range violations of α itself are reported as pseudo-records with m = 0.
    """
    out: list[Violation] = []
    for code, a in sorted(alphas.values.items()):
        if not ALPHA_LO <= a <= ALPHA_HI:
            out.append(Violation(0, (code, 0, 0, 0, 0, 0), a, ALPHA_HI))
    one_minus = 1 - eps
    for rec in inequalities:
        mu = mu_table.value(rec.m)
        lhs = mu * sum((alphas[b] for b in rec.b[1:]), Fraction(0))
        rhs = one_minus * alphas[rec.b[0]]
        if lhs > rhs:
            out.append(Violation(rec.m, rec.b, lhs, rhs))
    return out


def export_lp(inequalities: Sequence[Inequality], mu_table: MuTable,
              eps: Fraction, nbits: int = 11) -> str:
    """Deterministic plain-text LP export; re-export is byte-identical."""
    lines = [f"# alpha feasibility program, eps = {eps.numerator}/{eps.denominator}",
             f"# variables: one per {nbits}-bit F-subregion code, bounds [2, 6]"]
    for code in range(1, (1 << nbits) + 1):
        lines.append(f"var a{format(code - 1, f'0{nbits}b')} in [2, 6]")
    one_minus = 1 - eps
    for rec in sorted(inequalities, key=lambda r: (r.m, r.b)):
        mu = mu_table.value(rec.m)
        terms = " + ".join(f"a{format(b - 1, f'0{nbits}b')}"
                           for b in rec.b[1:] if b != 0)
        if not terms:
            terms = "0"
        b0 = format(rec.b[0] - 1, f"0{nbits}b")
        lines.append(
            f"constraint: {mu.numerator}/{mu.denominator} * ({terms}) - "
            f"{one_minus.numerator}/{one_minus.denominator} * a{b0} <= 0 "
            f"# multiplicity={rec.multiplicity}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LPOutcome:
    feasible: bool
    alphas: Optional[AlphaTable]
    message: str


def solve_lp(inequalities: Sequence[Inequality], mu_table: MuTable,
             eps: Fraction, nbits: int = 11,
             max_denominator: int = 100_000) -> LPOutcome:
    """Propose an α-table via floating-point LP plus rationalization.

    The LP minimizes Σα subject to the inequalities at a slightly inflated
    ε (retried on a small schedule), so the rationalized exact table still
    satisfies the target ε.  The result is a *candidate*: callers must run
    verify_alphas before trusting it.
    """
    from scipy.optimize import linprog
    import numpy as np

    used = sorted({b for rec in inequalities for b in rec.b if b != 0})
    idx = {c: i for i, c in enumerate(used)}
    nv = len(used)

    for extra in (Fraction(1, 100_000), Fraction(1, 10_000), Fraction(1, 2_000)):
        eff = eps + extra
        if eff >= 1:
            continue
        rows, rhs = [], []
        for rec in inequalities:
            mu = float(mu_table.value(rec.m))
            row = np.zeros(nv)
            for b in rec.b[1:]:
                if b != 0:
                    row[idx[b]] += mu
            row[idx[rec.b[0]]] -= float(1 - eff)
            rows.append(row)
            rhs.append(0.0)
        res = linprog(c=np.ones(nv), A_ub=np.array(rows), b_ub=np.array(rhs),
                      bounds=[(2.0, 6.0)] * nv, method="highs")
        if not res.success:
            continue
        values = {}
        for c in range(1, (1 << nbits) + 1):
            if c in idx:
                a = Fraction(float(res.x[idx[c]])).limit_denominator(max_denominator)
                a = min(max(a, ALPHA_LO), ALPHA_HI)
            else:
                a = ALPHA_LO
            values[c] = a
        cand = AlphaTable(values, nbits)
        if not verify_alphas(cand, inequalities, mu_table, eps):
            return LPOutcome(True, cand, f"feasible (solved at eps={eff})")
    return LPOutcome(False, None,
                     "no candidate found (advisory only, not a proof of infeasibility)")


# ---------------------------------------------------------------------------
# Decay constants and the certificate record
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayConstants:
    eps: Fraction
    beta: Fraction                  # 50 / (ε(1−ε))
    beta_prime_symbolic: str        # −ln(1−ε)
    edge_prefactor: Fraction        # 5/ε
    corollary_prefactor: int        # 5
    coupling_cover_bound: Fraction  # Δ/ε with Δ = 6

    @property
    def beta_prime(self) -> float:
        import math
        return -math.log(1 - self.eps)


def decay_constants(eps: Fraction) -> DecayConstants:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    return DecayConstants(
        eps=eps,
        beta=Fraction(50) / (eps * (1 - eps)),
        beta_prime_symbolic=f"-ln(1 - {eps.numerator}/{eps.denominator})",
        edge_prefactor=Fraction(5) / eps,
        corollary_prefactor=5,
        coupling_cover_bound=Fraction(6) / eps,
    )


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def certificate_text(data_dir: Path, alpha_path: Path, eps: Fraction,
                     violations: Sequence[Violation],
                     n_inequalities: int) -> str:
    data_dir = Path(data_dir)
    region_files = sorted(p.name for p in data_dir.glob("*.region"))
    combined = hashlib.sha256()
    for name in region_files:
        combined.update(name.encode())
        combined.update(bytes.fromhex(_sha256(data_dir / name)))
    lines = [
        "certificate",
        f"regions_sha256 {combined.hexdigest()}",
        f"mu_table_sha256 {_sha256(data_dir / 'mu_table.txt')}",
        f"alpha_table_sha256 {_sha256(alpha_path)}",
        f"eps {eps.numerator}/{eps.denominator}",
        f"inequalities {n_inequalities}",
        f"verdict {'pass' if not violations else 'fail'}",
        f"violations {len(violations)}",
    ]
    for v in violations[:50]:
        lines.append("violation m=%d b=%s lhs=%s rhs=%s"
                     % (v.m, ",".join(map(str, v.b)), v.lhs, v.rhs))
    return "\n".join(lines) + "\n"
