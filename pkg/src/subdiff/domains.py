"""Eigensystems for the unit interval and unit square, and data projection.

The Dirichlet Laplacian eigenpairs are analytic (sine basis); what this
module adds is the boundary bookkeeping the inverse problem depends on:
every eigenfunction is sign-normalized so that its outward normal
derivative at the observation point x0 is nonnegative, and initial/source
data are projected onto the normalized basis by composite Gauss-Legendre
quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .fracops import TimeGrid

__all__ = [
    "Mode",
    "EigenSystem",
    "ProblemData",
    "AssumptionReport",
    "build_interval",
    "build_square",
    "sign_normalize",
    "project",
    "validate_assumptions",
    "SPATIAL_BUILTINS",
    "TEMPORAL_BUILTINS",
]

# values below 1e-12 of the natural scale are quadrature / trig roundoff
_SNAP = 1e-12


@dataclass(frozen=True)
class Mode:
    """One eigenpair plus its normalized boundary data at x0.

    flux_at_x0 is the outward normal derivative of the sign-normalized
    eigenfunction at the observation point; sign records the normalization
    factor applied to the raw sine product.
    """

    index: int
    lam: float
    flux_at_x0: float
    label: Union[int, tuple[int, int]]
    sign: int = 1


@dataclass(frozen=True)
class EigenSystem:
    """Truncated, lambda-ordered eigensystem with observation point."""

    modes: tuple[Mode, ...]
    x0: Union[float, tuple[float, float]]
    domain_kind: str  # "interval" | "square"

    def __post_init__(self) -> None:
        lam = self.lambdas
        if np.any(lam <= 0.0):
            raise ValueError("EigenSystem: eigenvalues must be positive")
        if np.any(np.diff(lam) < 0.0):
            raise ValueError("EigenSystem: eigenvalues must be nondecreasing")

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([m.lam for m in self.modes])

    @property
    def flux(self) -> np.ndarray:
        """Vector of normal-derivative values d_n at x0."""
        return np.array([m.flux_at_x0 for m in self.modes])

    def __len__(self) -> int:
        return len(self.modes)


def sign_normalize(es: EigenSystem) -> EigenSystem:
    """Flip eigenfunction signs so every flux_at_x0 is nonnegative.

    Idempotent: normalizing a normalized system returns equal modes.
    """
    modes = []
    for m in es.modes:
        if m.flux_at_x0 < 0.0:
            modes.append(
                Mode(m.index, m.lam, -m.flux_at_x0, m.label, -m.sign)
            )
        else:
            modes.append(m)
    return EigenSystem(tuple(modes), es.x0, es.domain_kind)


def _snap(value: float, scale: float) -> float:
    return 0.0 if abs(value) < _SNAP * scale else value


def build_interval(M: int, x0: float) -> EigenSystem:
    """Sine eigensystem on (0, 1) observed at an endpoint.

    lambda_n = (n pi)^2; the normalized mode carries
    d_n = sqrt(2) n pi at either endpoint.
    """
    if M < 1:
        raise ValueError(f"build_interval: need M >= 1 modes, got {M}")
    if x0 not in (0.0, 1.0, 0, 1):
        raise ValueError(f"build_interval: x0 must be an endpoint, got {x0}")
    x0 = float(x0)
    modes = []
    for i in range(M):
        n = i + 1
        scale = np.sqrt(2.0) * n * np.pi
        if x0 == 0.0:
            # outward normal at 0 points in -x: d_raw = -phi'(0)
            d_raw = -scale
        else:
            d_raw = scale * (-1.0) ** n
        modes.append(Mode(index=i, lam=(n * np.pi) ** 2, flux_at_x0=d_raw, label=n))
    return sign_normalize(EigenSystem(tuple(modes), x0, "interval"))


def _square_normal_derivative(m: int, n: int, x0: tuple[float, float]) -> float:
    """Outward normal derivative of 2 sin(m pi x) sin(n pi y) at boundary x0."""
    x, y = x0
    on_x = x in (0.0, 1.0)
    on_y = y in (0.0, 1.0)
    if on_x and on_y:
        raise ValueError(f"build_square: corner point {x0} has no unique normal")
    if on_x:
        d = 2.0 * m * np.pi * np.sin(n * np.pi * y)
        d_raw = -d if x == 0.0 else d * (-1.0) ** m
        scale = 2.0 * m * np.pi
    elif on_y:
        d = 2.0 * n * np.pi * np.sin(m * np.pi * x)
        d_raw = -d if y == 0.0 else d * (-1.0) ** n
        scale = 2.0 * n * np.pi
    else:
        raise ValueError(f"build_square: x0={x0} does not lie on the boundary")
    return _snap(d_raw, scale)


def build_square(M: int, x0: Sequence[float]) -> EigenSystem:
    """Product-sine eigensystem on (0,1)^2 observed at a boundary point.

    Modes are sorted by eigenvalue (m^2 + n^2) pi^2 with lexicographic
    (m, n) tie-breaking.  Modes whose trace vanishes at x0 keep
    flux_at_x0 = 0 and still participate in solves.
    """
    if M < 1:
        raise ValueError(f"build_square: need M >= 1 modes, got {M}")
    x0 = (float(x0[0]), float(x0[1]))
    mm = int(np.ceil(np.sqrt(M))) + 2
    pairs = sorted(
        ((m, n) for m in range(1, mm + 1) for n in range(1, mm + 1)),
        key=lambda p: (p[0] ** 2 + p[1] ** 2, p),
    )[:M]
    modes = []
    for i, (m, n) in enumerate(pairs):
        d_raw = _square_normal_derivative(m, n, x0)
        lam = (m * m + n * n) * np.pi**2
        modes.append(Mode(index=i, lam=lam, flux_at_x0=d_raw, label=(m, n)))
    return sign_normalize(EigenSystem(tuple(modes), x0, "square"))


# ---------------------------------------------------------------------------
# quadrature and function descriptors

_GL_PANELS = 64
_GL_ORDER = 5


def _composite_gl(n_panels: int = _GL_PANELS, order: int = _GL_ORDER):
    xg, wg = np.polynomial.legendre.leggauss(order)
    h = 1.0 / n_panels
    offsets = np.arange(n_panels) * h
    x = (offsets[:, None] + (xg[None, :] + 1.0) * (h / 2.0)).ravel()
    w = np.tile(wg * (h / 2.0), n_panels)
    return x, w


SPATIAL_BUILTINS: dict[str, Callable] = {
    "neg_sin_pi_x": lambda x: -np.sin(np.pi * x),
    "sin_pi_x": lambda x: np.sin(np.pi * x),
    "neg_sin_pi_xy_bubble": lambda x, y: -np.sin(
        np.pi * x * y * (1.0 - x) * (1.0 - y)
    ),
    "zero": lambda *args: np.zeros_like(args[0]),
}

TEMPORAL_BUILTINS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "t_plus_1": lambda t: t + 1.0,
    "one": np.ones_like,
}


def _resolve_spatial(spec, kind: str) -> Callable:
    if spec is None:
        return SPATIAL_BUILTINS["zero"]
    if callable(spec):
        return spec
    if isinstance(spec, str):
        try:
            return SPATIAL_BUILTINS[spec]
        except KeyError:
            raise ValueError(f"unknown spatial builtin {spec!r}") from None
    if isinstance(spec, (list, tuple, np.ndarray)):
        table = np.asarray(spec, dtype=float)
        if kind != "interval" or table.ndim != 1 or table.size < 2:
            raise ValueError(
                "tabulated spatial samples are supported as a 1-d table on "
                "the unit interval"
            )
        xs = np.linspace(0.0, 1.0, table.size)
        return lambda x: np.interp(x, xs, table)
    raise TypeError(f"cannot interpret spatial descriptor {spec!r}")


def _resolve_temporal(spec, grid: TimeGrid) -> np.ndarray:
    if callable(spec):
        return np.asarray(spec(grid.nodes), dtype=float)
    if isinstance(spec, str):
        try:
            return np.asarray(TEMPORAL_BUILTINS[spec](grid.nodes), dtype=float)
        except KeyError:
            raise ValueError(f"unknown temporal builtin {spec!r}") from None
    values = np.asarray(spec, dtype=float)
    if not grid.conforms(values):
        raise ValueError("tabulated temporal factor must match the time grid")
    return values


def _clean(v: np.ndarray) -> np.ndarray:
    scale = max(float(np.abs(v).max(initial=0.0)), 1.0)
    out = v.copy()
    out[np.abs(out) < _SNAP * scale] = 0.0
    return out


def _spatial_coefficients(es: EigenSystem, func: Callable) -> np.ndarray:
    """Inner products (func, phi_n) over the domain, sign normalization in."""
    signs = np.array([m.sign for m in es.modes], dtype=float)
    if es.domain_kind == "interval":
        x, w = _composite_gl()
        vals = np.asarray(func(x), dtype=float)
        ns = np.array([m.label for m in es.modes], dtype=float)
        basis = np.sqrt(2.0) * np.sin(np.outer(ns, np.pi * x))
        coef = basis @ (w * vals)
    elif es.domain_kind == "square":
        x, w = _composite_gl()
        X, Y = np.meshgrid(x, x, indexing="ij")
        vals = np.asarray(func(X, Y), dtype=float)
        mmax = max(max(m.label) for m in es.modes)
        s = np.sin(np.outer(np.arange(1, mmax + 1), np.pi * x))
        weighted = vals * np.outer(w, w)
        inner = s @ weighted @ s.T  # inner[m-1, n-1] = (vals, sin sin)
        coef = np.array(
            [2.0 * inner[m.label[0] - 1, m.label[1] - 1] for m in es.modes]
        )
    else:
        raise ValueError(f"unknown domain kind {es.domain_kind!r}")
    return _clean(signs * coef)


@dataclass(frozen=True)
class ProblemData:
    """Projected initial data and source: b_n = (u0, phi_n),
    Fmat[n, k] = (F(., t_k), phi_n)."""

    b: np.ndarray
    Fmat: np.ndarray
    grid: TimeGrid

    def __post_init__(self) -> None:
        if self.Fmat.shape != (self.b.shape[0], self.grid.Nt + 1):
            raise ValueError(
                f"ProblemData: Fmat shape {self.Fmat.shape} does not match "
                f"{self.b.shape[0]} modes on {self.grid.Nt + 1} nodes"
            )


def project(es: EigenSystem, u0_spec, F_spec, grid: TimeGrid) -> ProblemData:
    """Project initial data and a separable source onto the eigensystem.

    u0_spec is a spatial descriptor (builtin name, callable, or 1-d table);
    F_spec is None for a zero source or a (spatial, temporal) pair for
    F(x, t) = w(x) f(t).
    """
    b = _spatial_coefficients(es, _resolve_spatial(u0_spec, es.domain_kind))
    if F_spec is None:
        Fmat = np.zeros((len(es), grid.Nt + 1))
    else:
        try:
            w_spec, f_spec = F_spec
        except (TypeError, ValueError):
            raise TypeError(
                "F_spec must be None or a (spatial, temporal) pair"
            ) from None
        fw = _spatial_coefficients(es, _resolve_spatial(w_spec, es.domain_kind))
        Fmat = np.outer(fw, _resolve_temporal(f_spec, grid))
    return ProblemData(b=b, Fmat=Fmat, grid=grid)


# ---------------------------------------------------------------------------
# assumption validation


@dataclass(frozen=True)
class AssumptionReport:
    """Discrete check of the data assumptions the inverse theory rests on.

    initial_nonneg:  all b_n >= 0
    source_nonneg:   all F_n(t_k) >= 0
    distinguished:   index of a mode with b_N > 0, F_N > 0 on the whole
                     grid and d_N > 0 (None if absent)
    flux_positive:   g > 0 at every node
    separable_form:  F_n(t) = lam_n b_n f(t) for a common f (the
                     -L u0 * f(t) source shape)
    existence_ok:    f >= g / sum(b_n d_n) everywhere (only meaningful
                     when separable_form holds)
    """

    initial_nonneg: bool
    source_nonneg: bool
    distinguished: Union[int, None]
    flux_positive: bool
    separable_form: bool
    existence_ok: Union[bool, None]
    min_b: float
    min_F: float
    min_g: float
    existence_margin: Union[float, None]

    @property
    def direct_ok(self) -> bool:
        """All four data conditions the iteration itself needs."""
        return (
            self.initial_nonneg
            and self.source_nonneg
            and self.distinguished is not None
            and self.flux_positive
        )

    def summary(self) -> str:
        lines = [
            f"initial coefficients nonnegative: {self.initial_nonneg} "
            f"(min b = {self.min_b:.3e})",
            f"source coefficients nonnegative:  {self.source_nonneg} "
            f"(min F = {self.min_F:.3e})",
            f"distinguished mode index:         {self.distinguished}",
            f"flux positive:                    {self.flux_positive} "
            f"(min g = {self.min_g:.3e})",
            f"source has -L u0 * f(t) form:     {self.separable_form}",
        ]
        if self.existence_ok is None:
            lines.append("existence condition:              not applicable")
        else:
            lines.append(
                f"existence condition f >= g/du0:   {self.existence_ok} "
                f"(margin = {self.existence_margin:.3e})"
            )
        return "\n".join(lines)


def validate_assumptions(
    pd: ProblemData, es: EigenSystem, g, tol: float = 1e-10
) -> AssumptionReport:
    """Report which data assumptions hold on the discrete problem."""
    g_values = np.asarray(getattr(g, "g", g), dtype=float)
    b, Fmat = pd.b, pd.Fmat
    d = es.flux
    lam = es.lambdas

    initial_nonneg = bool(np.all(b >= -tol))
    source_nonneg = bool(np.all(Fmat >= -tol))
    flux_positive = bool(np.all(g_values > 0.0))

    distinguished = None
    for i in range(len(es)):
        if b[i] > tol and d[i] > tol and np.all(Fmat[i] > tol * max(1.0, b[i])):
            distinguished = i
            break

    # F = -L u0 * f(t) implies F_n = lam_n b_n f(t) with one common f
    separable_form = False
    f_common = None
    carriers = [i for i in range(len(es)) if b[i] > tol]
    f_scale = float(np.abs(Fmat).max(initial=0.0))
    if carriers and f_scale > 0.0:
        candidates = np.array([Fmat[i] / (lam[i] * b[i]) for i in carriers])
        spread = np.abs(candidates - candidates[0]).max()
        orphan = [
            i
            for i in range(len(es))
            if b[i] <= tol and np.abs(Fmat[i]).max() > tol * f_scale
        ]
        if spread <= 1e-8 * max(1.0, np.abs(candidates[0]).max()) and not orphan:
            separable_form = True
            f_common = candidates[0]

    existence_ok = None
    existence_margin = None
    if separable_form and f_common is not None:
        du0 = float(b @ d)
        if du0 > 0.0:
            margin = float(np.min(f_common - g_values / du0))
            existence_margin = margin
            existence_ok = bool(margin >= -tol)

    return AssumptionReport(
        initial_nonneg=initial_nonneg,
        source_nonneg=source_nonneg,
        distinguished=distinguished,
        flux_positive=flux_positive,
        separable_form=separable_form,
        existence_ok=existence_ok,
        min_b=float(b.min()),
        min_F=float(Fmat.min()),
        min_g=float(g_values.min()),
        existence_margin=existence_margin,
    )
