"""Degree-distribution pairs and the ``key = value`` ensemble config format."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Mapping

__all__ = [
    "EnsembleSpec",
    "ConfigError",
    "UnsupportedConfiguration",
    "GENERAL_LINEAR",
    "parse_polynomial",
    "format_polynomial",
    "parse_labels",
    "parse_config",
    "load_config",
    "design_rate",
    "lambda_prime_zero",
    "rho_prime_one",
    "node_perspective",
    "edge_perspective",
]

GENERAL_LINEAR = "GL"
_SUM_TOL = 1e-12


class ConfigError(ValueError):
    """Malformed or invalid ensemble description."""


class UnsupportedConfiguration(ValueError):
    """Well-formed request outside what the analysis supports."""


def _normalize_coeffs(coeffs: Mapping[int, float], name: str) -> dict[int, float]:
    out = {}
    for d, w in coeffs.items():
        d = int(d)
        w = float(w)
        if d < 2:
            raise ConfigError(f"{name}: degree {d} < 2 not allowed")
        if w < 0:
            raise ConfigError(f"{name}: negative weight {w} for degree {d}")
        if w > 0:
            out[d] = out.get(d, 0.0) + w
    if not out:
        raise ConfigError(f"{name}: no positive coefficients")
    total = sum(out.values())
    if abs(total - 1.0) > _SUM_TOL:
        raise ConfigError(f"{name}: coefficients sum to {total!r}, not 1")
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class EnsembleSpec:
    """Edge-perspective degree distributions plus the symbol size 2^m.

    ``lam[d]`` is the fraction of edges attached to variable nodes of degree
    ``d``, i.e. the coefficient of ``y^(d-1)`` in lambda(y); same for ``rho``.
    ``labels`` is ``"GL"`` or the bitmask of the field polynomial.
    """

    lam: Mapping[int, float]
    rho: Mapping[int, float]
    m: int
    labels: str | int = GENERAL_LINEAR

    # cached derived values
    _rate: float = field(init=False, repr=False, compare=False)

    def __hash__(self):
        return hash((tuple(self.lam.items()), tuple(self.rho.items()), self.m, self.labels))

    def __post_init__(self):
        object.__setattr__(self, "lam", _normalize_coeffs(self.lam, "lambda"))
        object.__setattr__(self, "rho", _normalize_coeffs(self.rho, "rho"))
        if int(self.m) != self.m or self.m < 1:
            raise ConfigError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if self.labels != GENERAL_LINEAR:
            from .gf2 import is_irreducible

            poly = int(self.labels)
            if poly.bit_length() - 1 != self.m:
                raise ConfigError(
                    f"labels: polynomial {poly:#x} has degree {poly.bit_length() - 1}, m = {self.m}"
                )
            if not is_irreducible(poly):
                raise ConfigError(f"labels: polynomial {poly:#x} is reducible")
            object.__setattr__(self, "labels", poly)
        int_l = sum(w / d for d, w in self.lam.items())
        int_r = sum(w / d for d, w in self.rho.items())
        object.__setattr__(self, "_rate", 1.0 - int_r / int_l)

    @property
    def is_field(self) -> bool:
        return self.labels != GENERAL_LINEAR

    def with_m(self, m: int, labels=None) -> "EnsembleSpec":
        return EnsembleSpec(self.lam, self.rho, m, self.labels if labels is None else labels)

    def describe(self) -> str:
        lab = "GL" if not self.is_field else f"GF:{self.labels:#x}"
        return (
            f"lambda = {format_polynomial(self.lam)}; rho = {format_polynomial(self.rho)}; "
            f"m = {self.m}; labels = {lab}"
        )


def design_rate(e: EnsembleSpec) -> float:
    return e._rate


def lambda_prime_zero(e: EnsembleSpec) -> float:
    return e.lam.get(2, 0.0)


def rho_prime_one(e: EnsembleSpec) -> float:
    return sum(w * (d - 1) for d, w in e.rho.items())


def node_perspective(coeffs: Mapping[int, float]) -> dict[int, float]:
    """Edge-perspective weights -> fraction of nodes of each degree."""
    z = sum(w / d for d, w in coeffs.items())
    return {d: (w / d) / z for d, w in coeffs.items()}


def edge_perspective(node: Mapping[int, float]) -> dict[int, float]:
    z = sum(w * d for d, w in node.items())
    return {d: w * d / z for d, w in node.items()}


_TERM = re.compile(
    r"""^\s*
    (?P<coef>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)?\s*\*?\s*
    (?:(?P<var>[yx])(?:\s*\^\s*(?P<exp>[0-9]+))?)?
    \s*$""",
    re.VERBOSE,
)


def parse_polynomial(text: str, name: str = "polynomial") -> dict[int, float]:
    """Parse ``c1 y^a + c2 y^b`` into ``{a+1: c1, b+1: c2}``.

    Coefficients are read as exact decimals. A bare ``y`` is ``y^1``; a missing
    coefficient is 1.
    """
    if not text or not text.strip():
        raise ConfigError(f"{name}: empty polynomial")
    out: dict[int, Decimal] = {}
    for raw in text.split("+"):
        mt = _TERM.match(raw)
        if not mt or (mt.group("coef") is None and mt.group("var") is None):
            raise ConfigError(f"{name}: cannot parse term {raw.strip()!r}")
        try:
            coef = Decimal(mt.group("coef")) if mt.group("coef") else Decimal(1)
        except InvalidOperation:
            raise ConfigError(f"{name}: bad coefficient in {raw.strip()!r}") from None
        if mt.group("var") is None:
            exp = 0
        else:
            exp = int(mt.group("exp")) if mt.group("exp") else 1
        out[exp + 1] = out.get(exp + 1, Decimal(0)) + coef
    if sum(out.values()) != 1:
        raise ConfigError(f"{name}: coefficients sum to {sum(out.values())}, not 1")
    return {d: float(c) for d, c in sorted(out.items())}


def format_polynomial(coeffs: Mapping[int, float]) -> str:
    terms = []
    for d, w in sorted(coeffs.items()):
        c = "" if w == 1 else f"{w:.12g} "
        terms.append(f"{c}y^{d - 1}")
    return " + ".join(terms)


def parse_labels(text: str) -> str | int:
    t = text.strip()
    if t.upper() == "GL":
        return GENERAL_LINEAR
    if t.upper().startswith("GF:"):
        try:
            return int(t[3:], 0)
        except ValueError:
            raise ConfigError(f"labels: bad polynomial mask {t[3:]!r}") from None
    raise ConfigError(f"labels: expected GL or GF:<mask>, got {t!r}")


def parse_config(text: str) -> EnsembleSpec:
    """Parse the ``key = value`` ensemble format (``#`` starts a comment)."""
    fields: dict[str, tuple[int, str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in ("lambda", "rho", "m", "labels"):
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        fields[key] = (lineno, value)
    for key in ("lambda", "rho", "m"):
        if key not in fields:
            raise ConfigError(f"missing required key {key!r}")

    def at(key, fn):
        lineno, value = fields[key]
        try:
            return fn(value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None

    def parse_m(v):
        try:
            return int(v)
        except ValueError:
            raise ConfigError(f"m: not an integer: {v!r}") from None

    lam = at("lambda", lambda v: parse_polynomial(v, "lambda"))
    rho = at("rho", lambda v: parse_polynomial(v, "rho"))
    m = at("m", parse_m)
    labels = at("labels", parse_labels) if "labels" in fields else GENERAL_LINEAR
    return EnsembleSpec(lam, rho, m, labels)


def load_config(path: str | Path) -> EnsembleSpec:
    return parse_config(Path(path).read_text())
