"""Linear form systems over F_p and their complexity invariants.

A system is an ordered list of m distinct nonzero linear forms in d variables.
The invariants computed here: the minimum-partition (Cauchy-Schwarz style)
complexity, normal-form witnesses, independence of the (k+1)-st powers of the
forms, and the relation space of linear dependencies among the forms.

Partition complexity is computed by exact branch-and-bound search over class
assignments; this is exponential in m, so systems are capped at m <= 12 forms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Optional, Sequence

import numpy as np

from .algebra import check_modulus, in_span, nullspace, rank, Subspace

MAX_FORMS = 12

INFINITE = math.inf


class TrueComplexityUndecided(RuntimeError):
    """No power independence found at any testable order k <= m."""


@dataclass(frozen=True)
class LinearFormSystem:
    """System of m distinct nonzero linear forms in d variables over F_p.

    Coefficient rows are given as plain integers and must be smaller than p
    in magnitude: reducing e.g. a coefficient 3 mod 3 would silently change
    the configuration, so too-small moduli are rejected at construction.
    """

    p: int
    d: int
    coeffs: np.ndarray  # (m, d) reduced mod p
    name: str = ""

    def __post_init__(self):
        check_modulus(self.p)
        raw = np.asarray(self.coeffs, dtype=np.int64)
        if raw.ndim != 2 or raw.shape[1] != self.d:
            raise ValueError("coefficient array must be (m, d)")
        if raw.shape[0] < 1:
            raise ValueError("a system needs at least one form")
        if raw.shape[0] > MAX_FORMS:
            raise ValueError(f"at most {MAX_FORMS} forms supported")
        if np.abs(raw).max(initial=0) >= self.p:
            raise ValueError(
                f"modulus {self.p} too small for coefficient magnitude "
                f"{np.abs(raw).max()}; pick a larger prime")
        C = raw % self.p
        if not C.any(axis=1).all():
            raise ValueError("forms must not be identically zero")
        seen = set()
        for row in C:
            key = tuple(int(x) for x in row)
            if key in seen:
                raise ValueError("forms must be pairwise distinct")
            seen.add(key)
        object.__setattr__(self, "coeffs", C)

    @property
    def m(self) -> int:
        return self.coeffs.shape[0]

    def form(self, i: int) -> np.ndarray:
        return self.coeffs[i]

    def to_dict(self) -> dict:
        return {"p": self.p, "d": self.d,
                "forms": [[int(c) for c in row] for row in self.coeffs],
                "name": self.name}


def support(form: Sequence[int] | np.ndarray) -> frozenset[int]:
    """Indices (0-based) of the variables the form actually uses."""
    row = np.asarray(form)
    return frozenset(int(u) for u in np.nonzero(row)[0])


def _min_partition_classes(sys: LinearFormSystem, i: int) -> float:
    """Minimum number of classes partitioning the other forms so that no
    class's span contains form i; INFINITE if impossible (a parallel form)."""
    p = sys.p
    target = sys.coeffs[i]
    others = [sys.coeffs[j] for j in range(sys.m) if j != i]
    if not others:
        return 0
    for f in others:
        if in_span(target, [f], p):
            return INFINITE

    best = len(others) + 1

    def extend(t: int, classes: list[list[np.ndarray]]) -> None:
        nonlocal best
        if len(classes) >= best:
            return
        if t == len(others):
            best = len(classes)
            return
        f = others[t]
        for cls in classes:
            if not in_span(target, cls + [f], p):
                cls.append(f)
                extend(t + 1, classes)
                cls.pop()
        classes.append([f])
        extend(t + 1, classes)
        classes.pop()

    extend(0, [])
    return best


def is_s_complex_at(sys: LinearFormSystem, i: int, s: int) -> bool:
    """Can the other forms be split into <= s+1 classes, none of whose spans
    contains form i?  (Empty classes are harmless, so fewer is also fine.)"""
    if not 0 <= i < sys.m:
        raise IndexError("form index out of range")
    if s < 0:
        raise ValueError("s must be >= 0")
    return _min_partition_classes(sys, i) <= s + 1


def cs_complexity(sys: LinearFormSystem) -> float:
    """Least s making the system s-complex at every index; INFINITE when two
    forms are scalar multiples of each other (no partition ever avoids both)."""
    worst = 0
    for i in range(sys.m):
        k = _min_partition_classes(sys, i)
        if k is INFINITE or k == INFINITE:
            return INFINITE
        worst = max(worst, int(k) - 1)
    return max(worst, 0)


@dataclass(frozen=True)
class NormalFormWitness:
    """Per-form fingerprint sets tau_i certifying the normal form."""

    tau: tuple[frozenset[int], ...]


def normal_form_check(sys: LinearFormSystem, s: int) -> Optional[NormalFormWitness]:
    """Witness that each support carries a set of <= s+1 variables contained
    in no other form's support, or None when some form has no such set."""
    if s < 0:
        raise ValueError("s must be >= 0")
    supports = [support(sys.coeffs[i]) for i in range(sys.m)]
    taus: list[frozenset[int]] = []
    for i in range(sys.m):
        sigma = sorted(supports[i])
        found = None
        for size in range(min(s + 1, len(sigma)), 0, -1):
            for cand in combinations(sigma, size):
                tau = frozenset(cand)
                if all(j == i or not tau <= supports[j] for j in range(sys.m)):
                    found = tau
                    break
            if found is not None:
                break
        if found is None:
            return None
        taus.append(found)
    return NormalFormWitness(tau=tuple(taus))


def _multinomial(counts: Sequence[int]) -> int:
    total = sum(counts)
    out = factorial(total)
    for c in counts:
        out //= factorial(c)
    return out


def power_tensor(form: np.ndarray, k: int, p: int) -> np.ndarray:
    """Coefficient vector of the (k+1)-st power of the form, one entry per
    degree-(k+1) monomial, multinomial factors included, reduced mod p."""
    d = form.shape[0]
    entries = []
    for mono in combinations_with_replacement(range(d), k + 1):
        counts = [0] * d
        for u in mono:
            counts[u] += 1
        coeff = _multinomial([c for c in counts if c]) % p
        for u in mono:
            coeff = coeff * int(form[u]) % p
        entries.append(coeff)
    return np.array(entries, dtype=np.int64)


def power_independence(sys: LinearFormSystem, k: int) -> bool:
    """Are the (k+1)-st powers of the forms linearly independent over F_p?

    k = 1 is square independence.  Requires p > k+1 so the multinomial
    coefficients stay invertible mod p.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if sys.p <= k + 1:
        raise ValueError(f"p={sys.p} too small for power k+1={k + 1}")
    T = np.vstack([power_tensor(sys.coeffs[i], k, sys.p) for i in range(sys.m)])
    return rank(T, sys.p) == sys.m


def conjectured_true_complexity(sys: LinearFormSystem) -> int:
    """Smallest k >= 1 with independent (k+1)-st powers.

    This is the conjectured value of the uniformity degree governing the
    system; callers should label it as conjectured in any report.
    """
    for k in range(1, sys.m + 1):
        if sys.p <= k + 1:
            break
        if power_independence(sys, k):
            return k
    raise TrueComplexityUndecided(
        f"powers dependent at all testable orders k <= {sys.m} (p={sys.p})")


def maximal_square_independent_subsystem(sys: LinearFormSystem) -> list[int]:
    """Greedy lowest-index-first maximal subset with independent squares."""
    kept: list[int] = []
    tensors: list[np.ndarray] = []
    for i in range(sys.m):
        t = power_tensor(sys.coeffs[i], 1, sys.p)
        if not in_span(t, tensors, sys.p):
            kept.append(i)
            tensors.append(t)
    return kept


def relation_space(sys: LinearFormSystem) -> Subspace:
    """Subspace of coefficient vectors mu with sum_i mu_i L_i = 0."""
    basis = nullspace(sys.coeffs.T, sys.p)
    return Subspace(p=sys.p, ambient=sys.m, basis=basis)


def span_dimension(sys: LinearFormSystem) -> int:
    """Dimension of the span of the forms (m minus the relation count)."""
    return sys.m - relation_space(sys).dim


# ---------------------------------------------------------------------------
# Built-in example systems and the system file format.

def _ap_rows(k: int) -> list[list[int]]:
    return [[1, i] for i in range(k)]


_BUILTIN_ROWS: dict[str, tuple[int, list[list[int]]]] = {
    "ap3": (2, _ap_rows(3)),
    "ap4": (2, _ap_rows(4)),
    "ap5": (2, _ap_rows(5)),
    "diff3": (3, [[-1, 1, 0], [-1, 0, 1], [0, -1, 1]]),
    "gw6a": (3, [[1, 0, 0], [0, 1, 0], [0, 0, 1],
                 [1, 1, 1], [1, 2, -1], [1, -1, 2]]),
    "gw6b": (3, [[1, 0, 0], [1, 1, 0], [1, 0, 1],
                 [1, 1, 1], [1, 1, -1], [1, -1, 1]]),
    "cube7": (4, [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1],
                  [1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1]]),
    "nf4": (4, [[-3, -2, -1, 0], [-2, -1, 0, 1], [-1, 0, 1, 2], [0, 1, 2, 3]]),
}

BUILTIN_SYSTEM_NAMES = tuple(_BUILTIN_ROWS)


def builtin_system(name: str, p: int) -> LinearFormSystem:
    if name not in _BUILTIN_ROWS:
        raise KeyError(f"unknown system {name!r}; known: {', '.join(_BUILTIN_ROWS)}")
    d, rows = _BUILTIN_ROWS[name]
    return LinearFormSystem(p=p, d=d, coeffs=np.array(rows), name=name)


def load_system(path: str, p: int | None = None) -> LinearFormSystem:
    """Load a system from a JSON document {p, d, forms, name?}."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        return LinearFormSystem(
            p=int(p if p is not None else doc["p"]),
            d=int(doc["d"]),
            coeffs=np.array(doc["forms"], dtype=np.int64),
            name=str(doc.get("name", "")))
    except KeyError as exc:
        raise ValueError(f"system file {path} missing field {exc}") from exc


def save_system(sys: LinearFormSystem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(sys.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def resolve_system(ref: str, p: int) -> LinearFormSystem:
    """Accept a built-in name or a path to a system file."""
    if ref in _BUILTIN_ROWS:
        return builtin_system(ref, p)
    return load_system(ref, p=p)

