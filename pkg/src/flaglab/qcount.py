"""Exact closed-form counts (Python integers, no overflow)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UndefinedBranch


def gauss(b: int, a: int, q: int) -> int:
    """Number of a-dimensional subspaces of GF(q)^b; 0 unless 0 <= a <= b."""
    if not 0 <= a <= b:
        return 0
    num = den = 1
    for i in range(1, a + 1):
        num *= q ** (b - a + i) - 1
        den *= q**i - 1
    return num // den


def example_family_size(n: int, q: int) -> int:
    """Size of each extremal construction: [2n, n+1][n+1, 1] + [2n-1, n-1] q^n."""
    return gauss(2 * n, n + 1, q) * gauss(n + 1, 1, q) + gauss(2 * n - 1, n - 1, q) * q**n


def f_bound(n: int, q: int) -> int:
    """Hilton-Milner type ceiling for intersecting (n-1)-spaces of PG(2n-1, q)."""
    if n == 3:
        return q**5 + 2 * q**4 + 3 * q**3 + 2 * q**2 + q + 1
    if n >= 4 and q >= 4:
        return 3 * gauss(n, 1, q) * gauss(2 * n - 2, n - 2, q)
    raise UndefinedBranch(f"f(n, q) is defined only for n = 3 or for n >= 4 with q >= 4; got n={n}, q={q}")


def chromatic_formula(n: int, q: int) -> int:
    return (q ** (n + 2) - 1) // (q - 1) - q


def gamma_degree(n: int, q: int) -> int:
    """Valency of the opposition graph: q^(n(n+2)) flags are opposite a given flag.

    Derived rather than quoted; the test suite checks it against brute force.
    """
    return q ** (n * (n + 2))


def hilton_milner_threshold(n: int, q: int) -> int:
    """[2n, n-1] - q^(n(n-1)) [n, 1]: the non-pencil ceiling for intersecting (n-1)-spaces."""
    return gauss(2 * n, n - 1, q) - q ** (n * (n - 1)) * gauss(n, 1, q)


def category_b_bound(n: int, q: int) -> int | None:
    try:
        fb = f_bound(n, q)
    except UndefinedBranch:
        return None
    return gauss(2 * n, n - 1, q) * gauss(n + 1, 1, q) + fb * q**n


@dataclass
class QFormulaReport:
    name: str
    params: dict = field(default_factory=dict)
    value: int | None = None
    crosscheck: int | None = None
    note: str | None = None

    def __post_init__(self):
        if self.crosscheck is not None and self.value != self.crosscheck:
            raise ValueError(f"{self.name}{self.params}: {self.value} != enumerated {self.crosscheck}")

    def to_json(self) -> dict:
        d = {"name": self.name, "params": self.params,
             "value": str(self.value) if self.value is not None else self.note}
        if self.crosscheck is not None:
            d["crosscheck"] = str(self.crosscheck)
        return d
