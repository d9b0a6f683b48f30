"""The 15-generator dynamical algebra of 2D quadratic Hamiltonians.

Generator basis (1-based indices, used everywhere in the public API):

    h1  = 1        h2  = x         h3  = y         h4  = p_x      h5  = p_y
    h6  = x^2      h7  = y^2       h8  = x*y       h9  = p_x^2    h10 = p_y^2
    h11 = p_x*p_y  h12 = x*p_x + p_x*x             h13 = y*p_y + p_y*y
    h14 = x*p_y    h15 = y*p_x

Commutators close on this set:  [h_i, h_j] = i*hbar * sum_k c[i][j][k] h_k,
with exact rational structure constants c (entries in {0, +-1, +-2, +-4,
+-1/2}).  Everything here is exact ``Fraction`` arithmetic; floats only
appear downstream (adjoint matrices).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

N_GENERATORS = 15

GENERATOR_LABELS = (
    "1", "x", "y", "p_x", "p_y",
    "x^2", "y^2", "x*y", "p_x^2", "p_y^2",
    "p_x*p_y", "x*p_x+p_x*x", "y*p_y+p_y*y", "x*p_y", "y*p_x",
)

_F = Fraction

# Nonzero commutators (1/i*hbar)[h_i, h_j] for i < j; the full tensor is the
# antisymmetric completion.  Entry (8, 9) is 2*h15: [x*y, p_x^2] = 2i*hbar*y*p_x
# (forced by the Jacobi identity and by the h9 row of the U8 conjugation rule).
_UPPER: dict[tuple[int, int], dict[int, Fraction]] = {
    (2, 4): {1: _F(1)},
    (2, 9): {4: _F(2)},
    (2, 11): {5: _F(1)},
    (2, 12): {2: _F(2)},
    (2, 15): {3: _F(1)},
    (3, 5): {1: _F(1)},
    (3, 10): {5: _F(2)},
    (3, 11): {4: _F(1)},
    (3, 13): {3: _F(2)},
    (3, 14): {2: _F(1)},
    (4, 6): {2: _F(-2)},
    (4, 8): {3: _F(-1)},
    (4, 12): {4: _F(-2)},
    (4, 14): {5: _F(-1)},
    (5, 7): {3: _F(-2)},
    (5, 8): {2: _F(-1)},
    (5, 13): {5: _F(-2)},
    (5, 15): {4: _F(-1)},
    (6, 9): {12: _F(2)},
    (6, 11): {14: _F(2)},
    (6, 12): {6: _F(4)},
    (6, 15): {8: _F(2)},
    (7, 10): {13: _F(2)},
    (7, 11): {15: _F(2)},
    (7, 13): {7: _F(4)},
    (7, 14): {8: _F(2)},
    (8, 9): {15: _F(2)},
    (8, 10): {14: _F(2)},
    (8, 11): {12: _F(1, 2), 13: _F(1, 2)},
    (8, 12): {8: _F(2)},
    (8, 13): {8: _F(2)},
    (8, 14): {6: _F(1)},
    (8, 15): {7: _F(1)},
    (9, 12): {9: _F(-4)},
    (9, 14): {11: _F(-2)},
    (10, 13): {10: _F(-4)},
    (10, 15): {11: _F(-2)},
    (11, 12): {11: _F(-2)},
    (11, 13): {11: _F(-2)},
    (11, 14): {10: _F(-1)},
    (11, 15): {9: _F(-1)},
    (12, 14): {14: _F(-2)},
    (12, 15): {15: _F(2)},
    (13, 14): {14: _F(2)},
    (13, 15): {15: _F(-2)},
    (14, 15): {12: _F(-1, 2), 13: _F(1, 2)},
}


def _check_index(i: int) -> int:
    if not isinstance(i, (int,)) or isinstance(i, bool) or not 1 <= i <= N_GENERATORS:
        raise ValueError(f"generator index must be an integer in 1..15, got {i!r}")
    return i


@dataclass(frozen=True)
class Violation:
    """Location of the first identity failure found by :meth:`validate`."""

    kind: str               # "antisymmetry" | "jacobi" | "central"
    indices: tuple          # (i, j, k) for antisymmetry/central, (i, j, k, l) for jacobi
    detail: str


@dataclass(frozen=True)
class AlgebraReport:
    ok: bool
    antisymmetry_ok: bool
    central_ok: bool
    jacobi_ok: bool
    violation: Violation | None = None

    def __str__(self) -> str:
        if self.ok:
            return "algebra ok: antisymmetry, centrality and Jacobi hold exactly"
        return f"algebra INVALID: {self.violation.kind} at {self.violation.indices}: {self.violation.detail}"


class StructureConstants:
    """Exact rational structure-constant tensor c[i][j][k] (1-based indices)."""

    def __init__(self, entries: Mapping[tuple[int, int], Mapping[int, Fraction]]):
        # store both orientations so lookups are uniform
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in entries.items():
            table[(i, j)] = {k: Fraction(v) for k, v in row.items() if v != 0}
        self._table = {key: row for key, row in table.items() if row}

    @classmethod
    def standard(cls) -> "StructureConstants":
        """Tensor of the 15-generator algebra, antisymmetrically completed."""
        entries: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in _UPPER.items():
            entries[(i, j)] = dict(row)
            entries[(j, i)] = {k: -v for k, v in row.items()}
        return cls(entries)

    def commutator(self, i: int, j: int) -> dict[int, Fraction]:
        """Coefficients of (1/i*hbar)[h_i, h_j] in the generator basis (sparse)."""
        _check_index(i)
        _check_index(j)
        return dict(self._table.get((i, j), {}))

    def c(self, i: int, j: int, k: int) -> Fraction:
        _check_index(k)
        return self.commutator(i, j).get(k, Fraction(0))

    def with_entry(self, i: int, j: int, k: int, value) -> "StructureConstants":
        """Copy with c[i][j][k] replaced (no antisymmetric mirroring).

        Intended for deliberate-corruption tests of :meth:`validate`.
        """
        _check_index(i), _check_index(j), _check_index(k)
        entries = {key: dict(row) for key, row in self._table.items()}
        row = entries.setdefault((i, j), {})
        row[k] = Fraction(value)
        return StructureConstants(entries)

    # -- identity checks ----------------------------------------------------

    def validate(self) -> AlgebraReport:
        """Check antisymmetry, centrality of h1 and the Jacobi identity.

        All checks are exact (rational arithmetic, zero tolerance).  The
        Jacobi identity

            sum_m c[i][j][m] c[m][k][l] + c[j][k][m] c[m][i][l]
                                        + c[k][i][m] c[m][j][l]  = 0

        is verified for every (i, j, k, l); the first violation in
        lexicographic (i, j, k) order is reported.
        """
        idx = range(1, N_GENERATORS + 1)
        # antisymmetry (includes i == j: c[i][i] must vanish)
        for i in idx:
            for j in idx:
                a = self._table.get((i, j), {})
                b = self._table.get((j, i), {})
                for k in set(a) | set(b):
                    if a.get(k, Fraction(0)) != -b.get(k, Fraction(0)):
                        v = Violation("antisymmetry", (i, j, k),
                                      f"c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]")
                        return AlgebraReport(False, False, True, True, v)
        # h1 central: row i=1 and column j=1 identically zero
        for j in idx:
            if self._table.get((1, j)) or self._table.get((j, 1)):
                v = Violation("central", (1, j, 0), "h1 row/column not zero")
                return AlgebraReport(False, True, False, True, v)
        # Jacobi, exact
        for i in idx:
            for j in idx:
                cij = self._table.get((i, j), {})
                for k in idx:
                    cjk = self._table.get((j, k), {})
                    cki = self._table.get((k, i), {})
                    total: dict[int, Fraction] = {}
                    for m, v in cij.items():
                        for l, w in self._table.get((m, k), {}).items():
                            total[l] = total.get(l, Fraction(0)) + v * w
                    for m, v in cjk.items():
                        for l, w in self._table.get((m, i), {}).items():
                            total[l] = total.get(l, Fraction(0)) + v * w
                    for m, v in cki.items():
                        for l, w in self._table.get((m, j), {}).items():
                            total[l] = total.get(l, Fraction(0)) + v * w
                    for l in sorted(total):
                        if total[l] != 0:
                            v = Violation("jacobi", (i, j, k, l),
                                          f"Jacobi sum = {total[l]}")
                            return AlgebraReport(False, True, True, False, v)
        return AlgebraReport(True, True, True, True, None)

    def subalgebra_closed(self, ids: Iterable[int]) -> bool:
        """True iff all pairwise commutators of ``ids`` lie in span(ids)."""
        members = {_check_index(i) for i in ids}
        if not members:
            raise ValueError("subalgebra_closed needs a non-empty subset")
        for i in members:
            for j in members:
                if any(k not in members for k in self._table.get((i, j), {})):
                    return False
        return True

    # -- export --------------------------------------------------------------

    def nonzero_entries(self):
        """Yield (i, j, k, Fraction) over all nonzero tensor entries."""
        for (i, j) in sorted(self._table):
            row = self._table[(i, j)]
            for k in sorted(row):
                yield i, j, k, row[k]

    def to_json(self) -> str:
        """JSON document {"c": [[i, j, k, num, den], ...]} of nonzero entries."""
        rows = [[i, j, k, v.numerator, v.denominator]
                for i, j, k, v in self.nonzero_entries()]
        return json.dumps({"c": rows})


_STANDARD = StructureConstants.standard()


def standard_algebra() -> StructureConstants:
    return _STANDARD


def commutator(i: int, j: int) -> dict[int, Fraction]:
    """(1/i*hbar)[h_i, h_j] in the generator basis, as a sparse dict."""
    return _STANDARD.commutator(i, j)


def validate_algebra(tensor: StructureConstants | None = None) -> AlgebraReport:
    return (_STANDARD if tensor is None else tensor).validate()


def subalgebra_closed(ids: Iterable[int]) -> bool:
    return _STANDARD.subalgebra_closed(ids)


def export_tensor_json() -> str:
    return _STANDARD.to_json()
