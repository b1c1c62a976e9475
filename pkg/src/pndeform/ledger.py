"""Dimension bookkeeping for the global Euler-characteristic formula.

A ledger holds one row per finite place carrying a deformation condition;
the balance is

    delta = sum over rows (tangent_dim - h0_dim) - 1,

where the trailing -1 is the fixed contribution of the infinite place
(tangent dimension 0, fixed-space dimension 1, valid for p odd) and the
global H^0 terms vanish because the residual image is absolutely
irreducible.  Rows for places with no condition contribute 0 and may be
omitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DeltaNonZero, NegativeDim


@dataclass(frozen=True)
class LedgerRow:
    place: str
    tangent_dim: int
    h0_dim: int
    tag: str = ""

    def serialize(self) -> dict:
        return {
            "place": self.place,
            "tangent_dim": self.tangent_dim,
            "h0_dim": self.h0_dim,
            "tag": self.tag,
        }


@dataclass
class WilesLedger:
    rows: list = field(default_factory=list)
    includes_infinity_convention: bool = True

    @property
    def delta(self) -> int:
        return wiles_delta(self.rows)

    def add(self, row: LedgerRow) -> "WilesLedger":
        return WilesLedger(self.rows + [row])

    def serialize(self) -> dict:
        return {"rows": [r.serialize() for r in self.rows], "delta": self.delta}

    @staticmethod
    def deserialize(obj: dict) -> "WilesLedger":
        rows = [
            LedgerRow(r["place"], int(r["tangent_dim"]), int(r["h0_dim"]),
                      r.get("tag", ""))
            for r in obj["rows"]
        ]
        return WilesLedger(rows)


def wiles_delta(rows) -> int:
    """Sum of per-place (tangent - h0) minus the infinite-place 1."""
    total = 0
    for row in rows:
        if row.tangent_dim < 0 or row.h0_dim < 0:
            raise NegativeDim(f"row {row.place} has a negative dimension")
        total += row.tangent_dim - row.h0_dim
    return total - 1


def delta_invariance_check(base: WilesLedger, aux_row: LedgerRow) -> bool:
    """Whether appending the auxiliary row leaves delta unchanged."""
    return wiles_delta(base.rows + [aux_row]) == base.delta


def assert_delta_zero(ledger: WilesLedger) -> int:
    d = ledger.delta
    if d != 0:
        raise DeltaNonZero(f"delta = {d}", rows=[r.serialize() for r in ledger.rows])
    return d


def dual_selmer_schedule(initial_dim: int, aux_places=None) -> list:
    """Bookkeeping of the recursive dual-dimension drop.

    Starting from a declared dual-Selmer dimension D >= 0, each appended
    auxiliary row of the dimension-preserving kind lowers the tracked
    dimension by exactly one; the schedule ends at zero after D steps.
    This is dimension bookkeeping only, no cohomology is computed.
    """
    if initial_dim < 0:
        raise NegativeDim("dual Selmer dimension must be nonnegative")
    states = [initial_dim]
    for step in range(initial_dim):
        states.append(initial_dim - step - 1)
    return states


def theorem_a_ledger(scenario, report=None) -> WilesLedger:
    """Assemble the per-place rows of a checked scenario and balance them.

    The place at p contributes (1 + h0, h0); every ramified place away
    from p contributes (h0, h0) through the wild or tame branch of its
    condition; unramified places contribute nothing.  Raises DeltaNonZero
    if the balance is not 0, and propagates DistinguishednessViolated
    from the condition at p.
    """
    from .hyp import _inertia_image_order
    from .localdef import ConditionTag, LocalCondition, tangent_dims

    ring = scenario.ring
    rows = []
    for place in scenario.places:
        if place.is_infinite:
            continue
        elements = scenario.local_elements(place)
        if place.residue == ring.p:
            cond = LocalCondition(ConditionTag.AT_P, k=scenario.weight)
            t, h = tangent_dims(cond, ring, elements)
            rows.append(LedgerRow(place.label, t, h, cond.tag))
        elif place.ramified:
            tag = (ConditionTag.WILD
                   if _inertia_image_order(scenario, place) % ring.p == 0
                   else ConditionTag.TAME)
            cond = LocalCondition(tag, k=scenario.weight)
            t, h = tangent_dims(cond, ring, elements)
            rows.append(LedgerRow(place.label, t, h, cond.tag))
    ledger = WilesLedger(rows)
    assert_delta_zero(ledger)
    return ledger
