"""Deliberately broken geometries, used to show that the verifier catches faults."""

from __future__ import annotations

from .cosets import CosetGeometry, DomainClass, RelProjection
from .verifier import power_witness
from .words import NormalForm

FAULTS = ("gate", "rho")


class DoubledGate(CosetGeometry):
    """Gate that returns ``g p p`` instead of ``g p`` for the prefix ``p``.

    Still a point of the coset, but no longer Lipschitz.
    """

    def gate(self, g: NormalForm, lam: int, x: NormalForm) -> NormalForm:
        E = self.engine
        p = E.prefix_in(E.between(g, x), lam)
        return E.mul(g, p, p)


class DisplacedRho(CosetGeometry):
    """Relative projections anchored at a far translate of the true anchor."""

    shift_power = 12

    def _far(self, target: DomainClass) -> NormalForm:
        E = self.engine
        w = power_witness(E, target.lam)
        return E.mul(target.rep, *([w] * self.shift_power))

    def rel_projection(self, source: DomainClass, target: DomainClass, sample_radius: int = 1) -> RelProjection:
        true = super().rel_projection(source, target, sample_radius)
        far = self.project(target, self._far(target))
        return RelProjection(source, target, far, frozenset([far]), true.claimed_diam)

    def rho_point_near(self, rho: RelProjection, x: NormalForm) -> NormalForm:
        return rho.anchor


def faulty_geometry(kind: str, engine, cap: int = 2) -> CosetGeometry:
    if kind == "gate":
        return DoubledGate(engine, cap=cap)
    if kind == "rho":
        return DisplacedRho(engine, cap=cap)
    raise ValueError(f"unknown fault {kind!r}; choose from {', '.join(FAULTS)}")
