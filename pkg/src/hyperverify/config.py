"""Central tolerance record. Every numerical knob lives here."""
from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class Tolerances:
    identity_rel: float = 1e-9        # default residual tolerance for identities
    series_rel: float = 2.0 ** -56    # stop series when terms drop below this * |sum|
    max_terms: int = 10000
    small_terms: int = 3              # consecutive small terms before stopping
    series_radius: float = 0.9        # direct series for |z| <= this (p = q+1)
    annulus_outer: float = 1.1        # connection formula for |z| >= this
    levin_order: int = 20
    levin_accept: float = 1e-13       # accept Levin estimate below this relative error
    degeneracy: float = 1e-6          # |d - round(d)| below this counts as integer-separated
    split_threshold: float = 1e-4     # pfq connection sums perturb below this distance
    unit_circle: float = 1e-8
    tau_switch: float = 0.02          # near-one expansion of G^{p,0}_{p,p} for x >= this
    laplace_switch: float = 2.0       # large-t path of G^{p+1,0}_{p,p+1} beyond this
    quad_rel: float = 1e-11
    quad_abs: float = 1e-15
    max_panels: int = 2000
    cm_slack: float = 1e-7
    am_slack: float = 1e-14
    hankel_slack: float = 1e-10
    inequality_slack: float = 1e-9

    def as_dict(self):
        return asdict(self)

    def with_(self, **kw):
        return replace(self, **kw)


DEFAULT = Tolerances()
