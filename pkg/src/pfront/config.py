"""Configuration records: numeric tolerances and simulation limits."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Tolerances:
    """Root-finding and residual tolerances for the wave-curve solvers.

    All curve-difference functions used in this package are strictly monotone
    on their brackets, so bracketed solves are guaranteed; `residual` is the
    absolute tolerance asserted on the defining equation after the solve.
    """

    residual: float = 1e-12
    max_iter: int = 200
    rho_floor: float = 1e-9


DEFAULT_TOL = Tolerances()

MODE_EXACT = "exact"    # interactions resolved by the exact Riemann solver
MODE_PAPER = "paper"    # binary crossing / merge / cancellation bookkeeping


@dataclass
class SimConfig:
    """Engine limits and mode switches for one simulation run."""

    delta_r: float = 1e-3          # max rarefaction-front strength before splitting
    rho_floor: float = 1e-9        # vacuum guard on every constant state
    t_max: float = float("inf")    # stop clock
    tv_max: float = float("inf")   # stop when TV_w1 + TV_w2 exceeds this
    max_events: int = 10_000_000   # event budget
    eps_cancel: float = 0.05       # small-front threshold for pair bookkeeping
    mode: str = MODE_PAPER
    tol: Tolerances = field(default_factory=Tolerances)
    # How a same-family absorption at a shock emits its opposite-family wave:
    #   "auto": rarefaction-curve jump if the absorbed front is small
    #           (|strength| <= eps_cancel) or the emission is expansive,
    #           Rankine-Hugoniot shock otherwise;
    #   "line": always a rarefaction-curve jump;
    #   "rh":   always a Rankine-Hugoniot wave when compressive.
    emission: str = "auto"

    def __post_init__(self):
        if self.delta_r <= 0 or self.rho_floor <= 0 or self.eps_cancel <= 0:
            raise ValueError("delta_r, rho_floor and eps_cancel must be positive")
        if self.max_events <= 0:
            raise ValueError("max_events must be positive")
        if self.mode not in (MODE_EXACT, MODE_PAPER):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.emission not in ("auto", "line", "rh"):
            raise ValueError(f"unknown emission rule {self.emission!r}")
