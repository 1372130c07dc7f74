"""Flat key-value run configuration.

The config format is plain text, one dotted key per line:

    grid.n = 3
    grid.dims = 32
    params.nu = 0.05
    ...

'#' starts a comment.  Unknown keys and malformed lines are rejected with a
field-level message; Sobolev admissibility is enforced at load time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .littlewood_paley import SobolevParams
from .solver import MODES, PhysicalParams, SolverConfig, State, make_initial
from .spectral import Grid

_DEFAULTS = {
    "grid.n": 3,
    "grid.dims": 32,
    "params.nu": 0.05,
    "params.mu": 0.05,
    "params.eta": 0.1,
    "sobolev.s": 1.0,
    "sobolev.eps": 0.25,
    "solver.dt": 1e-3,
    "solver.tmax": 0.05,
    "solver.scheme": "ifrk4",
    "solver.mode": "full",
    "solver.snapshot_every": 10,
    "init.kind": "random_band",
    "init.seed": 7,
    "init.target_u": 1.0,
    "init.target_b": 1.0,
    "init.band": 0.0,  # 0 means "use the grid's resolved band"
    "calibration.C": 1.0,
    "calibration.gamma_low": 1.0,
    "calibration.gamma_high": 1.0,
    "calibration.C_nu_mu": 0.0,  # 0 means "report the minimal passing value"
    "sweep.size": 20,
    "sweep.seed": 1234,
}

_INT_KEYS = {"grid.n", "grid.dims", "solver.snapshot_every", "init.seed", "sweep.size", "sweep.seed"}
_STR_KEYS = {"solver.scheme", "solver.mode", "init.kind"}


@dataclass
class RunConfig:
    values: dict = field(default_factory=lambda: dict(_DEFAULTS))

    def __getitem__(self, key):
        return self.values[key]

    def grid(self) -> Grid:
        return Grid(self.values["grid.n"], self.values["grid.dims"])

    def physical_params(self) -> PhysicalParams:
        v = self.values
        return PhysicalParams(v["params.nu"], v["params.mu"], v["params.eta"])

    def sobolev(self) -> SobolevParams:
        sob = SobolevParams.from_s_eps(self.values["sobolev.s"], self.values["sobolev.eps"])
        sob.validate(self.values["grid.n"])
        return sob

    def solver_config(self) -> SolverConfig:
        v = self.values
        return SolverConfig(
            params=self.physical_params(),
            sobolev=self.sobolev(),
            dt=v["solver.dt"],
            tmax=v["solver.tmax"],
            scheme=v["solver.scheme"],
            mode=v["solver.mode"],
            snapshot_every=v["solver.snapshot_every"],
        )

    def initial_state(self) -> State:
        v = self.values
        band = v["init.band"] if v["init.band"] > 0 else None
        return make_initial(
            v["init.kind"],
            self.grid(),
            v["init.seed"],
            (v["init.target_u"], v["init.target_b"]),
            self.sobolev(),
            band=band,
        )

    def validate(self) -> None:
        self.grid()
        self.sobolev()
        self.solver_config()
        if self.values["init.kind"] not in ("beltrami", "taylor_green_like", "random_band"):
            raise ValueError(f"init.kind: unknown kind {self.values['init.kind']!r}")
        if self.values["solver.mode"] not in MODES:
            raise ValueError(f"solver.mode: must be one of {MODES}")

    def to_text(self) -> str:
        lines = []
        for key in _DEFAULTS:
            val = self.values[key]
            if isinstance(val, float):
                lines.append(f"{key} = {val:.17g}")
            else:
                lines.append(f"{key} = {val}")
        return "\n".join(lines) + "\n"


def parse_config(text: str) -> RunConfig:
    values = dict(_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = (s.strip() for s in line.partition("="))
        if key not in _DEFAULTS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        try:
            if key in _STR_KEYS:
                values[key] = val
            elif key in _INT_KEYS:
                values[key] = int(val)
            else:
                values[key] = float(val)
        except ValueError:
            raise ValueError(f"config key {key}: cannot parse value {val!r}") from None
    cfg = RunConfig(values)
    cfg.validate()
    return cfg


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
