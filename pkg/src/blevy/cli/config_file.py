"""Flat ``key = value`` experiment files.

One assignment per line, dotted keys, ``#`` starts a comment. Keys:

model.lambda
model.offspring.kind          deterministic | twopoint | geometric
model.offspring.k             (deterministic, twopoint)
model.offspring.p0            (twopoint)
model.offspring.mean          (geometric)
model.displacement.kind       zero | deterministic | gaussian | poisson
model.displacement.value      (deterministic)
model.displacement.mu         (gaussian, poisson)
model.displacement.var        (gaussian)
model.displacement.coupling   iid | shared            [iid]
model.motion.drift                                    [0]
model.motion.diffusion_var                            [0]
model.motion.jump_rate                                [0]
model.motion.jump.kind        as displacement kinds   [zero]
model.motion.jump.value | .mu | .var
experiment.checkpoints        comma separated times   [1, 2, 4]
experiment.replicates                                 [10000]
experiment.cap                                        [1000000]
experiment.seed               unsigned 64-bit         [0]
experiment.variant            stated | corrected | auto  [auto]
experiment.max_attempts                               [10000]
experiment.output_dir                                 [out]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from blevy.base.base_simulator import check_checkpoints
from blevy.levy.levy import LevySpec
from blevy.model.config import ModelConfig, validate
from blevy.model.displacement import (
    Coupling,
    DeterministicMarginal,
    DisplacementLaw,
    GaussianMarginal,
    Marginal,
    PoissonMarginal,
    ZeroMarginal,
)
from blevy.model.offspring import (
    DeterministicOffspring,
    GeometricOffspring,
    OffspringLaw,
    TwoPointOffspring,
)
from blevy.oracle.closed_form import MomentVariant
from blevy.stats.replicates import SEED_MAX
from blevy.utils.errors import BlevyError, ConfigParseError, InvalidParameter
from blevy.utils.numeric import format_float
from blevy.utils.shared_defaults import DEFAULT_CAP, DEFAULT_MAX_ATTEMPTS

DEFAULT_CHECKPOINTS = (1.0, 2.0, 4.0)
DEFAULT_REPLICATES = 10_000
DEFAULT_OUTPUT_DIR = Path("out")


@dataclass(frozen=True)
class ExperimentSpec:
    """A model plus everything needed to run an experiment on it.

    ``variant=None`` means the default choice for the model's constants.
    """

    model: ModelConfig
    checkpoints: tuple[float, ...] = DEFAULT_CHECKPOINTS
    replicates: int = DEFAULT_REPLICATES
    cap: int = DEFAULT_CAP
    master_seed: int = 0
    variant: MomentVariant | None = None
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    output_dir: Path = field(default=DEFAULT_OUTPUT_DIR)

    def validate(self) -> None:
        """Validate the model and every experiment field."""
        validate(self.model)
        check_checkpoints(self.checkpoints)
        for name, value, low in (
            ("experiment.replicates", self.replicates, 1),
            ("experiment.cap", self.cap, 1),
            ("experiment.max_attempts", self.max_attempts, 1),
        ):
            if isinstance(value, bool) or not isinstance(value, int) or value < low:
                raise InvalidParameter(name, f"must be an integer >= {low}, got {value!r}")
        if not 0 <= self.master_seed <= SEED_MAX:
            raise InvalidParameter(
                "experiment.seed", f"must lie in [0, 2**64 - 1], got {self.master_seed!r}"
            )


# ------------------------
# Parsing
# ------------------------
class _Fields:
    """Parsed assignments with per-key typed access and leftover detection."""

    def __init__(self, items: dict[str, str]) -> None:
        self.items = items
        self.used: set[str] = set()

    def has(self, key: str) -> bool:
        return key in self.items

    def text(self, key: str, default: str | None = None) -> str:
        if key not in self.items:
            if default is None:
                raise ConfigParseError(key, "missing required key")
            return default
        self.used.add(key)
        return self.items[key]

    def real(self, key: str, default: float | None = None) -> float:
        if key not in self.items and default is not None:
            return default
        raw = self.text(key)
        try:
            return float(raw)
        except ValueError:
            raise ConfigParseError(key, f"not a number: {raw!r}") from None

    def integer(self, key: str, default: int | None = None) -> int:
        if key not in self.items and default is not None:
            return default
        raw = self.text(key)
        try:
            return int(raw)
        except ValueError:
            raise ConfigParseError(key, f"not an integer: {raw!r}") from None

    def choice(self, key: str, options: tuple[str, ...], default: str | None = None) -> str:
        raw = self.text(key, default).lower()
        if raw not in options:
            raise ConfigParseError(key, f"must be one of {', '.join(options)}, got {raw!r}")
        return raw

    def leftovers(self) -> list[str]:
        return [k for k in self.items if k not in self.used]


MARGINAL_KINDS = ("zero", "deterministic", "gaussian", "poisson")


def _marginal(f: _Fields, prefix: str, default_kind: str | None = None) -> Marginal:
    kind = f.choice(f"{prefix}.kind", MARGINAL_KINDS, default_kind)
    if kind == "zero":
        return ZeroMarginal()
    if kind == "deterministic":
        return DeterministicMarginal(f.real(f"{prefix}.value"))
    if kind == "gaussian":
        return GaussianMarginal(f.real(f"{prefix}.mu"), f.real(f"{prefix}.var"))
    return PoissonMarginal(f.real(f"{prefix}.mu"))


def _offspring(f: _Fields) -> OffspringLaw:
    kind = f.choice("model.offspring.kind", ("deterministic", "twopoint", "geometric"))
    if kind == "deterministic":
        return DeterministicOffspring(f.integer("model.offspring.k"))
    if kind == "twopoint":
        return TwoPointOffspring(f.real("model.offspring.p0"), f.integer("model.offspring.k"))
    return GeometricOffspring(f.real("model.offspring.mean"))


def _checkpoints(f: _Fields) -> tuple[float, ...]:
    if not f.has("experiment.checkpoints"):
        return DEFAULT_CHECKPOINTS
    return parse_checkpoints(f.text("experiment.checkpoints"), "experiment.checkpoints")


def parse_checkpoints(text: str, key: str = "--checkpoints") -> tuple[float, ...]:
    """Parse a comma separated, strictly increasing list of times."""
    try:
        grid = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigParseError(key, f"not a list of numbers: {text!r}") from None
    try:
        return check_checkpoints(grid)
    except BlevyError as exc:
        raise ConfigParseError(key, str(exc)) from None


def parse_config(text: str) -> ExperimentSpec:
    """Parse an experiment file.

    Parameters
    ----------
    text : str
        File contents.

    Returns
    -------
    ExperimentSpec
        The parsed and validated experiment.

    Raises
    ------
    ConfigParseError
        On a malformed line, a duplicate, unknown or missing key, or an
        unparsable value; ``.field`` names the key.
    InvalidParameter
        When a parsed value is out of range.

    """
    items: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigParseError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        if key in items:
            raise ConfigParseError(key, "duplicate key")
        items[key] = value.strip()

    f = _Fields(items)
    model = ModelConfig(
        lifetime_rate=f.real("model.lambda"),
        offspring=_offspring(f),
        displacement=DisplacementLaw(
            _marginal(f, "model.displacement"),
            Coupling(f.choice("model.displacement.coupling", ("iid", "shared"), "iid")),
        ),
        motion=LevySpec(
            drift=f.real("model.motion.drift", 0.0),
            diffusion_var=f.real("model.motion.diffusion_var", 0.0),
            jump_rate=f.real("model.motion.jump_rate", 0.0),
            jump_law=_marginal(f, "model.motion.jump", "zero"),
        ),
    )
    variant = f.choice("experiment.variant", ("stated", "corrected", "auto"), "auto")
    spec = ExperimentSpec(
        model=model,
        checkpoints=_checkpoints(f),
        replicates=f.integer("experiment.replicates", DEFAULT_REPLICATES),
        cap=f.integer("experiment.cap", DEFAULT_CAP),
        master_seed=f.integer("experiment.seed", 0),
        variant=None if variant == "auto" else MomentVariant(variant),
        max_attempts=f.integer("experiment.max_attempts", DEFAULT_MAX_ATTEMPTS),
        output_dir=Path(f.text("experiment.output_dir", str(DEFAULT_OUTPUT_DIR))),
    )
    leftovers = f.leftovers()
    if leftovers:
        raise ConfigParseError(leftovers[0], "unknown key or not used by the chosen kind")
    spec.validate()
    return spec


def load_config(path: Path) -> ExperimentSpec:
    """Read and parse an experiment file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParseError("--config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


# ------------------------
# Dumping
# ------------------------
def _marginal_lines(prefix: str, marginal: Marginal) -> list[tuple[str, str]]:
    if isinstance(marginal, ZeroMarginal):
        return [(f"{prefix}.kind", "zero")]
    if isinstance(marginal, DeterministicMarginal):
        return [(f"{prefix}.kind", "deterministic"), (f"{prefix}.value", format_float(marginal.value))]
    if isinstance(marginal, GaussianMarginal):
        return [
            (f"{prefix}.kind", "gaussian"),
            (f"{prefix}.mu", format_float(marginal.mu)),
            (f"{prefix}.var", format_float(marginal.var)),
        ]
    if isinstance(marginal, PoissonMarginal):
        return [(f"{prefix}.kind", "poisson"), (f"{prefix}.mu", format_float(marginal.mu))]
    raise TypeError(f"cannot write marginal {marginal!r}")


def _offspring_lines(law: OffspringLaw) -> list[tuple[str, str]]:
    if isinstance(law, DeterministicOffspring):
        return [("model.offspring.kind", "deterministic"), ("model.offspring.k", str(law.k))]
    if isinstance(law, TwoPointOffspring):
        return [
            ("model.offspring.kind", "twopoint"),
            ("model.offspring.p0", format_float(law.p0)),
            ("model.offspring.k", str(law.k)),
        ]
    if isinstance(law, GeometricOffspring):
        return [
            ("model.offspring.kind", "geometric"),
            ("model.offspring.mean", format_float(law.mean_count)),
        ]
    raise TypeError(f"cannot write offspring law {law!r}")


def dump_config(spec: ExperimentSpec) -> str:
    """Render ``spec`` in the experiment-file format; ``parse_config`` inverts it."""
    m = spec.model
    lines: list[tuple[str, str]] = [("model.lambda", format_float(float(m.lifetime_rate)))]
    lines += _offspring_lines(m.offspring)
    lines += _marginal_lines("model.displacement", m.displacement.marginal)
    lines.append(("model.displacement.coupling", m.displacement.coupling.value))
    lines += [
        ("model.motion.drift", format_float(float(m.motion.drift))),
        ("model.motion.diffusion_var", format_float(float(m.motion.diffusion_var))),
        ("model.motion.jump_rate", format_float(float(m.motion.jump_rate))),
    ]
    lines += _marginal_lines("model.motion.jump", m.motion.jump_law)
    lines += [
        ("experiment.checkpoints", ", ".join(format_float(float(t)) for t in spec.checkpoints)),
        ("experiment.replicates", str(spec.replicates)),
        ("experiment.cap", str(spec.cap)),
        ("experiment.seed", str(spec.master_seed)),
        ("experiment.variant", "auto" if spec.variant is None else spec.variant.value),
        ("experiment.max_attempts", str(spec.max_attempts)),
        ("experiment.output_dir", str(spec.output_dir)),
    ]
    return "".join(f"{key} = {value}\n" for key, value in lines)


def write_config(spec: ExperimentSpec, path: Path) -> Path:
    """Write ``spec`` to ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_config(spec))
    return path
