"""Model configuration, unit conventions and physical constants.

Everything runs in atomic units (hbar = m_e = e = 1, lengths in bohr,
energies in hartree). Temperatures are kept in kelvin and converted with
the Boltzmann constant below.
"""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from scipy import constants as _sc

from .errors import ThermophaseError


@dataclass(frozen=True)
class Constants:
    """Physical constants in atomic units (CODATA values via scipy)."""

    #: Boltzmann constant, hartree per kelvin.
    k_b: float = _sc.physical_constants["kelvin-hartree relationship"][0]
    #: Two-proton reduced mass, electron masses.
    proton_reduced_mass: float = 0.5 * _sc.physical_constants["proton-electron mass ratio"][0]

    def kelvin_to_hartree(self, t):
        return t * self.k_b

    def hartree_to_kelvin(self, e):
        return e / self.k_b


CONSTANTS = Constants()
K_B = CONSTANTS.k_b


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1


class NormConvention(str, enum.Enum):
    """How the LCAO prefactor C = 2 +/- 2Y is applied.

    UNNORMALIZED multiplies the combination by C (the state is not unit
    normalized and carries a nonzero connection). NORMALIZED divides by
    sqrt(2 +/- 2Y), the textbook choice, whose connection vanishes.
    """

    UNNORMALIZED = "unnormalized"
    NORMALIZED = "normalized"


@dataclass(frozen=True)
class LambdaMode:
    """How the orbital exponent is obtained.

    kind is one of ``fixed_lambda`` (value holds the exponent),
    ``fixed_epsilon`` or ``self_consistent``. The string form is
    ``fixed_lambda=1.2``, ``fixed_epsilon`` or ``self_consistent``.
    """

    kind: str
    value: float | None = None

    KINDS = ("fixed_lambda", "fixed_epsilon", "self_consistent")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown lambda mode {self.kind!r}")
        if self.kind == "fixed_lambda":
            if self.value is None:
                raise ValueError("fixed_lambda mode needs a value")
            object.__setattr__(self, "value", float(self.value))
        elif self.value is not None:
            raise ValueError(f"{self.kind} mode takes no value")

    @classmethod
    def fixed_lambda(cls, value: float) -> LambdaMode:
        return cls("fixed_lambda", value)

    @classmethod
    def parse(cls, text: str) -> LambdaMode:
        text = text.strip()
        if "=" in text:
            kind, _, raw = text.partition("=")
            return cls(kind.strip(), float(raw))
        return cls(text)

    def __str__(self):
        if self.kind == "fixed_lambda":
            return f"fixed_lambda={self.value!r}"
        return self.kind


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 40
    fd_step: float = 1e-5


@dataclass(frozen=True)
class ModelConfig:
    """All calibration and mode choices for the H2+ pipeline.

    Attributes:
        theta_th: Thermal energy scale |epsilon| / k_B, kelvin.
        t_ref: Calibration temperature, kelvin.
        lambda_ref: Orbital exponent at ``t_ref``, inverse bohr.
        mode: How lambda is obtained, see :class:`LambdaMode`.
        parity: Even (bonding) or odd (antibonding) combination.
        mass: Nuclear mass in the derivative-coupling terms, electron masses.
        norm_convention: Application of the LCAO prefactor.
        r_m: Upper limit of the phase integral, bohr.
        quadrature: Tolerances, subdivision budget and finite-difference step.
    """

    theta_th: float = 100.0
    t_ref: float = 200.0
    lambda_ref: float = 1.0
    mode: LambdaMode = field(default_factory=lambda: LambdaMode("fixed_epsilon"))
    parity: Parity = Parity.EVEN
    mass: float = 918.076
    norm_convention: NormConvention = NormConvention.UNNORMALIZED
    r_m: float = 5.0
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)

    def replace(self, **changes) -> ModelConfig:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "theta_th": self.theta_th,
            "t_ref": self.t_ref,
            "lambda_ref": self.lambda_ref,
            "mode": str(self.mode),
            "parity": self.parity.value,
            "mass": self.mass,
            "norm_convention": self.norm_convention.value,
            "r_m": self.r_m,
            "quadrature": dataclasses.asdict(self.quadrature),
        }

    def to_json(self) -> str:
        """Canonical form: sorted keys, no whitespace, shortest float repr."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ModelConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError([f"unknown key {k!r}" for k in unknown])
        kwargs: dict[str, Any] = {}
        try:
            for name in ("theta_th", "t_ref", "lambda_ref", "mass", "r_m"):
                if name in data:
                    kwargs[name] = float(data[name])
            if "mode" in data:
                kwargs["mode"] = LambdaMode.parse(str(data["mode"]))
            if "parity" in data:
                kwargs["parity"] = Parity(data["parity"])
            if "norm_convention" in data:
                kwargs["norm_convention"] = NormConvention(data["norm_convention"])
            if "quadrature" in data:
                q = dict(data["quadrature"])
                qknown = {f.name for f in dataclasses.fields(QuadratureSettings)}
                qunknown = sorted(set(q) - qknown)
                if qunknown:
                    raise ConfigError([f"unknown key 'quadrature.{k}'" for k in qunknown])
                if "max_subdivisions" in q:
                    q["max_subdivisions"] = int(q["max_subdivisions"])
                kwargs["quadrature"] = QuadratureSettings(**q)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError([str(exc)]) from exc
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> ModelConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"invalid JSON: {exc}"]) from exc
        if not isinstance(data, dict):
            raise ConfigError(["config document must be a JSON object"])
        return cls.from_dict(data)


class ConfigError(ThermophaseError, ValueError):
    """Invalid configuration; ``violations`` lists every problem found."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


def default_config() -> ModelConfig:
    return ModelConfig()


def validate(config: ModelConfig) -> list[str]:
    """Return every violated invariant; an empty list means the config is valid."""
    errors = []
    for name in ("theta_th", "t_ref", "lambda_ref", "mass", "r_m"):
        value = getattr(config, name)
        if not value > 0:
            errors.append(f"{name} must be positive")
    if config.mode.kind == "fixed_lambda" and not config.mode.value > 0:
        errors.append("fixed lambda must be positive")
    q = config.quadrature
    if not q.rel_tol > 0:
        errors.append("quadrature rel_tol must be positive")
    if not q.abs_tol >= 0:
        errors.append("quadrature abs_tol must be nonnegative")
    if q.max_subdivisions < 1:
        errors.append("quadrature max_subdivisions must be at least 1")
    if not q.fd_step > 0:
        errors.append("finite-difference step must be positive")
    elif config.r_m > 0 and q.fd_step > config.r_m / 100:
        errors.append("finite-difference step too large (must be <= r_m / 100)")
    return errors


def load_config(path) -> ModelConfig:
    with open(path, encoding="utf-8") as fh:
        return ModelConfig.from_json(fh.read())
