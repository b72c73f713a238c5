import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from padic_ducci.arith.linalg import RationalMatrix, RationalVector
from padic_ducci.arith.padic import Prime, is_p_integer, vp
from padic_ducci.dynamics.orbit import DucciInstance, IterationMode
from padic_ducci.errors import SchemaError, ValidationError

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 16
_UINT64 = (1 << 64) - 1


class ProfileKind(Enum):
    CONTRACTIVE_ENTRIES = "contractive_entries"
    UNIT_TRIANGULAR = "unit_triangular"
    PERMUTATION = "permutation"
    DIAGONAL_RANDOM = "diagonal_random"
    EXPANSIVE_DIAGONAL = "expansive_diagonal"
    DENSE_RANDOM = "dense_random"

    @classmethod
    def parse(cls, value: str) -> "ProfileKind":
        for kind in cls:
            if kind.value == value.lower():
                return kind
        raise SchemaError(f"unknown profile kind {value!r}", field="kind")


@dataclass(frozen=True)
class GeneratorProfile:
    kind: ProfileKind
    n: int
    p: Prime
    value_bound: int = 10

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        if self.n < 1:
            raise ValidationError("n must be positive", field="n")
        if self.value_bound < 1:
            raise ValidationError("value_bound must be positive", field="value_bound")

    @property
    def label(self) -> str:
        return f"{self.kind.value}-n{self.n}-p{int(self.p)}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "p": int(self.p),
            "value_bound": self.value_bound,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorProfile":
        if not isinstance(data, dict):
            raise SchemaError("profile must be a JSON object", field="profiles")
        try:
            return cls(
                kind=ProfileKind.parse(str(data["kind"])),
                n=int(data["n"]),
                p=int(data["p"]),
                value_bound=int(data.get("value_bound", 10)),
            )
        except KeyError as e:
            raise SchemaError(f"profile is missing {e.args[0]!r}", field=str(e.args[0]))


def make_rng(rng_seed: int, profile_index: int, instance_index: int, attempt: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, profile, instance, attempt).

    Every instance owns an independent stream, so results do not depend on
    which worker draws it or in what order.
    """
    key = np.random.SeedSequence([rng_seed & _UINT64, profile_index, instance_index, attempt])
    return np.random.Generator(np.random.Philox(key))


def random_rational(rng: np.random.Generator, bound: int) -> Fraction:
    num = int(rng.integers(-bound, bound, endpoint=True))
    den = int(rng.integers(1, bound, endpoint=True))
    return Fraction(num, den)


def _nonzero(rng: np.random.Generator, bound: int) -> Fraction:
    x = random_rational(rng, bound)
    return x if x != 0 else Fraction(1)


def _shift_valuation(x: Fraction, p: int, target: int) -> Fraction:
    """Multiply x by a power of p so that vp(x) == target (zero stays zero)"""
    if x == 0:
        return x
    return x * Fraction(p) ** (target - vp(x, p))


class InstanceGenerator(ABC):
    """Draws matrices from one hypothesis class"""

    @abstractmethod
    def matrix(self, profile: GeneratorProfile, rng: np.random.Generator) -> RationalMatrix:
        pass

    @abstractmethod
    def satisfies(self, matrix: RationalMatrix, profile: GeneratorProfile) -> bool:
        """The profile's defining predicate"""
        pass

    def seed(self, profile: GeneratorProfile, rng: np.random.Generator) -> RationalVector:
        entries = [random_rational(rng, profile.value_bound) for _ in range(profile.n)]
        if all(e == 0 for e in entries):
            entries[0] = Fraction(1)
        return RationalVector(entries)


class ContractiveEntriesGenerator(InstanceGenerator):
    def matrix(self, profile, rng):
        p, n = profile.p, profile.n
        rows = []
        for _ in range(n):
            row = []
            for _ in range(n):
                x = random_rational(rng, profile.value_bound)
                if x != 0 and vp(x, p) < 1:
                    x = _shift_valuation(x, p, 1)
                row.append(x)
            rows.append(row)
        return RationalMatrix(rows)

    def satisfies(self, matrix, profile):
        return all(vp(e, profile.p) >= 1 for e in matrix.entries())


class UnitTriangularGenerator(InstanceGenerator):
    def matrix(self, profile, rng):
        p, n = profile.p, profile.n
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = _shift_valuation(_nonzero(rng, profile.value_bound), p, 0)
            for j in range(i + 1, n):
                x = random_rational(rng, profile.value_bound)
                if x != 0 and vp(x, p) < 0:
                    x = _shift_valuation(x, p, 0)
                rows[i][j] = x
        return RationalMatrix(rows)

    def satisfies(self, matrix, profile):
        return (
            matrix.is_upper_triangular()
            and all(vp(e, profile.p) == 0 for e in matrix.diagonal_entries())
            and all(is_p_integer(e, profile.p) for e in matrix.entries())
        )


class PermutationGenerator(InstanceGenerator):
    def matrix(self, profile, rng):
        n = profile.n
        perm = [int(i) for i in rng.permutation(n)]
        return RationalMatrix([[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)])

    def satisfies(self, matrix, profile):
        return matrix.is_permutation()


class DiagonalRandomGenerator(InstanceGenerator):
    def matrix(self, profile, rng):
        return RationalMatrix.diagonal([_nonzero(rng, profile.value_bound) for _ in range(profile.n)])

    def satisfies(self, matrix, profile):
        return matrix.is_diagonal() and all(e != 0 for e in matrix.diagonal_entries())


class ExpansiveDiagonalGenerator(InstanceGenerator):
    def matrix(self, profile, rng):
        p = profile.p
        values = []
        for _ in range(profile.n):
            x = _nonzero(rng, profile.value_bound)
            if vp(x, p) >= 0:
                x = _shift_valuation(x, p, -1 - int(rng.integers(0, 2)))
            values.append(x)
        return RationalMatrix.diagonal(values)

    def satisfies(self, matrix, profile):
        return matrix.is_diagonal() and all(vp(e, profile.p) < 0 for e in matrix.diagonal_entries())


class DenseRandomGenerator(InstanceGenerator):
    def matrix(self, profile, rng):
        n = profile.n
        return RationalMatrix(
            [[random_rational(rng, profile.value_bound) for _ in range(n)] for _ in range(n)]
        )

    def satisfies(self, matrix, profile):
        return matrix.n == profile.n


PROFILES: Dict[ProfileKind, Dict] = {
    ProfileKind.CONTRACTIVE_ENTRIES: {
        "name": "Contractive entries",
        "description": "every entry has vp >= 1, so every eigenvalue has norm < 1",
        "class": ContractiveEntriesGenerator,
    },
    ProfileKind.UNIT_TRIANGULAR: {
        "name": "Unit triangular",
        "description": "upper triangular over Z_p with unit diagonal",
        "class": UnitTriangularGenerator,
    },
    ProfileKind.PERMUTATION: {
        "name": "Permutation",
        "description": "0/1 matrix with one 1 per row and column",
        "class": PermutationGenerator,
    },
    ProfileKind.DIAGONAL_RANDOM: {
        "name": "Random diagonal",
        "description": "nonzero random rational diagonal",
        "class": DiagonalRandomGenerator,
    },
    ProfileKind.EXPANSIVE_DIAGONAL: {
        "name": "Expansive diagonal",
        "description": "diagonal entries of negative valuation, e.g. diag(1/2, 1/2) at p = 2",
        "class": ExpansiveDiagonalGenerator,
    },
    ProfileKind.DENSE_RANDOM: {
        "name": "Dense random",
        "description": "unconstrained random rational matrix",
        "class": DenseRandomGenerator,
    },
}


def get_available_profiles() -> List[ProfileKind]:
    return list(PROFILES.keys())


def create_generator(kind: ProfileKind) -> InstanceGenerator:
    return PROFILES[kind]["class"]()


def gen_instance(
    profile: GeneratorProfile,
    rng: np.random.Generator,
    mode: IterationMode = IterationMode.LINEAR_MODE,
    instance_id: Optional[str] = None,
) -> DucciInstance:
    """One instance of the profile; raises if the predicate fails"""
    generator = create_generator(profile.kind)
    matrix = generator.matrix(profile, rng)
    if not generator.satisfies(matrix, profile):
        raise ValidationError(f"generated matrix violates the {profile.kind.value} predicate", field="kind")
    seed = generator.seed(profile, rng)
    return DucciInstance(p=profile.p, matrix=matrix, seed=seed, mode=mode, instance_id=instance_id)


def instance_for(
    profile: GeneratorProfile,
    rng_seed: int,
    profile_index: int,
    instance_index: int,
    mode: IterationMode = IterationMode.LINEAR_MODE,
) -> DucciInstance:
    """Deterministic instance for a sweep slot, retrying with fresh counters"""
    instance_id = f"{profile.label}-{instance_index:05d}"
    for attempt in range(MAX_ATTEMPTS):
        rng = make_rng(rng_seed, profile_index, instance_index, attempt)
        try:
            return gen_instance(profile, rng, mode=mode, instance_id=instance_id)
        except ValidationError:
            logger.debug("retrying %s (attempt %d)", instance_id, attempt + 1)
    raise ValidationError(f"could not generate {instance_id} within {MAX_ATTEMPTS} attempts", field="kind")
