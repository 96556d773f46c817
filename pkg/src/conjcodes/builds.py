"""Canonical system constructions shared by the CLI and the test suite.

Two reference systems recur everywhere.  The short one concatenates the
seven members of the length-3 binary ensemble with a Hamming pair over the
degree-1 extension, giving a 21-coordinate system carrying one bit.  The
long one concatenates seven sieved members of the length-7 binary ensemble
with a full-cycle Reed-Solomon pair over GF(8), giving 49 coordinates and
net dimension 9.

The general constructor covers any admissible parameter set whose outer
layer is Reed-Solomon; the short reference needs its Hamming outer layer
because a degree-1 extension leaves no room for nonzero evaluation points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import LinearCode
from .concat import ConcatenatedPair, InnerMaps, build_inner_maps, concatenate
from .ensemble import BalancedEnsemble, SieveReport, sieve
from .errors import ConfigError
from .field import Field, field_create
from .rs import OuterPair, TableCode, outer_pair, rs_pair

HAMMING_ROWS = ((1, 1, 0, 1, 0, 0, 0),
                (0, 1, 1, 0, 1, 0, 0),
                (0, 0, 1, 1, 0, 1, 0),
                (0, 0, 0, 1, 1, 0, 1))


def hamming_7_4(field) -> LinearCode:
    """The cyclic [7,4] binary Hamming code, which contains its dual."""
    if field.order != 2:
        raise ConfigError("the [7,4] Hamming code is binary")
    return LinearCode.from_rows(field, [list(r) for r in HAMMING_ROWS])


@dataclass(frozen=True)
class SystemBuild:
    """A constructed system with the evidence of how it was chosen."""
    name: str
    ensemble: BalancedEnsemble
    extension: Field
    epsilon: float
    sieve: SieveReport
    indices: tuple[int, ...]
    outer: OuterPair
    system: ConcatenatedPair


def _assemble(name: str, ensemble: BalancedEnsemble, extension: Field,
              epsilon: float, indices, outer: OuterPair) -> SystemBuild:
    report = sieve(ensemble, epsilon)
    length = outer.code1.linear.n
    if indices is None:
        if len(report.good_indices) < length:
            raise ConfigError(
                f"only {len(report.good_indices)} sieve-good members for "
                f"{length} blocks")
        indices = report.good_indices[:length]
    indices = tuple(int(i) for i in indices)
    if len(indices) != length:
        raise ConfigError(
            f"{len(indices)} inner indices for {length} outer coordinates")
    inners = tuple(build_inner_maps(ensemble, i, extension) for i in indices)
    system = concatenate(inners, outer)
    return SystemBuild(name, ensemble, extension, epsilon, report, indices,
                       outer, system)


def reference_21(epsilon: float = 0.05, indices=None) -> SystemBuild:
    """21-coordinate system: length-3 inner ensemble, Hamming outer pair.

    The default takes the first seven sieve-good members, one per outer
    coordinate; at this size that is the whole ensemble."""
    base = field_create(2, 1)
    ensemble = BalancedEnsemble(base, 3, 2, 2)
    extension = Field.extension(base, 1)
    ham = hamming_7_4(extension)
    return _assemble("reference_21", ensemble, extension, epsilon, indices,
                     outer_pair(TableCode(ham), TableCode(ham)))


def reference_49(epsilon: float = 0.05, indices=None) -> SystemBuild:
    """49-coordinate system: length-7 inner ensemble, GF(8) outer pair."""
    return build_system(2, 1, 7, 5, 5, 7, 5, 5, epsilon=epsilon,
                        indices=indices, name="reference_49")


def build_system(char: int, degree: int, n: int, k1: int, k2: int,
                 outer_length: int, outer_dim1: int, outer_dim2: int,
                 epsilon: float = 0.05, indices=None,
                 name: str = "system") -> SystemBuild:
    """Any admissible ensemble with a Reed-Solomon outer pair.

    Inner indices default to the first sieve-good members at `epsilon`,
    one per outer coordinate."""
    base = field_create(char, degree)
    ensemble = BalancedEnsemble(base, n, k1, k2)
    net = k1 + k2 - n
    if net < 1:
        raise ConfigError("net dimension must be positive")
    extension = Field.extension(base, net)
    if outer_length > extension.order - 1:
        raise ConfigError(
            f"outer length {outer_length} exceeds the {extension.order - 1} "
            f"nonzero points of the symbol field")
    outer = rs_pair(extension, outer_length, outer_dim1, outer_dim2)
    return _assemble(name, ensemble, extension, epsilon, indices, outer)
