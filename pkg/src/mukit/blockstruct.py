"""Complex perturbation block structures.

A structure is an ordered list of blocks, each either a repeated scalar
``delta * I_k`` or a full ``m x m`` block.  Block positions are significant:
``"r:2,f:3"`` and ``"f:3,r:2"`` are different structures.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, StructureError
from .matnum import as_matrix


class BlockKind(enum.Enum):
    REPEATED_SCALAR = "r"
    FULL = "f"


@dataclass(frozen=True)
class BlockSpec:
    kind: BlockKind
    size: int

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise StructureError(f"block size must be a positive integer, got {self.size!r}")

    @property
    def token(self):
        return f"{self.kind.value}:{self.size}"


@dataclass(frozen=True)
class BlockStructure:
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise StructureError("a block structure needs at least one block")

    @property
    def n(self):
        return sum(b.size for b in self.blocks)

    @property
    def slices(self):
        out, start = [], 0
        for b in self.blocks:
            out.append(slice(start, start + b.size))
            start += b.size
        return out

    @property
    def all_scalar(self):
        return all(b.kind is BlockKind.REPEATED_SCALAR for b in self.blocks)

    @property
    def r(self):
        return sum(b.kind is BlockKind.REPEATED_SCALAR for b in self.blocks)

    @property
    def s(self):
        return sum(b.kind is BlockKind.FULL for b in self.blocks)

    def block_index(self):
        """Length-n array mapping each row/column to its block number."""
        return np.repeat(np.arange(len(self.blocks)), [b.size for b in self.blocks])

    def pattern(self):
        """Boolean mask of entries a member of the structure may occupy."""
        idx = self.block_index()
        return idx[:, None] == idx[None, :]

    def __str__(self):
        return ",".join(b.token for b in self.blocks)


def parse_structure(spec, n):
    """Parse ``"r:<k>,f:<m>,..."`` into a structure of total size ``n``."""
    if spec is None or not spec.strip():
        raise StructureError("empty structure spec")
    blocks = []
    for token in spec.split(","):
        kind, sep, size = token.strip().partition(":")
        if not sep or kind not in ("r", "f"):
            raise StructureError(f"malformed block token {token!r}; expected r:<k> or f:<m>")
        try:
            size = int(size)
        except ValueError:
            raise StructureError(f"malformed block size in {token!r}") from None
        blocks.append(BlockSpec(BlockKind(kind), size))
    B = BlockStructure(tuple(blocks))
    if B.n != n:
        raise DimensionError(f"structure {spec!r} has total size {B.n}, matrix has n={n}")
    return B


@dataclass
class UnitaryMember:
    """Block-diagonal unitary in the structure.

    ``parameters`` holds one entry per block: the phase angle of a repeated
    scalar block, or the unitary sub-block of a full block.
    """

    matrix: np.ndarray
    parameters: list = field(default_factory=list)


@dataclass
class ScalingMember:
    """Positive per-block scalings, normalized so the last one is 1."""

    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        if d.ndim != 1 or d.size < 1 or not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise StructureError("scalings must be finite and positive")
        self.d = d / d[-1]


def assemble_unitary(B, parameters):
    """Build the member matrix from per-block parameters."""
    U = np.zeros((B.n, B.n), dtype=np.complex128)
    params = []
    for blk, sl, p in zip(B.blocks, B.slices, parameters):
        if blk.kind is BlockKind.REPEATED_SCALAR:
            phase = float(np.mod(p, 2 * np.pi))
            U[sl, sl] = np.exp(1j * phase) * np.eye(blk.size)
            params.append(phase)
        else:
            sub = np.asarray(p, dtype=np.complex128)
            U[sl, sl] = sub
            params.append(sub.copy())
    return UnitaryMember(U, params)


def _haar(rng, k):
    Z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.where(np.abs(d) > 0, np.abs(d), 1.0))


def sample_unitary(B, seed):
    """Random member of U_B, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    params = []
    for blk in B.blocks:
        if blk.kind is BlockKind.REPEATED_SCALAR:
            params.append(rng.uniform(0.0, 2 * np.pi))
        else:
            params.append(_haar(rng, blk.size))
    return assemble_unitary(B, params)


def polar_unitary(X):
    """Unitary polar factor of a square matrix (identity for the zero matrix)."""
    X = np.asarray(X, dtype=np.complex128)
    if not np.any(X):
        return np.eye(X.shape[0], dtype=np.complex128)
    W, _, Vh = np.linalg.svd(X)
    return W @ Vh


def project_unitary(X, B):
    """Nearest-member retraction of a block-diagonal matrix onto U_B.

    Full blocks map to their unitary polar factor; a repeated scalar block
    maps to ``exp(i*arg(trace)) I``.  Entries outside the pattern are ignored.
    """
    X = as_matrix(X)
    if X.shape[0] != B.n:
        raise DimensionError(f"matrix is {X.shape[0]}x{X.shape[0]}, structure has n={B.n}")
    params = []
    for blk, sl in zip(B.blocks, B.slices):
        sub = X[sl, sl]
        if blk.kind is BlockKind.REPEATED_SCALAR:
            tr = np.trace(sub)
            params.append(float(np.angle(tr)) if tr != 0 else 0.0)
        else:
            params.append(polar_unitary(sub))
    return assemble_unitary(B, params)


def scaling_matrix(d, B):
    """Expand per-block scalings into the diagonal matrix ``diag(d_i I)``."""
    d = d.d if isinstance(d, ScalingMember) else np.asarray(d, dtype=float)
    if d.size != len(B.blocks):
        raise DimensionError(f"{d.size} scalings for {len(B.blocks)} blocks")
    return np.diag(np.repeat(d, [b.size for b in B.blocks])).astype(np.complex128)


def contains_diagonal(B, phases, tol=1e-10):
    """Whether ``diag(exp(i*phases))`` is a member of the structure.

    Only repeated scalar blocks constrain the phases: they must agree modulo
    2*pi within each block.
    """
    phases = np.asarray(phases, dtype=float)
    if phases.size != B.n:
        raise DimensionError(f"{phases.size} phases for a structure of size {B.n}")
    for blk, sl in zip(B.blocks, B.slices):
        if blk.kind is BlockKind.FULL:
            continue
        z = np.exp(1j * phases[sl])
        if np.max(np.abs(z - z[0])) > tol:
            return False
    return True
