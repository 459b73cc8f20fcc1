"""POVM representation, Born statistics, measurement classes.

Class tags are assigned by constructors and never inferred numerically,
except PPT (elementwise partial-transpose check) and the projective
refinement of a recorded construction.  SEP without a construction record is
undecidable and reported as such.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .classical import ZERO_FLOOR, FiniteMeasure
from .errors import DomainError, StructuralError, ValidationError
from .linops import (
    PSD_TOL,
    DensityOp,
    HermitianOp,
    as_op,
    eig_herm,
    partial_transpose,
    tensor,
)

COMPLETENESS_TOL = 1e-9
IDEMPOTENCE_TOL = 1e-9

CLASS_TAGS = ("P-LO", "LO", "P-LOCC1", "LOCC1", "SEP", "PPT", "ALL")

# Hasse edges of the class lattice (a -> b means class a is contained in b).
_EDGES = {
    "P-LO": ("LO", "P-LOCC1"),
    "LO": ("LOCC1",),
    "P-LOCC1": ("LOCC1",),
    "LOCC1": ("SEP",),
    "SEP": ("PPT",),
    "PPT": ("ALL",),
    "ALL": (),
}


def class_leq(a: str, b: str) -> bool:
    """True when every POVM of class a also belongs to class b."""
    if a not in _EDGES or b not in _EDGES:
        raise DomainError(f"unknown measurement class in ({a!r}, {b!r})")
    seen = {a}
    stack = [a]
    while stack:
        cur = stack.pop()
        if cur == b:
            return True
        for nxt in _EDGES[cur]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


@dataclass(frozen=True)
class ClassCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


class Povm:
    """A finite POVM: PSD elements summing to the identity.

    ``construction`` is a structured record of how the POVM was built (product
    parts, conditioning, ...); membership checks for the locality classes rely
    on it.
    """

    __slots__ = ("elements", "labels", "class_tag", "construction")

    def __init__(
        self,
        elements: Sequence[HermitianOp],
        labels: Sequence | None = None,
        class_tag: str = "ALL",
        construction: dict | None = None,
        validate: bool = True,
    ):
        elements = [as_op(e) for e in elements]
        if not elements:
            raise ValidationError("a POVM needs at least one element")
        dims = elements[0].dims
        b = elements[0].b_indices
        for e in elements[1:]:
            if e.dims != dims or e.b_indices != b:
                raise StructuralError("POVM elements live on different spaces")
        if class_tag not in CLASS_TAGS:
            raise DomainError(f"unknown class tag {class_tag!r}")
        if labels is None:
            labels = list(range(len(elements)))
        labels = list(labels)
        if len(labels) != len(elements):
            raise StructuralError("labels and elements length mismatch")

        total = sum(e.data for e in elements)
        resid = float(np.max(np.abs(total - np.eye(elements[0].dim))))
        if resid > COMPLETENESS_TOL:
            raise ValidationError(
                f"POVM completeness violation: ||sum M - 1||_max = {resid:.3e}"
            )
        if validate:
            for lab, e in zip(labels, elements):
                wmin = float(eig_herm(e).eigenvalues[0])
                if wmin < -PSD_TOL:
                    raise ValidationError(
                        f"element {lab!r} not PSD: min eigenvalue {wmin:.3e}"
                    )
        self.elements = elements
        self.labels = labels
        self.class_tag = class_tag
        self.construction = construction

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    @property
    def dims(self):
        return self.elements[0].dims

    @property
    def b_indices(self):
        return self.elements[0].b_indices

    def __len__(self) -> int:
        return len(self.elements)

    def is_projective(self, tol: float = IDEMPOTENCE_TOL) -> bool:
        for e in self.elements:
            if float(np.max(np.abs(e.data @ e.data - e.data))) > tol:
                return False
        return True

    def coarse_grain(self, f) -> "Povm":
        """Merge outcomes along a label map; classical post-processing keeps
        the class tag."""
        merged: dict = {}
        for lab, e in zip(self.labels, self.elements):
            key = f(lab)
            merged[key] = merged[key] + e if key in merged else e
        labs = list(merged)
        return Povm(
            [merged[k] for k in labs],
            labs,
            self.class_tag,
            {"form": "coarse_grain", "of": self.construction},
            validate=False,
        )

    def to_json(self) -> dict:
        return {
            "class": self.class_tag,
            "elements": [e.to_json() for e in self.elements],
            "labels": [str(lab) for lab in self.labels],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Povm":
        elements = [HermitianOp.from_json(e) for e in obj["elements"]]
        return cls(elements, obj.get("labels"), obj.get("class", "ALL"))

    def __repr__(self) -> str:
        return f"Povm({len(self.elements)} outcomes, dim={self.dim}, class={self.class_tag})"


def born(rho: DensityOp, povm: Povm) -> FiniteMeasure:
    """Born-rule outcome distribution mu(z) = tr[rho M^z].

    Negative numerical dust below ZERO_FLOOR is clipped to exact zero.
    """
    r = as_op(rho)
    if r.dim != povm.dim:
        raise StructuralError(f"dimension mismatch: state {r.dim}, POVM {povm.dim}")
    out = {}
    for lab, e in zip(povm.labels, povm.elements):
        p = float(np.einsum("ij,ji->", r.data, e.data).real)
        out[lab] = 0.0 if p < ZERO_FLOOR else p
    return FiniteMeasure(out)


def local_basis_measurement(d: int) -> Povm:
    """Canonical product basis |i><i| (x) |j><j| on d x d; projective LO."""
    d = int(d)
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    elements = []
    labels = []
    for i in range(d):
        for j in range(d):
            m = np.zeros((d * d, d * d), dtype=np.complex128)
            m[i * d + j, i * d + j] = 1.0
            elements.append(HermitianOp(m, (d, d), (1,)))
            labels.append((i, j))
    construction = {"form": "product", "projective": True}
    return Povm(elements, labels, "P-LO", construction, validate=False)


def _ab_product(ea: HermitianOp, eb: HermitianOp) -> HermitianOp:
    # first factor is party A, second is party B in its entirety
    dims = ea.dims + eb.dims
    b = tuple(range(len(ea.dims), len(dims)))
    return HermitianOp(np.kron(ea.data, eb.data), dims, b)


def product_povm(pa: Povm, pb: Povm) -> Povm:
    """All products M_A^x (x) M_B^y; one-shot local measurement (LO).

    The first argument is party A's POVM and the second party B's; the
    composite bipartition marks the whole second factor as B.
    """
    elements = []
    labels = []
    for x, ea in zip(pa.labels, pa.elements):
        for y, eb in zip(pb.labels, pb.elements):
            elements.append(_ab_product(ea, eb))
            labels.append((x, y))
    construction = {"form": "product", "projective": pa.is_projective() and pb.is_projective()}
    return Povm(elements, labels, "LO", construction, validate=False)


def conditional_povm(pa: Povm, pb_given: Sequence[Povm]) -> Povm:
    """Elements M_A^x (x) M_B^{y|x}: A measures, B's POVM depends on x (LOCC1,
    one-way A to B)."""
    if len(pb_given) != len(pa.elements):
        raise StructuralError(
            f"need one B-side POVM per A outcome: {len(pb_given)} vs {len(pa.elements)}"
        )
    elements = []
    labels = []
    projective = pa.is_projective()
    for x, ea, pb in zip(pa.labels, pa.elements, pb_given):
        projective = projective and pb.is_projective()
        for y, eb in zip(pb.labels, pb.elements):
            elements.append(_ab_product(ea, eb))
            labels.append((x, y))
    construction = {"form": "conditional", "projective": projective}
    return Povm(elements, labels, "LOCC1", construction, validate=False)


def binary_from_operator(e, labels=("yes", "no")) -> Povm:
    """Two-outcome test {E, 1-E} for 0 <= E <= 1.

    Tagged PPT when both elements have PSD partial transpose (checked
    numerically), ALL otherwise.
    """
    e = as_op(e)
    w = eig_herm(e).eigenvalues
    if float(w[0]) < -PSD_TOL or float(w[-1]) > 1.0 + PSD_TOL:
        raise DomainError(
            f"binary test operator needs 0 <= E <= 1, spectrum [{w[0]:.3e}, {w[-1]:.3e}]"
        )
    comp = HermitianOp(np.eye(e.dim) - e.data, e.dims, e.b_indices)
    tag = "ALL"
    if e.b_indices:
        pt_ok = all(
            float(eig_herm(partial_transpose(m)).eigenvalues[0]) >= -PSD_TOL
            for m in (e, comp)
        )
        if pt_ok:
            tag = "PPT"
    return Povm([e, comp], list(labels), tag, {"form": "binary"}, validate=False)


def isotropic_binary_measurement(d: int) -> Povm:
    """The PPT test {Phi + (1-Phi)/(d+1), d(1-Phi)/(d+1)}; on isotropic states
    it reproduces the statistics {p + (1-p)/(d+1), d(1-p)/(d+1)}."""
    from .states import phi_op

    d = int(d)
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    phi = phi_op(d)
    rest = np.eye(d * d) - phi.data
    e1 = HermitianOp(phi.data + rest / (d + 1.0), (d, d), (1,))
    povm = binary_from_operator(e1, labels=("in", "out"))
    if povm.class_tag != "PPT":  # pragma: no cover - construction guarantees PPT
        raise ValidationError("isotropic binary measurement failed its PPT check")
    return Povm(
        povm.elements,
        povm.labels,
        "PPT",
        {"form": "binary", "family": "isotropic_binary", "d": d},
        validate=False,
    )


def povm_tensor_power(povm: Povm, n: int) -> Povm:
    """n-fold product measurement; the class tag survives under the block
    bipartition (all A factors vs all B factors)."""
    n = int(n)
    if n < 1:
        raise DomainError(f"tensor power needs n >= 1, got {n}")
    if n == 1:
        return povm
    elements = list(povm.elements)
    labels = [(lab,) for lab in povm.labels]
    for _ in range(n - 1):
        elements = [tensor(e, f) for e in elements for f in povm.elements]
        labels = [lab + (m,) for lab in labels for m in povm.labels]
    construction = {"form": "tensor_power", "n": n, "of": povm.construction}
    return Povm(elements, labels, povm.class_tag, construction, validate=False)


def _check_ppt_elements(povm: Povm) -> ClassCheck:
    if not povm.b_indices:
        return ClassCheck(False, "no bipartition declared")
    for lab, e in zip(povm.labels, povm.elements):
        wmin = float(eig_herm(partial_transpose(e)).eigenvalues[0])
        if wmin < -PSD_TOL:
            return ClassCheck(
                False,
                f"element {lab!r} has negative partial transpose (min eig {wmin:.3e})",
            )
    return ClassCheck(True)


def class_check(povm: Povm, cls: str) -> ClassCheck:
    """Decide membership of ``povm`` in class ``cls``.

    PPT is checked numerically.  LO / LOCC1 and the projective variants are
    decided from the construction record (P-variants additionally require
    idempotent elements).  SEP passes only when the tag or record certifies a
    separable decomposition; otherwise it is undecidable.
    """
    if cls not in CLASS_TAGS:
        raise DomainError(f"unknown measurement class {cls!r}")
    if cls == "ALL":
        return ClassCheck(True)
    if cls == "PPT":
        return _check_ppt_elements(povm)

    if class_leq(povm.class_tag, cls):
        if cls in ("P-LO", "P-LOCC1") and not povm.is_projective():
            return ClassCheck(False, "elements are not projectors")
        return ClassCheck(True)

    rec = povm.construction or {}
    form = rec.get("form")
    if cls == "SEP":
        if form in ("product", "conditional", "sep_sum"):
            return ClassCheck(True)
        return ClassCheck(False, "undecidable: no separable construction record")
    if cls in ("LO", "P-LO"):
        ok_form = form == "product"
    else:  # LOCC1, P-LOCC1
        ok_form = form in ("product", "conditional")
    if not ok_form:
        return ClassCheck(False, f"construction record {form!r} does not certify {cls}")
    if cls in ("P-LO", "P-LOCC1") and not povm.is_projective():
        return ClassCheck(False, "elements are not projectors")
    return ClassCheck(True)
