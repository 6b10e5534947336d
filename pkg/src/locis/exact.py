"""Exact optimization and a-posteriori verification.

The exact maximizer is a branch-and-bound over edge bitmasks; it is the
ground truth the solvers are measured against.  Every exact routine takes a
size cap and refuses larger inputs with CapExceededError: callers that know
their instance is benign (say, all-free systems) can pass a bigger cap
explicitly.  The default cap comes from the LOCIS_EXACT_CAP environment
variable, falling back to 22 edges.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from .edgeset import EMPTY, EdgeSet, union_all
from .errors import CapExceededError
from .model import Instance
from .algorithms import SolveTrace
from . import kernels

DEFAULT_CAP = 22


def _cap(cap: Optional[int]) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("LOCIS_EXACT_CAP")
    return int(env) if env else DEFAULT_CAP


@dataclass
class ExactResult:
    opt_size: int
    witness: EdgeSet
    nodes_explored: int


def max_independent(inst: Instance, F: Optional[EdgeSet] = None,
                    cap: Optional[int] = None) -> ExactResult:
    """Largest independent subset of F (default: all edges), exactly."""
    if F is None:
        F = inst.edge_set
    elif not F <= inst.edge_set:
        raise ValueError("query outside the instance's edges")
    limit = _cap(cap)
    if len(F) > limit:
        raise CapExceededError(
            f"exact search needs at most {limit} edges, got {len(F)}; "
            "raise the cap to force it")
    best, nodes = kernels.global_max(inst.kernel(), F.mask)
    witness = EdgeSet(best)
    return ExactResult(len(witness), witness, nodes)


def naive_max_independent(inst: Instance, F: Optional[EdgeSet] = None,
                          cap: int = 16) -> ExactResult:
    """Reference maximizer: scan every subset of F through the instance's
    own membership test.  Slow on purpose; exists to cross-check the
    branch-and-bound."""
    if F is None:
        F = inst.edge_set
    if len(F) > cap:
        raise CapExceededError(f"naive scan capped at {cap} edges")
    bits = list(F.ids())
    best = EMPTY
    count = 0
    for cm in range(1 << len(bits)):
        count += 1
        J = EdgeSet.from_ids(bits[i] for i in range(len(bits)) if cm >> i & 1)
        if len(J) > len(best) and inst.independent(J):
            best = J
    return ExactResult(len(best), best, count)


@dataclass
class RatioReport:
    algorithm: str
    i_size: int
    opt: int
    ratio: Optional[Fraction]
    guarantee: Optional[Fraction]
    guarantee_ok: Optional[bool]
    certificate: Optional[Fraction]
    certificate_ok: Optional[bool]
    passed: bool
    witness: EdgeSet
    nodes: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        rat = "-" if self.ratio is None else f"{self.ratio} ({float(self.ratio):.4f})"
        guar = "none" if self.guarantee is None else \
            f"{self.guarantee} ({float(self.guarantee):.4f})"
        cert = "none" if self.certificate is None else \
            f"{self.certificate} ({float(self.certificate):.4f})"
        return (f"{status} {self.algorithm}: |I|={self.i_size} |OPT|={self.opt} "
                f"ratio={rat} bound={guar} certified={cert}")


def verify_ratio(trace: SolveTrace, inst: Instance,
                 cap: Optional[int] = None) -> RatioReport:
    """Measure a solve against the exact optimum.

    Checks the a-priori guarantee (when the trace carries one) and the
    certified bound: oracle factor plus the best packing of the residual
    divided by |I|.  The residual certificate holds whenever the trace
    invariants do, so a failure here means a real bug.
    """
    res = max_independent(inst, cap=cap)
    opt = res.opt_size
    isz = len(trace.I)
    if isz == 0:
        passed = opt == 0
        return RatioReport(trace.algorithm, 0, opt, None, trace.bound, None,
                           None, None, passed, res.witness, res.nodes_explored)
    ratio = Fraction(opt, isz)
    resid = trace.residual
    opt_r = max_independent(inst, resid, cap=cap).opt_size if resid else 0
    cert = trace.alpha + Fraction(opt_r, isz)
    certificate_ok = ratio <= cert
    guarantee_ok = None if trace.bound is None else ratio <= trace.bound
    passed = certificate_ok and guarantee_ok is not False
    return RatioReport(trace.algorithm, isz, opt, ratio, trace.bound,
                       guarantee_ok, cert, certificate_ok, passed, res.witness,
                       res.nodes_explored)


def sweep_certificate(trace: SolveTrace, inst: Instance,
                      cap: Optional[int] = None) -> Fraction:
    """Per-vertex certified ratio for the sweep solvers: the worst ratio of
    the best packing inside P_v plus R_v to the part claimed at v.  Valid
    only when every nonempty residual piece sits at a vertex with a
    nonempty part, which both sweep solvers guarantee."""
    for v, Rv in trace.R.items():
        if Rv and v not in trace.P:
            raise ValueError(
                "certificate needs residual pieces only at claimed vertices")
    worst = Fraction(1)
    for v, Pv in trace.P.items():
        share = trace.I_parts.get(v, EMPTY)
        if not share:
            raise ValueError(f"claimed part at {v} produced no solution edges")
        Fv = Pv | trace.R.get(v, EMPTY)
        top = max_independent(inst, Fv, cap=cap).opt_size
        ratio = Fraction(top, len(share))
        if ratio > worst:
            worst = ratio
    return worst


def global_ksystem_param(inst: Instance, cap: int = 12) -> Fraction:
    """Exact k parameter of the whole instance's independence system."""
    m = inst.m
    if m > cap:
        raise CapExceededError(f"global k scan capped at {cap} edges, got {m}")
    if m == 0:
        return Fraction(1)
    table = kernels.global_table(inst.kernel(), inst.edge_set.mask)
    num, den = kernels.ksystem_scan(table, m)
    return Fraction(num, den)
