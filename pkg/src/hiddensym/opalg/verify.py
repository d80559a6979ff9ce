"""Checkable identities of the conserved-operator construction.

Each ``verify_*`` function returns a :class:`VerificationReport` holding a
list of :class:`Check` entries.  A check is either an identity that must
reduce to exactly zero, a control that must *not* reduce to zero, or a
plain claim computed by the engine (used by the ``f`` scan).  When a
:class:`Settings` carries an oracle configuration, every identity and
control is also evaluated numerically by :mod:`hiddensym.oracle`, at the
configured step and (optionally) at half of it.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

from .. import oracle as O
from ..coeff import A, I, M, ScalarCoeff, format_coeff
from . import catalog as C
from . import expr as E
from .canonical import OperatorExpr, format_operator, iter_terms, reduce
from .expr import Expr, Mat, RPow, Scalar, add, anticommutator, commutator, mul

ZERO_V = "ZERO"
NONZERO_V = "NONZERO"

# longest residual text kept in a report; longer ones are cut with a term count
RESIDUAL_TEXT_LIMIT = 2000


@dataclass(frozen=True)
class Settings:
    """How checks are run.  ``oracle=None`` skips the numerical cross-check."""

    oracle: O.TestConfig | None = None
    step_check: bool = True
    mutation: str | None = None

    def pair(self) -> Tuple[Expr, Expr]:
        return C.mutated_pair(self.mutation)


@dataclass
class Check:
    label: str
    kind: str  # "zero", "nonzero" or "claim"
    passed: bool
    residual: str | None = None
    n_terms: int = 0
    oracle: List[O.OracleOutcome] = field(default_factory=list)
    note: str | None = None

    @property
    def oracle_passed(self) -> bool:
        return all(o.passed for o in self.oracle)

    def as_dict(self) -> dict:
        out = {"label": self.label, "kind": self.kind, "passed": self.passed}
        if self.residual is not None:
            out["residual"] = self.residual
            out["n_terms"] = self.n_terms
        if self.oracle:
            out["oracle"] = [o.as_dict() for o in self.oracle]
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    name: str
    anchor: str
    checks: List[Check] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def verdict(self) -> str:
        """``ZERO`` iff every asserted identity reduced to zero."""
        ok = all(c.passed for c in self.checks if c.kind == "zero")
        return ZERO_V if ok else NONZERO_V

    @property
    def oracle_verdict(self) -> str | None:
        outcomes = [o for c in self.checks for o in c.oracle]
        if not outcomes:
            return None
        return "ORACLE_PASS" if all(o.passed for o in outcomes) else "ORACLE_FAIL"

    @property
    def passed(self) -> bool:
        return all(c.passed and c.oracle_passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not (c.passed and c.oracle_passed)]

    def as_dict(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "verdict": self.verdict,
            "oracle_verdict": self.oracle_verdict,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.details:
            out["details"] = self.details
        if timings:
            out["wall_time"] = round(self.wall_time, 4)
        return out


def residual_text(x: OperatorExpr) -> str:
    text = format_operator(x)
    if len(text) > RESIDUAL_TEXT_LIMIT:
        text = text[:RESIDUAL_TEXT_LIMIT] + f" ... ({len(x)} terms)"
    return text


class _Builder:
    """Accumulates checks for one report."""

    def __init__(self, name: str, anchor: str, settings: Settings | None):
        self.settings = settings or Settings()
        self.report = VerificationReport(name, anchor)
        self._t0 = time.perf_counter()

    def _oracle(self, tree: Expr, expect_zero: bool) -> List[O.OracleOutcome]:
        cfg = self.settings.oracle
        if cfg is None:
            return []
        if self.settings.step_check:
            return O.step_robust(tree, cfg, expect_zero)
        return [O.check_identity(tree, cfg, expect_zero)]

    def identity(self, label: str, tree: Expr, expect_zero: bool = True,
                 oracle: bool = True, note: str | None = None) -> OperatorExpr:
        res = reduce(tree)
        zero = res.is_zero()
        chk = Check(label, "zero" if expect_zero else "nonzero", zero == expect_zero, note=note)
        if not zero:
            chk.residual = residual_text(res)
            chk.n_terms = len(res)
        if oracle:
            chk.oracle = self._oracle(tree, expect_zero)
        self.report.checks.append(chk)
        return res

    def claim(self, label: str, ok: bool, note: str | None = None) -> None:
        self.report.checks.append(Check(label, "claim", bool(ok), note=note))

    def done(self) -> VerificationReport:
        self.report.wall_time = time.perf_counter() - self._t0
        return self.report


def _s(c) -> Scalar:
    return Scalar(ScalarCoeff.coerce(c))


def _eps(i, j, k) -> int:
    return E.levi_civita(i, j, k)


# ---------------------------------------------------------------------------
# matrix-factor properties
# ---------------------------------------------------------------------------

def verify_clifford_properties(settings: Settings | None = None) -> VerificationReport:
    b = _Builder("clifford_properties", "beta commutes with K, gamma5 anticommutes with K", settings)
    beta, g5, K = C.BETA, C.GAMMA5, C.dirac_K()
    b.identity("[beta, K] = 0", commutator(beta, K))
    b.identity("{gamma5, K} = 0", anticommutator(g5, K))
    b.identity("{K, beta K (Sigma.p)} = 0", anticommutator(K, mul(beta, K, C.sigma_dot(C.P))))
    b.identity("beta^2 = 1", mul(beta, beta) - Mat("id"), oracle=False)
    b.identity("gamma5^2 = 1", mul(g5, g5) - Mat("id"), oracle=False)
    b.identity("{beta, gamma5} = 0", anticommutator(beta, g5), oracle=False)
    for i in (1, 2, 3):
        b.identity(f"Sigma_{i} = gamma5 alpha_{i}", C.SIGMA[i - 1] - mul(g5, C.ALPHA[i - 1]), oracle=False)
        b.identity(f"{{beta, alpha_{i}}} = 0", anticommutator(beta, C.ALPHA[i - 1]), oracle=False)
        b.identity(f"[gamma5, Sigma_{i}] = 0", commutator(g5, C.SIGMA[i - 1]), oracle=False)
        for j in (1, 2, 3):
            delta = 2 if i == j else 0
            b.identity(f"{{alpha_{i}, alpha_{j}}} = {delta}",
                       anticommutator(C.ALPHA[i - 1], C.ALPHA[j - 1]) - _s(delta) * Mat("id"), oracle=False)
    return b.done()


# ---------------------------------------------------------------------------
# theorem: {K, Sigma.V} = 0 for vector operators V with l.V = V.l = 0
# ---------------------------------------------------------------------------

def theorem_vector(name: str) -> E.Vector:
    if name == "rhat":
        return C.RHAT
    if name == "p":
        return C.P
    if name in ("A_LRL", "A"):
        return C.lrl_vector()
    if name == "zero":
        return (E.ZERO, E.ZERO, E.ZERO)
    raise KeyError(f"unknown vector {name!r}; choose rhat, p or A_LRL")


def _hypotheses(b: _Builder, V: E.Vector, tag: str) -> None:
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            rhs = add(*(mul(_s(I * _eps(i, j, k)), V[k - 1]) for k in (1, 2, 3) if _eps(i, j, k)))
            b.identity(f"[l_{i}, {tag}_{j}] - i eps_{i}{j}k {tag}_k = 0", commutator(C.L[i - 1], V[j - 1]) - rhs)
    b.identity(f"l.{tag} = 0", E.dot(C.L, V))
    b.identity(f"{tag}.l = 0", E.dot(V, C.L))
    lv = E.cross(C.L, V)
    vl = E.cross(V, C.L)
    for i in (1, 2, 3):
        b.identity(f"(l x {tag} + {tag} x l)_{i} - 2i {tag}_{i} = 0",
                   add(lv[i - 1], vl[i - 1], mul(_s(-2 * I), V[i - 1])))


def verify_theorem(V: str = "rhat", settings: Settings | None = None) -> VerificationReport:
    """Hypotheses and conclusion of the K-odd theorem for one vector operator."""
    vec = theorem_vector(V)
    b = _Builder(f"theorem_{V}", f"K anticommutes with Sigma.{V} when {V} is an l-vector orthogonal to l",
                 settings)
    _hypotheses(b, vec, V)
    sl1 = add(C.sigma_dot(C.L), E.ONE)
    sv = C.sigma_dot(vec)
    vxl = E.cross(vec, C.L)
    b.identity("(Sigma.l + 1)(Sigma.V) + Sigma.V + i Sigma.(V x l) = 0",
               add(mul(sl1, sv), sv, mul(_s(I), C.sigma_dot(vxl))))
    b.identity("{Sigma.l + 1, Sigma.V} = 0", anticommutator(sl1, sv))
    b.identity("{K, Sigma.V} = 0", anticommutator(C.dirac_K(), sv))
    b.identity("{K_p, sigma.V} = 0 (Pauli)", anticommutator(C.pauli_K(), C.sigma_dot(vec, C.PAULI)))
    return b.done()


def verify_useful_relation(V: str = "p", settings: Settings | None = None) -> VerificationReport:
    vec = theorem_vector(V)
    b = _Builder(f"useful_relation_{V}",
                 "K (Sigma.V) equals -i beta Sigma.(V x l - l x V)/2", settings)
    half = _s(ScalarCoeff.const(1) / 2)
    vxl = E.cross(vec, C.L)
    lxv = E.cross(C.L, vec)
    anti = tuple(mul(half, add(vxl[i], mul(_s(-1), lxv[i]))) for i in range(3))
    b.identity("K (Sigma.V) + i beta Sigma.((V x l - l x V)/2) = 0",
               add(mul(C.dirac_K(), C.sigma_dot(vec)), mul(_s(I), C.BETA, C.sigma_dot(anti))))
    return b.done()


# ---------------------------------------------------------------------------
# LRL vector and the three odd operators
# ---------------------------------------------------------------------------

def _odd_relation(lrl: E.Vector, sign: int = -1) -> Expr:
    """``Sigma.A - Sigma.rhat - sign*(i/(m a)) beta K (Sigma.p)``."""
    c = _s(ScalarCoeff.coerce(-sign) * I * C.INV_MA)
    return add(C.sigma_dot(lrl), mul(_s(-1), C.sigma_dot(C.RHAT)),
               mul(c, C.BETA, C.dirac_K(), C.sigma_dot(C.P)))


def verify_odd_relation(settings: Settings | None = None) -> VerificationReport:
    b = _Builder("odd_relation", "Sigma.A is a combination of Sigma.rhat and beta K (Sigma.p)", settings)
    b.identity("Sigma.A - Sigma.rhat + (i/(m a)) beta K (Sigma.p) = 0", _odd_relation(C.lrl_vector()))
    b.identity("control: printed sign +(i/(m a))", _odd_relation(C.lrl_vector(), sign=+1), expect_zero=False)
    b.identity("control: LRL second term dropped", _odd_relation(C.lrl_vector(drop_second=True)),
               expect_zero=False)
    b.identity("control: a -> 2a in the LRL side only",
               _odd_relation(C.lrl_vector(coupling=ScalarCoeff.monomial(2, 1, 0))), expect_zero=False)
    return b.done()


# ---------------------------------------------------------------------------
# A1, A2 and the determination of f
# ---------------------------------------------------------------------------

def _a1_rhs(x2_sign: int = 1) -> Expr:
    """``(2i/r) beta K gamma5 + x2_sign (a/r^2) K (Sigma.rhat)`` for ``x1 = x2 = 1``."""
    K = C.dirac_K()
    return add(mul(_s(2 * I), RPow(-1), C.BETA, K, C.GAMMA5),
               mul(_s(A * x2_sign), RPow(-2), K, C.sigma_dot(C.RHAT)))


def verify_A1_commutator(settings: Settings | None = None) -> VerificationReport:
    st = settings or Settings()
    _, H = st.pair()
    K = C.dirac_K()
    b = _Builder("A1_commutator", "[A1, H] splits into an antidiagonal x1 term and a diagonal x2 term", st)
    b.identity("x1 term: [Sigma.rhat, H] - (2i/r) beta K gamma5 = 0",
               commutator(C.sigma_dot(C.RHAT), H) - mul(_s(2 * I), RPow(-1), C.BETA, K, C.GAMMA5))
    b.identity("x2 term: i [K (Sigma.p), H] - (a/r^2) K (Sigma.rhat) = 0",
               mul(_s(I), commutator(mul(K, C.sigma_dot(C.P)), H))
               - mul(_s(A), RPow(-2), K, C.sigma_dot(C.RHAT)))
    a1 = C.a1_operator(x1=1, x2=1)
    full = commutator(a1, H)
    b.identity("[A1, H] - x1 (2i/r) beta K gamma5 - x2 (a/r^2) K (Sigma.rhat) = 0 (x1 = x2 = 1)",
               full - _a1_rhs(+1))
    b.identity("control: printed sign -x2 (a/r^2) K (Sigma.rhat)", full - _a1_rhs(-1), expect_zero=False)
    diag, anti = reduce(full).block_parts()
    b.identity("block-diagonal part of [A1, H] is nonzero", diag.to_expr(), expect_zero=False, oracle=False)
    b.identity("block-antidiagonal part of [A1, H] is nonzero", anti.to_expr(), expect_zero=False, oracle=False)
    b.claim("x1 term is block-antidiagonal, x2 term block-diagonal",
            reduce(mul(C.BETA, K, C.GAMMA5)).block_parts()[0].is_zero()
            and reduce(mul(K, C.sigma_dot(C.RHAT))).block_parts()[1].is_zero())
    return b.done()


def verify_A2_conserved(settings: Settings | None = None) -> VerificationReport:
    st = settings or Settings()
    a2, H = st.pair()
    K = C.dirac_K()
    b = _Builder("A2_conserved", "A2 commutes with H and anticommutes with K", st)
    b.identity("[K, H] = 0", commutator(K, H))
    b.identity("[A2, H] = 0", commutator(a2, H))
    b.identity("{A2, K} = 0", anticommutator(a2, K))
    for mut in sorted(C.MUTATIONS):
        m_a2, m_h = C.mutated_pair(mut)
        b.identity(f"control: [A2, H] under mutation {mut}", commutator(m_a2, m_h), expect_zero=False)
    return b.done()


def _coeff_table(x: OperatorExpr) -> Dict[Tuple, ScalarCoeff]:
    return {(s, idx): c for s, idx, c in iter_terms(x)}


def solve_linear(target: OperatorExpr, columns: Sequence[OperatorExpr]) -> List[ScalarCoeff] | None:
    """Coefficients ``x`` with ``target + sum x_k columns[k] = 0``, by pivot elimination.

    At each step some unsolved unknown must own a key where no other
    unsolved unknown appears and its coefficient is an invertible monomial;
    that equation fixes it.  Returns ``None`` when no pivot exists or the
    substituted residual is nonzero (then no solution exists).
    """
    tables = [_coeff_table(c) for c in columns]
    values: List[ScalarCoeff | None] = [None] * len(columns)
    current = target
    while any(v is None for v in values):
        rest = _coeff_table(current)
        open_ = [k for k, v in enumerate(values) if v is None]
        found = False
        for k in open_:
            others = [tables[j] for j in open_ if j != k]
            for key in sorted(tables[k]):
                c = tables[k][key]
                if c.is_monomial() and not any(key in o for o in others):
                    values[k] = -rest.get(key, ScalarCoeff()) / c
                    current = current + columns[k].scale(values[k])
                    found = True
                    break
            if found:
                break
        if not found:
            return None
    return values if current.is_zero() else None


def solve_f_ansatz(s: int, coupling=A, mass=M) -> dict:
    """Find ``x2, x3`` making ``[x1 Sigma.rhat + i x2 K Sigma.p + i x3 K gamma5 r^s, H]`` vanish (``x1 = 1``).

    The block-diagonal and antidiagonal groups of the residual are
    reported separately.
    """
    H = C.hamiltonian(coupling, mass)
    K = C.dirac_K()
    c1 = reduce(commutator(C.sigma_dot(C.RHAT), H))
    c2 = reduce(commutator(mul(_s(I), K, C.sigma_dot(C.P)), H))
    c3 = reduce(commutator(mul(_s(I), K, C.GAMMA5, RPow(s)), H))
    sol = solve_linear(c1, [c2, c3])
    if sol is None:
        return {"s": s, "solved": False, "x2": None, "x3": None}
    x2, x3 = sol
    diag, anti = (c1 + c2.scale(x2) + c3.scale(x3)).block_parts()
    return {"s": s, "solved": diag.is_zero() and anti.is_zero(), "x2": format_coeff(x2), "x3": format_coeff(x3),
            "diag_zero": diag.is_zero(), "antidiag_zero": anti.is_zero()}


def verify_f_determination(settings: Settings | None = None, s_range=range(-3, 2)) -> VerificationReport:
    b = _Builder("f_determination",
                 "x3 f(r) = c r^s makes [A2, H] vanish only for s = -1, x2 = -1/(m a), x3 c = 1/m", settings)
    scan = [solve_f_ansatz(s) for s in s_range]
    b.report.details["scan"] = scan
    solutions = [row for row in scan if row["solved"]]
    b.claim("exactly one exponent admits a solution", len(solutions) == 1)
    expect_x2, expect_x3 = format_coeff(-C.INV_MA), format_coeff(C.INV_M)
    for row in scan:
        if row["s"] == -1:
            b.claim("s = -1: both block groups vanish with x2 = -1/(m a), x3 c = 1/m",
                    row["solved"] and row["x2"] == expect_x2 and row["x3"] == expect_x3,
                    note=f"x2 = {row['x2']}, x3 c = {row['x3']}")
        else:
            b.claim(f"s = {row['s']}: no coefficients make both groups vanish", not row["solved"])
    b.identity("[A2(s = -1), H] = 0", commutator(C.a2_operator(), C.hamiltonian()))
    for s in (-2, 0):
        b.identity(f"control: [A2 with r^{s}, H] at the s = -1 coefficients",
                   commutator(C.a2_operator(r_power=s), C.hamiltonian()), expect_zero=False)
    b.identity("control: integration constant c0 = 1 added to f",
               commutator(C.a2_operator(extra_x3_constant=C.INV_M), C.hamiltonian()), expect_zero=False)
    return b.done()


# ---------------------------------------------------------------------------
# equivalent forms of A2
# ---------------------------------------------------------------------------

def verify_JL_equivalence(settings: Settings | None = None) -> VerificationReport:
    st = settings or Settings()
    a2, H = st.pair()
    b = _Builder("JL_equivalence", "A2 equals gamma5 (alpha.rhat) - (i/(m a)) K gamma5 (H - beta m)", st)
    b.identity("A2 - [gamma5 alpha.rhat - (i/(m a)) K gamma5 (H - beta m)] = 0",
               a2 - C.jl_form(hamiltonian_expr=H))
    b.identity("control: gamma5 applied to the whole brace", a2 - C.jl_literal_braces(), expect_zero=False)
    bm = mul(_s(M), C.BETA)
    b.identity("H -> beta m: JL form reduces to gamma5 alpha.rhat",
               C.jl_form(hamiltonian_expr=bm) - mul(C.GAMMA5, E.dot(C.ALPHA, C.RHAT)))
    b.identity("control: A2 - JL(H -> beta m) is nonzero", a2 - C.jl_form(hamiltonian_expr=bm), expect_zero=False)
    for i in (1, 2, 3):
        b.identity(f"Sigma_{i} - gamma5 alpha_{i} = 0", C.SIGMA[i - 1] - mul(C.GAMMA5, C.ALPHA[i - 1]), oracle=False)
    return b.done()


def verify_nonrel_limit(settings: Settings | None = None) -> VerificationReport:
    st = settings or Settings()
    a2, _ = st.pair()
    b = _Builder("nonrel_limit", "beta -> 1, gamma5 -> 0 turns A2 into Sigma.A", st)
    b.identity("A2 - rewritten form = 0", a2 - C.a2_rewritten())
    limit = C.a2_rewritten(beta=Mat("id"), gamma5=E.ZERO)
    b.identity("rewritten form at beta = 1, gamma5 = 0, minus Sigma.A = 0", limit - C.sigma_dot(C.lrl_vector()))
    third = mul(_s(I * C.INV_M), C.dirac_K(Mat("id")), E.ZERO, RPow(-1))
    b.identity("K gamma5 term vanishes at gamma5 = 0", third, oracle=False)
    lrl = C.lrl_vector()
    b.identity("l.A = 0", E.dot(C.L, lrl))
    b.identity("A.l = 0", E.dot(lrl, C.L))
    return b.done()


# ---------------------------------------------------------------------------
# superalgebra and the A^2 relation
# ---------------------------------------------------------------------------

def verify_superalgebra(settings: Settings | None = None) -> VerificationReport:
    st = settings or Settings()
    a2, _ = st.pair()
    K = C.dirac_K()
    b = _Builder("superalgebra", "A and AK anticommute; (AK)^2 = -A^2 K^2", st)
    ak = mul(a2, K)
    b.identity("A (AK) + (AK) A = 0", anticommutator(a2, ak))
    b.identity("(AK)(AK) + A^2 K^2 = 0", add(mul(ak, ak), mul(a2, a2, K, K)))
    bad = add(a2, C.BETA)
    bad_k = mul(bad, K)
    b.identity("control: A + beta (not K-odd) breaks identity (i)", anticommutator(bad, bad_k), expect_zero=False)
    b.identity("control: A + beta (not K-odd) breaks identity (ii)",
               add(mul(bad_k, bad_k), mul(bad, bad, K, K)), expect_zero=False)
    return b.done()


def _a_squared(a2: Expr, H: Expr) -> Expr:
    """``a^2 m^2 A^2 - a^2 m^2 - K^2 H^2 + m^2 K^2``."""
    a2m2 = _s(ScalarCoeff.monomial(1, 2, 2))
    K = C.dirac_K()
    return add(mul(a2m2, E.Pow(a2, 2)), mul(_s(-1), a2m2), mul(_s(-1), E.Pow(K, 2), E.Pow(H, 2)),
               mul(_s(ScalarCoeff.monomial(1, 0, 2)), E.Pow(K, 2)))


def verify_A_squared(settings: Settings | None = None) -> VerificationReport:
    st = settings or Settings()
    a2, H = st.pair()
    b = _Builder("A_squared", "a^2 m^2 A^2 = a^2 m^2 + K^2 (H^2 - m^2)", st)
    K = C.dirac_K()
    l2 = E.dot(C.L, C.L)
    b.identity("K^2 - (l^2 + Sigma.l + 1) = 0", E.Pow(K, 2) - add(l2, C.sigma_dot(C.L), E.ONE))
    b.identity("[K, H] = 0", commutator(K, H))
    b.identity("a^2 m^2 A^2 - a^2 m^2 - K^2 (H^2 - m^2) = 0", _a_squared(a2, H))
    b.identity("control: Coulomb term removed from H", _a_squared(a2, C.hamiltonian(coupling=0)),
               expect_zero=False)
    return b.done()


# ---------------------------------------------------------------------------
# symmetry breaking by a beta r^s perturbation
# ---------------------------------------------------------------------------

LAMB_LAMBDAS = (0, 1, 2, 3)


def lamb_commutator(s: int, lam, coupling=A, mass=M) -> Expr:
    """``[A2, H + lam beta r^s]`` with ``A2`` and ``H`` at the given coupling."""
    pert = mul(_s(lam), C.BETA, RPow(s))
    return commutator(C.a2_operator(coupling=coupling, mass=mass), C.hamiltonian(coupling, mass, perturbation=pert))


def verify_lamb_breaking(perturbation_power: int = -2, strength=1, settings: Settings | None = None,
                         lambdas: Sequence[int] = LAMB_LAMBDAS) -> VerificationReport:
    """Residual of ``[A2, H + lambda beta r^s]``.

    The strength is handled exactly: the residual is computed at several
    rational values of lambda and checked to equal ``lambda * R1``, where
    ``R1`` is the residual at lambda = 1.  Oracle norms at ``strength`` and
    ``2 * strength`` give the measured linearity ratio.
    """
    s = perturbation_power
    if not -3 <= s <= 1:
        raise ValueError(f"perturbation power {s} outside [-3, 1]")
    st = settings or Settings()
    b = _Builder("lamb_breaking", f"a beta r^{s} term in H spoils [A2, H] = 0", st)
    r1 = b.identity(f"[A2, H + beta r^{s}] is nonzero", lamb_commutator(s, 1), expect_zero=False)
    b.report.details["residual_lambda_1"] = residual_text(r1)
    b.report.details["perturbation_power"] = s
    for lam in lambdas:
        r = reduce(lamb_commutator(s, lam))
        b.claim(f"lambda = {lam}: residual equals lambda * R1", (r - r1.scale(ScalarCoeff.const(lam))).is_zero())
    b.identity("lambda = 0: residual is zero", lamb_commutator(s, 0))
    two_a = ScalarCoeff.monomial(2, 1, 0)
    shift = commutator(C.a2_operator(coupling=two_a), C.hamiltonian(coupling=two_a))
    b.identity("pure 1/r shift a -> 2a with matching A2 stays conserved", shift)
    if st.oracle is not None:
        n1 = O.residual_norm(lamb_commutator(s, strength), st.oracle)
        n2 = O.residual_norm(lamb_commutator(s, 2 * ScalarCoeff.coerce(strength)), st.oracle)
        ratio = n2 / n1 if n1 else float("inf")
        b.report.details["oracle_norm_lambda"] = float(f"{n1:.6e}")
        b.report.details["oracle_norm_2lambda"] = float(f"{n2:.6e}")
        b.report.details["oracle_ratio"] = float(f"{ratio:.9f}")
        b.claim("oracle residual ratio at 2 lambda / lambda is 2.0 +- 1e-3", abs(ratio - 2.0) <= 1e-3)
    return b.done()


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

SUITE: Dict[str, Callable[[Settings], VerificationReport]] = {
    "clifford_properties": verify_clifford_properties,
    "theorem_rhat": lambda st: verify_theorem("rhat", st),
    "theorem_p": lambda st: verify_theorem("p", st),
    "theorem_A_LRL": lambda st: verify_theorem("A_LRL", st),
    "useful_relation_rhat": lambda st: verify_useful_relation("rhat", st),
    "useful_relation_p": lambda st: verify_useful_relation("p", st),
    "useful_relation_zero": lambda st: verify_useful_relation("zero", st),
    "odd_relation": verify_odd_relation,
    "A1_commutator": verify_A1_commutator,
    "A2_conserved": verify_A2_conserved,
    "f_determination": verify_f_determination,
    "JL_equivalence": verify_JL_equivalence,
    "nonrel_limit": verify_nonrel_limit,
    "superalgebra": verify_superalgebra,
    "A_squared": verify_A_squared,
    "lamb_breaking": lambda st: verify_lamb_breaking(-2, 1, st),
}


def suite_names() -> Tuple[str, ...]:
    return tuple(sorted(SUITE))


def run_suite(names: Sequence[str] | None = None, settings: Settings | None = None) -> List[VerificationReport]:
    """Run the named checks (all by default); reports come back sorted by name."""
    st = settings or Settings()
    chosen = suite_names() if not names else tuple(sorted(set(names)))
    unknown = [n for n in chosen if n not in SUITE]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    if st.mutation is not None and st.mutation not in C.MUTATIONS:
        raise KeyError(f"unknown mutation {st.mutation!r}")
    return [SUITE[n](st) for n in chosen]
