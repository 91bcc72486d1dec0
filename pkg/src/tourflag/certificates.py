"""Loading and exact verification of the semidefinite upper-bound certificates.

A certificate fixes a target 5-vertex tournament, a level ell (= 5 for all
shipped files) and a list of blocks.  Each block carries a type, a flag
size ell_t, the flag basis in its reference header order and an exact
rational PSD matrix Q.  The induced correction for a host T' of size ell is

    c(Q; T') = sum over basis flags F of size ell with F|0 = T' of
               q_sigma(F) * sum_{F1,F2} Q[F1][F2] * p(F1, F2; F)

and the verified bound is max over hosts of p(target; T') + sum_t c(Q_t; T').

Verification is decision-only: Q matrices are checked PSD by two
independent exact methods, their characteristic polynomials are compared
against the shipped expansions, and the slack table must attain the
claimed bound exactly.  Nothing here solves the underlying SDP.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .arith import (
    Matrix,
    QuadraticValue,
    char_poly,
    eigencheck,
    format_rational,
    is_psd,
    is_symmetric,
    matrix_from_strings,
    parse_rational,
    psd_by_charpoly,
    rank1_check,
)
from .flags import (
    TYPES,
    Flag,
    enumerate_flags,
    joint_density,
    named_flag,
    q_sigma,
)
from .flags import density as tournament_density
from .tournaments import (
    Tournament,
    canonical_form,
    catalog_lookup,
    enumerate_tournaments,
    reverse_lookup,
)


@dataclass(frozen=True)
class CertificateBlock:
    type_name: str
    ell_t: int
    basis: tuple[Flag, ...]
    basis_names: tuple[str, ...]
    q: Matrix
    expected_char_poly: tuple[Fraction, ...] | None = None
    rank1: tuple[Fraction, tuple[Fraction, ...]] | None = None
    eigen: tuple[tuple[tuple[QuadraticValue, ...], QuadraticValue], ...] = ()

    @property
    def sigma_size(self) -> int:
        return TYPES[self.type_name].size


@dataclass(frozen=True)
class Certificate:
    target_name: str
    target: Tournament
    ell: int
    claimed_bound: Fraction
    blocks: tuple[CertificateBlock, ...]
    expected_slack: dict[str, Fraction] | None = None
    source: str = ""


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    certificate: Certificate
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, passed, detail))

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            suffix = f"  ({c.detail})" if c.detail else ""
            out.append(f"[{status}] {c.name}{suffix}")
        return out


# --- loading ---------------------------------------------------------------------


def builtin_cert_dir() -> Path:
    """Directory with the five shipped certificate files."""
    return Path(str(resources.files("tourflag").joinpath("data/certs")))


def _parse_quadratic(obj: dict) -> QuadraticValue:
    return QuadraticValue(
        parse_rational(obj["a"]), parse_rational(obj["b"]), int(obj["d"])
    )


def quadratic_to_json(x: QuadraticValue) -> dict:
    return {"a": format_rational(x.a), "b": format_rational(x.b), "d": x.d}


def load_certificate(path: str | Path) -> Certificate:
    """Parse and structurally validate a certificate file.

    Raises ValueError on malformed content (bad JSON, dimension mismatch,
    unknown flag name, inadmissible block size); OSError on unreadable files.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"certificate parse error in {path}: {exc}") from exc

    try:
        target_name = raw["target"]
        ell = int(raw["ell"])
        claimed = parse_rational(raw["claimed_bound"])
        blocks_raw = raw["blocks"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"certificate {path} is missing required fields: {exc}") from exc

    target = catalog_lookup(target_name)
    if target.n > ell:
        raise ValueError(f"target {target_name} larger than ell={ell}")

    blocks = []
    for idx, braw in enumerate(blocks_raw):
        type_name = braw["type"]
        if type_name not in TYPES or type_name == "0":
            raise ValueError(f"block {idx}: unknown type {type_name!r}")
        k = TYPES[type_name].size
        ell_t = int(braw["ell_t"])
        if 2 * ell_t > ell + k:
            raise ValueError(
                f"block {idx}: inadmissible ell_t={ell_t} for type {type_name} at ell={ell}"
            )
        names = tuple(braw["basis"])
        try:
            basis = tuple(named_flag(name) for name in names)
        except KeyError as exc:
            raise ValueError(f"block {idx}: {exc}") from exc
        expected_basis = set(enumerate_flags(type_name, ell_t))
        if set(basis) != expected_basis or len(set(basis)) != len(basis):
            raise ValueError(
                f"block {idx}: basis is not the full flag basis F^{type_name}_{ell_t}"
            )
        q = matrix_from_strings(braw["Q"])
        if len(q) != len(basis) or any(len(row) != len(basis) for row in q):
            raise ValueError(f"block {idx}: Q dimension does not match basis size")
        if not is_symmetric(q):
            raise ValueError(f"block {idx}: Q is not symmetric")
        expected_cp = None
        if "char_poly" in braw:
            expected_cp = tuple(parse_rational(x) for x in braw["char_poly"])
            if len(expected_cp) != len(basis) + 1:
                raise ValueError(f"block {idx}: char_poly has wrong degree")
        rank1 = None
        if "rank1" in braw:
            scale = parse_rational(braw["rank1"]["c"])
            vec = tuple(parse_rational(x) for x in braw["rank1"]["v"])
            if len(vec) != len(basis):
                raise ValueError(f"block {idx}: rank-1 witness has wrong length")
            rank1 = (scale, vec)
        eigen = []
        for item in braw.get("eigen", ()):
            vec = tuple(_parse_quadratic(x) for x in item["v"])
            lam = _parse_quadratic(item["lambda"])
            if len(vec) != len(basis):
                raise ValueError(f"block {idx}: eigenvector has wrong length")
            eigen.append((vec, lam))
        blocks.append(
            CertificateBlock(
                type_name=type_name,
                ell_t=ell_t,
                basis=basis,
                basis_names=names,
                q=q,
                expected_char_poly=expected_cp,
                rank1=rank1,
                eigen=tuple(eigen),
            )
        )

    expected_slack = None
    if "expected_slack" in raw:
        expected_slack = {
            name: parse_rational(val) for name, val in raw["expected_slack"].items()
        }
        have = {canonical_form(catalog_lookup(name)) for name in expected_slack}
        need = set(enumerate_tournaments(ell))
        if have != need:
            raise ValueError("expected_slack does not cover the size-ell classes exactly")

    return Certificate(
        target_name=target_name,
        target=target,
        ell=ell,
        claimed_bound=claimed,
        blocks=tuple(blocks),
        expected_slack=expected_slack,
        source=str(path),
    )


# --- the correction coefficients --------------------------------------------------


def c_coefficient(block: CertificateBlock, host: Tournament) -> Fraction:
    """c(Q; host) for a single block, host of size ell.

    Sums q_sigma(F) * sum_{F1,F2} Q[F1][F2] p(F1,F2;F) over basis flags F
    of size ell whose underlying tournament is the host.
    """
    ell = host.n
    host_c = canonical_form(host)
    total = Fraction(0)
    for f in enumerate_flags(block.type_name, ell):
        if canonical_form(f.base) != host_c:
            continue
        inner = Fraction(0)
        for i, f1 in enumerate(block.basis):
            for j, f2 in enumerate(block.basis):
                if block.q[i][j] == 0:
                    continue
                inner += block.q[i][j] * joint_density((f1, f2), f)
        if inner:
            total += q_sigma(f) * inner
    return total


def slack_table(cert: Certificate) -> dict[str, Fraction]:
    """p(target; T') + sum of block corrections for every T' of size ell,
    keyed by catalog name, in catalog order."""
    hosts = enumerate_tournaments(cert.ell)
    named = sorted(
        ((reverse_lookup(t) or t.encode(), t) for t in hosts),
        key=lambda item: _host_sort_key(item[0]),
    )
    out: dict[str, Fraction] = {}
    for name, host in named:
        value = tournament_density(cert.target, host)
        for block in cert.blocks:
            value += c_coefficient(block, host)
        out[name] = value
    return out


def _host_sort_key(name: str):
    if name.startswith("T5^"):
        return (0, int(name[3:]))
    return (1, name)


def extremal_support(cert: Certificate) -> set[str]:
    """Hosts whose slack value attains the bound: the only size-ell
    tournaments that may appear with positive density in an extremal
    sequence (all others are excluded)."""
    table = slack_table(cert)
    bound = max(table.values())
    return {name for name, value in table.items() if value == bound}


# --- verification ------------------------------------------------------------------


def verify(
    cert: Certificate,
    charpoly: bool = True,
    tables: bool = True,
    bound: bool = True,
) -> VerificationReport:
    """Exact verification: PSD by two independent methods always; shipped
    characteristic polynomials, bound attainment and the expected slack
    table selectable (all on by default)."""
    report = VerificationReport(cert)
    for block in cert.blocks:
        label = f"Q({cert.target_name},{block.type_name})"
        psd = is_psd(block.q)
        agree = psd_by_charpoly(block.q)
        if psd.psd and agree:
            report.add(f"{label} positive semidefinite", True, "LDL^T and sign rule")
        elif psd.psd != agree:
            report.add(
                f"{label} positive semidefinite",
                False,
                "internal disagreement between LDL^T and the sign rule",
            )
        else:
            witness = ", ".join(format_rational(x) for x in psd.witness)
            report.add(
                f"{label} positive semidefinite", False, f"v^T Q v < 0 for v = ({witness})"
            )
        if charpoly and block.expected_char_poly is not None:
            computed = char_poly(block.q)
            match = computed == block.expected_char_poly
            detail = "" if match else (
                "computed "
                + ", ".join(format_rational(x) for x in computed)
            )
            report.add(f"{label} characteristic polynomial", match, detail)
    if bound or tables:
        table = slack_table(cert)
        maxval = max(table.values())
        argmax = sorted(name for name, v in table.items() if v == maxval)
        report.add(
            f"max slack equals claimed bound {format_rational(cert.claimed_bound)}",
            maxval == cert.claimed_bound,
            f"max = {format_rational(maxval)} at {', '.join(argmax)}",
        )
        if tables and cert.expected_slack is not None:
            mismatches = [
                f"{name}: computed {format_rational(table[name])}"
                f" expected {format_rational(expected)}"
                for name, expected in cert.expected_slack.items()
                if table[name] != expected
            ]
            report.add(
                "slack table matches shipped table entrywise",
                not mismatches,
                "; ".join(mismatches[:3]),
            )
    return report


def verify_rank1(cert: Certificate) -> VerificationReport:
    """Check every declared Q = c v v^T decomposition entrywise."""
    report = VerificationReport(cert)
    for block in cert.blocks:
        if block.rank1 is None:
            continue
        scale, vec = block.rank1
        ok = rank1_check(block.q, scale, vec)
        report.add(
            f"Q({cert.target_name},{block.type_name}) = {format_rational(scale)} * v v^T",
            ok,
            "" if ok else "entrywise mismatch",
        )
    return report


def verify_eigen(cert: Certificate) -> VerificationReport:
    """Check every declared eigenpair exactly in its quadratic field."""
    report = VerificationReport(cert)
    for block in cert.blocks:
        for vec, lam in block.eigen:
            ok = eigencheck(block.q, vec, lam)
            report.add(
                f"Q({cert.target_name},{block.type_name}) eigenpair lambda = {lam}",
                ok,
                "" if ok else "M v != lambda v",
            )
    return report
