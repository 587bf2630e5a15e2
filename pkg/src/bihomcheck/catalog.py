"""The two-dimensional example catalog: 26 entries shipped as data files,
a skew-symmetry completion solver for the bracket slots the listings leave
implicit, and a verifier that produces a per-axiom report for each entry.

Completion convention: unlisted PRODUCT constants are zero; unlisted BRACKET
constants are solved from the twisted skew-symmetry equations
br(b(ei), a(ej)) + br(b(ej), a(ei)) = 0 with free unknowns set to zero. When
the listed constants make that system unsolvable the entry ships with a null
completion and is verified with zero-forced unlisted constants, which the
report then describes honestly (the entry stays report-only).

Entries with printed parameter constraints carry branch data: substitutions
that solve the constraint for one parameter (or pin a linear factor), so
symbolic verification runs on every branch of the constraint variety.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping, Sequence

from .bundle import AlgebraBundle, Ring
from .engine import Verdict, check_identity
from .errors import Inconsistent, UnknownEntry
from .linear import BasisSpace, LinMap, MultiOp, Vector
from .rng import SplitRng
from .scalars import Poly, Scalar, parse_scalar
from .structures import IDENTITIES, Report, _predicate_verdict

# per-axiom columns of the catalog report, in report order
DEFAULT_AXES = (
    ("predicate", ("commute", "a", "b")),
    ("predicate", ("multiplicative", "a", "mul")),
    ("predicate", ("multiplicative", "b", "mul")),
    ("predicate", ("multiplicative", "a", "br")),
    ("predicate", ("multiplicative", "b", "br")),
    ("identity", "comm"),
    ("identity", "assoc"),
    ("identity", "skew"),
    ("identity", "jacobi"),
    ("identity", "tcompat"),
)

AXIS_IDS = tuple(
    f"{kind[1][0]}({','.join(kind[1][1:])})" if kind[0] == "predicate" else kind[1]
    for kind in DEFAULT_AXES
)


@dataclass
class CatalogEntry:
    entry_id: int
    case: str
    status: str  # "asserted-pass" | "report-only"
    bundle: AlgebraBundle  # given constants only (bracket not yet completed)
    given_br_slots: tuple  # slots whose bracket constants the listing pins
    completion: dict | None  # slot -> coordinate tuple (Scalars), or None
    branches: tuple  # of {param: coeff text}; empty means one trivial branch
    notes: tuple = ()

    def completed_bundle(self) -> AlgebraBundle:
        """Given constants plus the stored completion (zero-forced when the
        completion is null)."""
        if not self.completion:
            return self.bundle
        br = self.bundle.ops["br"]
        constants = dict(br.constants)
        for slot, coords in self.completion.items():
            constants[slot] = coords
        ops = dict(self.bundle.ops)
        ops["br"] = MultiOp(br.space, br.params, 2, constants)
        return self.bundle.replace(ops=ops)

    def branch_bundles(self):
        """(description, bundle) per constraint branch; symbolic verification
        must pass on every branch for the entry to count as passing."""
        base = self.completed_bundle()
        if not self.branches:
            return [("generic", base)]
        out = []
        for subs in self.branches:
            remaining = tuple(p for p in base.ring.params if p not in subs)
            values = {
                name: parse_scalar(text, remaining) for name, text in subs.items()
            }
            desc = ", ".join(f"{n} = {t}" for n, t in subs.items())
            out.append((desc, base.substitute_params(values, remaining)))
        return out


# ---------------------------------------------------------------------------
# skew completion
# ---------------------------------------------------------------------------


def _solve_linear(rows, rhs, params):
    """Gaussian elimination over the Scalar field with free unknowns zeroed.
    Raises Inconsistent when a zero row has nonzero right-hand side."""
    n_unknowns = len(rows[0]) if rows else 0
    rows = [list(r) for r in rows]
    rhs = list(rhs)
    pivots = []  # (row, col)
    row = 0
    for col in range(n_unknowns):
        pivot = next((r for r in range(row, len(rows)) if not rows[r][col].is_zero()), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        rhs[row], rhs[pivot] = rhs[pivot], rhs[row]
        p = rows[row][col]
        rows[row] = [c / p for c in rows[row]]
        rhs[row] = rhs[row] / p
        for r in range(len(rows)):
            if r != row and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [rows[r][j] - f * rows[row][j] for j in range(n_unknowns)]
                rhs[r] = rhs[r] - f * rhs[row]
        pivots.append((row, col))
        row += 1
    for r in range(row, len(rows)):
        if not rhs[r].is_zero():
            raise Inconsistent(f"0 = {rhs[r].text()}")
    solution = [Scalar.zero(params)] * n_unknowns
    for r, col in pivots:
        solution[col] = rhs[r]
    return solution


def solve_skew_completion(
    given: Mapping[tuple, Sequence[Scalar]],
    given_slots,
    alpha: LinMap,
    beta: LinMap,
) -> dict:
    """Solve br(b(ei), a(ej)) + br(b(ej), a(ei)) = 0 for the bracket constants
    of every slot not in given_slots, treating them as unknowns over the
    matrices' ring; free unknowns are set to zero.

    Works symbolically (generic parameters) or numerically depending on the
    ring the inputs live over."""
    params = alpha.params
    dim = alpha.space.dim
    given_slots = set(tuple(s) for s in given_slots)
    unknown_slots = [
        (i, j)
        for i in range(dim)
        for j in range(dim)
        if (i, j) not in given_slots
    ]
    col_of = {}
    for slot in unknown_slots:
        for comp in range(dim):
            col_of[(slot, comp)] = len(col_of)
    zero = Scalar.zero(params)

    def known_value(slot) -> Sequence[Scalar]:
        vec = given.get(slot)
        if vec is None:
            return (zero,) * dim
        return vec

    rows, rhs = [], []
    for i in range(dim):
        for j in range(i, dim):
            # br(b(ei), a(ej)) + br(b(ej), a(ei)), expanded bilinearly
            coeff_cols = [dict() for _ in range(dim)]
            const = [zero] * dim
            for p in range(dim):
                for q in range(dim):
                    weight = beta.rows[p][i] * alpha.rows[q][j] + beta.rows[p][j] * alpha.rows[q][i]
                    if weight.is_zero():
                        continue
                    if (p, q) in given_slots:
                        vec = known_value((p, q))
                        for comp in range(dim):
                            if not vec[comp].is_zero():
                                const[comp] = const[comp] + weight * vec[comp]
                    else:
                        for comp in range(dim):
                            col = col_of[((p, q), comp)]
                            bucket = coeff_cols[comp]
                            bucket[col] = bucket.get(col, zero) + weight
            for comp in range(dim):
                row = [zero] * len(col_of)
                for col, w in coeff_cols[comp].items():
                    row[col] = w
                if any(not c.is_zero() for c in row) or not const[comp].is_zero():
                    rows.append(row)
                    rhs.append(-const[comp])
    if not col_of:
        # nothing to solve; the fully listed bracket must already be consistent
        for row, r in zip(rows, rhs):
            if not r.is_zero():
                raise Inconsistent(f"0 = {r.text()}")
        return {}
    solution = _solve_linear(rows, rhs, params) if rows else [zero] * len(col_of)
    out = {}
    for slot in unknown_slots:
        coords = tuple(solution[col_of[(slot, comp)]] for comp in range(dim))
        out[slot] = coords
    return out


def complete_by_skew(
    given: Mapping[tuple, Sequence[Scalar]],
    given_slots,
    alpha: LinMap,
    beta: LinMap,
    point: Mapping[str, Fraction],
) -> dict:
    """Numeric skew completion at one parameter point (the public operation;
    the symbolic variant above backs the shipped completion data)."""
    point = {k: Fraction(v) for k, v in point.items()}
    num_given = {
        slot: tuple(Scalar.rational(c.eval(point)) for c in vec)
        for slot, vec in given.items()
    }
    return solve_skew_completion(
        num_given, given_slots, alpha.eval_at(point), beta.eval_at(point)
    )


# ---------------------------------------------------------------------------
# entry loading
# ---------------------------------------------------------------------------


def _entry_from_dict(data: dict) -> CatalogEntry:
    from .fileio import bundle_from_dict

    bundle = bundle_from_dict(data)
    cat = data["catalog"]
    params = bundle.ring.params
    completion = None
    if cat.get("completion") is not None:
        completion = {}
        for entry in cat["completion"]["entries"]:
            *idx, comp, text = entry
            slot = tuple(idx)
            coords = completion.setdefault(
                slot, [Scalar.zero(params)] * bundle.space.dim
            )
            coords[comp] = parse_scalar(text, params)
        completion = {slot: tuple(coords) for slot, coords in completion.items()}
    return CatalogEntry(
        entry_id=cat["id"],
        case=cat["case"],
        status=cat["status"],
        bundle=bundle,
        given_br_slots=tuple(tuple(s) for s in cat["given_br_slots"]),
        completion=completion,
        branches=tuple(dict(b) for b in cat.get("branches", [])),
        notes=tuple(cat.get("notes", [])),
    )


def _load_entries() -> dict:
    entries = {}
    folder = resources.files("bihomcheck").joinpath("data/catalog")
    for item in sorted(folder.iterdir(), key=lambda e: e.name):
        if not item.name.endswith(".json"):
            continue
        entry = _entry_from_dict(json.loads(item.read_text()))
        entries[entry.entry_id] = entry
    return entries


_ENTRIES: dict | None = None


def entries() -> dict:
    global _ENTRIES
    if _ENTRIES is None:
        _ENTRIES = _load_entries()
    return _ENTRIES


def get_entry(entry_id: int) -> CatalogEntry:
    entry = entries().get(entry_id)
    if entry is None:
        raise UnknownEntry(entry_id)
    return entry


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def _axis_verdicts(bundle: AlgebraBundle) -> list:
    verdicts = []
    for kind, spec in DEFAULT_AXES:
        if kind == "predicate":
            verdicts.append(_predicate_verdict(spec, bundle))
        else:
            verdicts.append(check_identity(IDENTITIES[spec], bundle, spec))
    return verdicts


def sample_points(entry: CatalogEntry, count: int, seed: int) -> list:
    """Parameter points satisfying the entry's constraints exactly: free
    parameters get integers of magnitude <= 10, constrained ones are solved
    through the stored branch substitutions."""
    rng = SplitRng(seed).child(f"entry{entry.entry_id}")
    params = entry.bundle.ring.params
    points = []
    branches = entry.branches or ({},)
    attempts = 0
    while len(points) < count and attempts < 1000 * count:
        attempts += 1
        subs = branches[len(points) % len(branches)]
        remaining = [p for p in params if p not in subs]
        point = {p: Fraction(rng.randint(-10, 10)) for p in remaining}
        try:
            full = dict(point)
            for name, text in subs.items():
                value = parse_scalar(text, tuple(remaining))
                full[name] = value.eval(point)
        except ZeroDivisionError:
            continue
        if entry.bundle.ring.check_point(full) is not None:
            continue
        points.append(full)
    if len(points) < count:
        raise Inconsistent(
            f"could not sample {count} constraint-satisfying points for entry {entry.entry_id}"
        )
    return points


def verify_entry(
    entry_id: int,
    mode: str = "symbolic",
    samples: int = 5,
    seed: int = 0,
) -> Report:
    """Per-axiom report for one catalog entry. Symbolic mode checks every
    constraint branch and merges; sampled mode specializes at
    constraint-satisfying points."""
    entry = get_entry(entry_id)
    notes = list(entry.notes)
    if entry.completion is None and entry.given_br_slots != tuple(
        itertools.product(range(2), repeat=2)
    ):
        notes.append("skew completion unsolvable; unlisted bracket constants forced to zero")
    if mode == "symbolic":
        per_branch = []
        for desc, bundle in entry.branch_bundles():
            per_branch.append((desc, _axis_verdicts(bundle)))
        merged = []
        for i, axis in enumerate(AXIS_IDS):
            final = Verdict(axis, "pass")
            for desc, verdicts in per_branch:
                v = verdicts[i]
                if v.status == "fail":
                    if v.counterexample is not None and len(per_branch) > 1:
                        v.counterexample.point = {"branch": desc}
                    final = v
                    break
                if v.status == "inapplicable" and final.status == "pass":
                    final = v
            merged.append(final)
        if len(per_branch) > 1:
            notes.append(f"symbolic check over {len(per_branch)} constraint branches")
        report = Report(f"entry{entry.entry_id:02d}", "catalog-default", "symbolic", merged, notes=notes)
    elif mode == "sampled":
        points = sample_points(entry, samples, seed)
        per_point = []
        for point in points:
            bundle = entry.completed_bundle().eval_at(point)
            per_point.append((point, _axis_verdicts(bundle)))
        merged = []
        for i, axis in enumerate(AXIS_IDS):
            final = Verdict(axis, "pass")
            for point, verdicts in per_point:
                v = verdicts[i]
                if v.status == "fail":
                    v.counterexample.point = point
                    final = v
                    break
                if v.status == "inapplicable" and final.status == "pass":
                    final = v
            merged.append(final)
        report = Report(
            f"entry{entry.entry_id:02d}",
            "catalog-default",
            "sampled",
            merged,
            seed=seed,
            points=points,
            notes=notes,
        )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return report


def verify_all(mode: str = "symbolic", samples: int = 5, seed: int = 0, ids=None) -> list:
    out = []
    for entry_id in sorted(entries()) if ids is None else sorted(ids):
        out.append(verify_entry(entry_id, mode=mode, samples=samples, seed=seed))
    return out


def summary_table(reports: Sequence[Report]) -> str:
    """entry x axiom matrix, one row per entry, fixed-width cells."""
    mark = {"pass": "ok", "fail": "FAIL", "inapplicable": "n/a"}
    headers = ["entry", "status"] + [axis for axis in AXIS_IDS] + ["overall"]
    rows = []
    for report in reports:
        entry_id = int(report.bundle.replace("entry", ""))
        entry = get_entry(entry_id)
        cells = [f"{entry_id:5d}", f"{entry.status:13s}"]
        by_id = {v.identity: v for v in report.verdicts}
        for axis in AXIS_IDS:
            cells.append(mark[by_id[axis].status])
        cells.append(mark[report.overall])
        rows.append(cells)
    widths = [max(len(h), max(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for cells in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
    return "\n".join(lines)
