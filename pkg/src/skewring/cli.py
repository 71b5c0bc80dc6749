"""skewring command line.

    skewring validate --ring SPEC [--endo SPEC]
    skewring props --ring SPEC [--endo SPEC] [--property NAME] [--sampled --seed N]
    skewring idempotents --ring SPEC
    skewring skew-idempotents --ring SPEC --endo SPEC --degree D
    skewring claim C5 [--ring NAME] [--degree D --trunc M]
    skewring verify-paper [--degree D --trunc M] [--workers N] [--timing]
    skewring search --property 'abelian,!reflexive' --family F --max-order N

Exit status: 0 all pass / found, 1 failure / not found, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields

from skewring import parse as P
from skewring.parse import SpecSyntaxError
from skewring.properties import PROPERTY_NAMES, RING_PROPERTIES, all_properties, check_property
from skewring.ring import PropertyVerdict, RingError, check_endomorphism, idempotents, identity_endomorphism, validate_ring
from skewring.skew import find_idempotents_bounded
from skewring.theorems import CLAIMS, verify_paper, run_claim
from skewring.zoo import RegistryEntry, build_endo, build_ring, generated_pairs, registry_entry

VERBS = ("validate", "props", "idempotents", "skew-idempotents", "claim", "verify-paper", "search")
FAMILIES = ("Z", "prod", "mat", "ut", "truncpoly", "sub", "skew", "all")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Command:
    verb: str
    ring: str | None = None
    endo: str | None = None
    claim: str | None = None
    degree: int | None = None
    trunc: int | None = None
    property: str | None = None
    family: str | None = None
    max_order: int | None = None
    json: bool = False
    seed: int | None = None
    sampled: bool = False
    workers: int | None = None
    timing: bool = False

    def render(self) -> list[str]:
        """argv that parses back to this command."""
        argv = [self.verb]
        if self.claim is not None:
            argv.append(self.claim)
        for f in fields(self):
            if f.name in ("verb", "claim"):
                continue
            val = getattr(self, f.name)
            flag = "--" + f.name.replace("_", "-")
            if isinstance(val, bool):
                if val:
                    argv.append(flag)
            elif val is not None:
                argv += [flag, str(val)]
        return argv


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewring", description="finite rings, skew polynomial rings and claim checks")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("claim", nargs="?", help="claim id for the claim verb (C1..C12)")
    ap.add_argument("--ring", help="ring spec or registry name")
    ap.add_argument("--endo", help="endomorphism spec (id, table(i:j,...), or a named map)")
    ap.add_argument("--degree", type=int, help="max polynomial degree d")
    ap.add_argument("--trunc", type=int, help="truncation order m")
    ap.add_argument("--property", help="property name; search takes a comma list, '!' negates")
    ap.add_argument("--family", choices=FAMILIES)
    ap.add_argument("--max-order", type=int)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--sampled", action="store_true", help="sample instead of exhaustive scans")
    ap.add_argument("--workers", type=int)
    ap.add_argument("--timing", action="store_true", help="fill elapsed_ms in reports")
    return ap


def parse_command(argv) -> Command:
    ns = build_parser().parse_args(argv)
    return Command(**vars(ns))


# ---------------------------------------------------------------------------


def _entry(cmd: Command) -> RegistryEntry:
    if cmd.ring is None:
        raise UsageError("--ring is required")
    node = P.parse_ring_spec(cmd.ring)
    if isinstance(node, P.NameSpec) and cmd.endo is None:
        return registry_entry(node.name)
    R = build_ring(node)
    sigma = build_endo(R, cmd.endo) if cmd.endo else identity_endomorphism(R)
    return RegistryEntry(cmd.ring, R, sigma, "command line", cmd.ring, cmd.endo or "id")


def _scan(cmd: Command) -> dict:
    return {"sampled": True if cmd.sampled else None, "seed": cmd.seed or 0}


def verdict_json(v: PropertyVerdict, R) -> dict:
    return {"property": v.property, "holds": v.holds,
            "witness": [R.format_element(a) for a in v.witness],
            "note": v.note, "sampled": v.sampled}


def verdict_text(v: PropertyVerdict, R) -> str:
    line = f"{v.property}: {'holds' if v.holds else 'fails'}"
    if v.witness:
        line += "  witness " + ", ".join(R.format_element(a) for a in v.witness)
    if v.note:
        line += f"  ({v.note})"
    if v.sampled:
        line += "  [sampled]"
    return line


def _emit(out, cmd, payload, lines):
    if cmd.json:
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def _validate(cmd, out):
    entry = _entry(cmd)
    R = entry.ring
    verdicts = [validate_ring(R, sampled=True if cmd.sampled else None, seed=cmd.seed or 0)]
    if cmd.endo or entry.endo_spec != "id":
        verdicts.append(check_endomorphism(R, entry.sigma.map))
    payload = {"ring": R.label, "order": R.order, "verdicts": [verdict_json(v, R) for v in verdicts]}
    _emit(out, cmd, payload, [f"{R.label}: order {R.order}"] + [verdict_text(v, R) for v in verdicts])
    return 0 if all(v.holds for v in verdicts) else 1


def _props(cmd, out):
    entry = _entry(cmd)
    R, sigma = entry.ring, entry.sigma
    if cmd.property:
        names = cmd.property.split(",")
        for n in names:
            if n not in PROPERTY_NAMES:
                raise UsageError(f"unknown property {n!r}")
        verdicts = [check_property(n, R, sigma, **_scan(cmd)) for n in names]
    else:
        verdicts = all_properties(R, sigma, **_scan(cmd))
    _emit(out, cmd, [verdict_json(v, R) for v in verdicts], [verdict_text(v, R) for v in verdicts])
    return 0 if all(v.holds for v in verdicts) else 1


def _idempotents(cmd, out):
    R = _entry(cmd).ring
    ids = [R.format_element(e) for e in idempotents(R)]
    _emit(out, cmd, ids, ids)
    return 0


def _skew_idempotents(cmd, out):
    entry = _entry(cmd)
    d = 1 if cmd.degree is None else cmd.degree
    ids = [str(e) for e in find_idempotents_bounded(entry.ring, entry.sigma, d)]
    _emit(out, cmd, ids, ids)
    return 0


def _report_lines(reports, timing):
    lines = []
    for r in reports:
        line = f"{r.claim} {r.entry} d={r.d} m={r.m}: {r.status}"
        if r.witness:
            line += "  " + json.dumps(r.witness)
        if timing:
            line += f"  {r.elapsed_ms:.1f} ms"
        lines.append(line)
    return lines


def _bounds(cmd):
    return (1 if cmd.degree is None else cmd.degree, 2 if cmd.trunc is None else cmd.trunc)


def _claim(cmd, out):
    if cmd.claim is None:
        raise UsageError("claim needs an id, e.g. 'claim C5'")
    if cmd.claim not in {c.id for c in CLAIMS}:
        raise UsageError(f"unknown claim {cmd.claim!r}")
    if cmd.ring:
        reports = [run_claim(cmd.claim, _entry(cmd), _bounds(cmd))]
    else:
        reports = verify_paper(_bounds(cmd), workers=cmd.workers or 1, claim_ids=[cmd.claim])
    return _finish_reports(cmd, out, reports)


def _verify(cmd, out):
    reports = verify_paper(_bounds(cmd), workers=cmd.workers or 1)
    return _finish_reports(cmd, out, reports)


def _finish_reports(cmd, out, reports):
    payload = [r.to_json(cmd.timing) for r in reports]
    _emit(out, cmd, payload, _report_lines(reports, cmd.timing))
    return 1 if any(r.status == "fail" for r in reports) else 0


def parse_conjunction(text: str) -> list[tuple[str, bool]]:
    """'abelian,!reflexive' -> [('abelian', True), ('reflexive', False)]"""
    out = []
    for part in text.split(","):
        part = part.strip()
        want = not part.startswith("!")
        name = part.lstrip("!").strip()
        if name not in PROPERTY_NAMES:
            raise UsageError(f"unknown property {name!r}")
        out.append((name, want))
    return out


def _search(cmd, out):
    if not cmd.property:
        raise UsageError("search needs --property")
    conj = parse_conjunction(cmd.property)
    family = cmd.family or "all"
    max_order = cmd.max_order or 16
    ring_only = all(name in RING_PROPERTIES for name, _ in conj)
    hits = []
    seen_rings = set()
    for ring_spec, endo_spec, R, sigma in generated_pairs(max_order, family):
        if ring_only:
            if ring_spec in seen_rings:
                continue
            seen_rings.add(ring_spec)
            endo_spec = None
        verdicts = []
        for name, want in conj:
            v = check_property(name, R, sigma, **_scan(cmd))
            if v.holds != want:
                break
            verdicts.append(v)
        else:
            hits.append({"ring": ring_spec, "endo": endo_spec, "order": R.order,
                         "verdicts": [verdict_json(v, R) for v in verdicts]})
    lines = []
    for h in hits:
        head = h["ring"] + (f" with {h['endo']}" if h["endo"] else "")
        wit = [f"{v['property']}: {', '.join(v['witness'])}" for v in h["verdicts"] if v["witness"]]
        lines.append(head + (f"  [{'; '.join(wit)}]" if wit else ""))
    if not hits:
        lines.append("no instance found")
    _emit(out, cmd, hits, lines)
    return 0 if hits else 1


HANDLERS = {"validate": _validate, "props": _props, "idempotents": _idempotents,
            "skew-idempotents": _skew_idempotents, "claim": _claim, "verify-paper": _verify, "search": _search}


def run_command(cmd: Command, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return HANDLERS[cmd.verb](cmd, out)
    except SpecSyntaxError as exc:
        err.write(f"skewring: {exc}\n")
        if exc.text:
            err.write(f"  {exc.text}\n  {' ' * exc.offset}^\n")
        return 2
    except (UsageError, RingError, KeyError) as exc:
        err.write(f"skewring: {exc}\n")
        return 2


def main(argv=None) -> int:
    try:
        cmd = parse_command(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:        # argparse usage errors
        return int(exc.code or 0)
    return run_command(cmd)


if __name__ == "__main__":
    sys.exit(main())
