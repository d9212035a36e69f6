"""Command line: ``python -m lfkirby verify|relations|invariants``.

Exit status: 0 certified / check passed, 1 verification failed, 2 invalid input.
The step budget for a schedule run is read from LFKIRBY_STEP_BUDGET.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arrangement import DatasetFormatError
from .fibration import (
    ContractViolation,
    alexander_check,
    alexander_expected,
    check_contract,
    enk_factorization,
    fibration_invariants,
    gurtas_word,
    disk_piece_factorization,
    load_dataset,
    torus_block_charpoly,
    w_squared_boundary_power,
)
from .scenarios import assemble_theorem, certificate_trace, run_disk_piece, shadow_oracle, verify_conjugation_identities


class InvalidInput(Exception):
    pass


def _load(args):
    if args.h < 1 or args.n < 1:
        raise InvalidInput("h and n must be positive")
    try:
        return load_dataset(args.h, args.n, getattr(args, "dataset", None))
    except (FileNotFoundError, DatasetFormatError, ContractViolation, ValueError) as exc:
        raise InvalidInput(str(exc)) from exc


def cmd_verify(args) -> int:
    arr = _load(args)
    v = check_contract(args.h, args.n, arr)
    if not v.ok:
        print(f"dataset contract failed: {v.failures[0]}")
        return 1
    cert, _, k0 = run_disk_piece(args.h, args.n, arr, check=False)
    oracle_ok = shadow_oracle(k0, cert) == certificate_trace(cert)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(cert.to_json())
    if not cert.success:
        print(json.dumps({"certified": False, "stalled": cert.stalled}, sort_keys=True) if args.format == "json"
              else f"h={args.h} n={args.n} certified=no stalled={cert.stalled}")
        return 1
    report = assemble_theorem(args.h, args.n, cert, arr)
    if args.format == "json":
        print(report.to_json())
    else:
        sys.stdout.write(report.to_text())
        print(f"tietze oracle agrees: {'yes' if oracle_ok else 'no'}")
    return 0 if oracle_ok and report.chi == report.chi_from_fibration else 1


def cmd_relations(args) -> int:
    arr = _load(args)
    if args.check == "gurtas":
        v = check_contract(args.h, args.n, arr)
        k = w_squared_boundary_power(args.h, args.n, arr)
        print(f"W length {len(gurtas_word(args.h, args.n, arr))}; W^2 trivial on battery and homology: "
              f"{'yes' if v.ok else 'no'}; W^2 = boundary twist^{k}")
        return 0 if v.ok else 1
    if args.check == "conjugation":
        v = verify_conjugation_identities(args.h, args.n, arr)
        print("conjugation identities hold" if v.ok else f"failures: {v.failures}")
        return 0 if v.ok else 1
    p = torus_block_charpoly(args.h, arr)
    ok = alexander_check(args.h, arr)
    print(f"charpoly {p}, expected {alexander_expected(args.h)} up to sign: {'ok' if ok else 'mismatch'}")
    return 0 if ok else 1


def cmd_invariants(args) -> int:
    arr = _load(args)
    for label, f in (("E(n)_K over S^2", enk_factorization(args.h, args.n, arr)),
                     ("disk piece", disk_piece_factorization(args.h, args.n, arr))):
        inv = fibration_invariants(f)
        print(f"{label}: genus {f.genus}, {f.m} singular fibers, chi {inv.chi}, H_1 {inv.h1}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="lfkirby")
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", help="certify the handle decomposition for (h, n)")
    r = sub.add_parser("relations", help="check one relation family")
    i = sub.add_parser("invariants", help="Euler characteristic and H_1")
    for p in (v, r, i):
        p.add_argument("--h", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--dataset", default=None)
    v.add_argument("--report", default=None, help="write the certificate JSON here")
    v.add_argument("--format", choices=("json", "text"), default="text")
    r.add_argument("--check", choices=("gurtas", "conjugation", "alexander"), required=True)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    handler = {"verify": cmd_verify, "relations": cmd_relations, "invariants": cmd_invariants}[args.cmd]
    try:
        return handler(args)
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
