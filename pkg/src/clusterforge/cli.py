"""Command-line front end.

Commands: check, ext, hom, tau, mutate, graph, verify, pool.
Exit codes: 0 success, 1 domain error (cyclic quiver, failed check,
unreachable mutation), 2 usage or parse error.

Output is deterministic: identical inputs produce byte-identical
output, so fixtures can assert on it directly.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ClusterForgeError, CyclicQuiver, FormatError
from .quiver import validate
from . import cluster, formats, rep, serre, verify


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusterforge",
        description="exact computation in integral cluster categories of acyclic quivers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a quiver file")
    p.add_argument("quiver")

    for name in ("ext", "hom"):
        p = sub.add_parser(name, help=f"{name}-group of two representations")
        p.add_argument("quiver")
        p.add_argument("rep_m")
        p.add_argument("rep_n")
        p.add_argument("--prime", type=int, action="append", default=[],
                       help="compute dimensions over F_p instead (repeatable)")

    p = sub.add_parser("tau", help="Auslander-Reiten translate of a representation")
    p.add_argument("quiver")
    p.add_argument("rep_m")
    p.add_argument("--power", type=int, default=1,
                   help="apply tau this many times; negative powers use the inverse")

    p = sub.add_parser("mutate", help="mutate a cluster-tilting object")
    p.add_argument("quiver")
    p.add_argument("cluster")
    p.add_argument("position", type=int, nargs="?",
                   help="1-based position in the printed summand order")
    p.add_argument("--dim-bound", type=int, default=12)
    p.add_argument("--interactive", action="store_true",
                   help="read successive positions from standard input")

    p = sub.add_parser("graph", help="exchange graph exploration")
    p.add_argument("quiver")
    p.add_argument("--dim-bound", type=int, default=12)
    p.add_argument("--max-nodes", type=int, default=10000)
    p.add_argument("--format", choices=("text", "structured", "dot"), default="text")

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("quiver")
    p.add_argument("--dim-bound", type=int, default=12)
    p.add_argument("--prime", type=int, action="append", default=[])
    p.add_argument("--rep", action="append", default=[],
                   help="representation files to validate alongside the suite")

    p = sub.add_parser("pool", help="list the rigid object pool")
    p.add_argument("quiver")
    p.add_argument("--dim-bound", type=int, default=12)

    return parser


def _load_rep_for(quiver, path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read rep file {path}: {exc}")
    return formats.parse_rep(text, quiver)


def _primes_or_default(primes):
    for p in primes:
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise FormatError(f"{p} is not prime")
    return tuple(primes)


def cmd_check(args) -> int:
    q = formats.load_quiver(args.quiver)
    try:
        order = validate(q)
    except CyclicQuiver as exc:
        print(f"cyclic: {' -> '.join(str(v) for v in exc.cycle)}")
        return 1
    print("acyclic")
    print("order " + " ".join(str(v) for v in order))
    return 0


def cmd_ext(args, which: str) -> int:
    q = formats.load_quiver(args.quiver)
    m = _load_rep_for(q, args.rep_m)
    n = _load_rep_for(q, args.rep_n)
    primes = _primes_or_default(args.prime)
    if not primes:
        if which == "ext":
            print(formats.format_group(rep.ext1_group(m, n)))
        else:
            print(formats.format_group(rep.hom_group(m, n).group))
        return 0
    for p in primes:
        hom_dim, ext_dim = rep.field_hom_ext_dims(rep.base_change(m, p), rep.base_change(n, p))
        print(f"mod {p}: {ext_dim if which == 'ext' else hom_dim}")
    return 0


def cmd_tau(args) -> int:
    q = formats.load_quiver(args.quiver)
    m = _load_rep_for(q, args.rep_m)
    power = args.power
    for _ in range(abs(power)):
        m = serre.tau(m) if power > 0 else serre.tau_inv(m)
    sys.stdout.write(formats.serialize_rep(m, quiver_ref=args.quiver))
    return 0


def _print_cluster(summands) -> None:
    for i, s in enumerate(summands, start=1):
        print(f"cluster {i} {formats.describe_object(s)}")


def _mutation_menu(summands, pool):
    menu = []
    for k in range(len(summands)):
        try:
            neighbor, tri = cluster.mutate(summands, k, pool)
        except ClusterForgeError as exc:
            menu.append((k, None, str(exc)))
            continue
        menu.append((k, (neighbor, tri), formats.format_group(cluster.ext1_c(tri.x, tri.y))))
    return menu


def _print_triangles(tri) -> None:
    e = ",".join(formats.describe_object(s) for s in tri.e) or "-"
    ep = ",".join(formats.describe_object(s) for s in tri.e_prime) or "-"
    print(f"triangle e {e}")
    print(f"triangle eprime {ep}")
    print(f"certificate {formats.format_group(cluster.ext1_c(tri.x, tri.y))}")


def cmd_mutate(args) -> int:
    q = formats.load_quiver(args.quiver)
    pool = cluster.build_pool(q, args.dim_bound)
    summands = cluster.canonical_cluster(formats.load_cluster(args.cluster, q, pool=pool))
    ok, cert = cluster.is_cluster_tilting(summands)
    if not ok:
        print("not cluster-tilting:")
        for line in cert:
            print(f"  {line}")
        return 1
    if args.interactive:
        return _mutate_interactive(summands, pool)
    if args.position is None:
        print("position required outside --interactive", file=sys.stderr)
        return 2
    k = args.position - 1
    if not 0 <= k < len(summands):
        print(f"position {args.position} out of range 1..{len(summands)}", file=sys.stderr)
        return 2
    new_summands, tri = cluster.mutate(summands, k, pool)
    print(f"mutated {formats.describe_object(tri.x)} -> {formats.describe_object(tri.y)}")
    _print_cluster(new_summands)
    _print_triangles(tri)
    return 0


def _mutate_interactive(summands, pool) -> int:
    while True:
        _print_cluster(summands)
        print("mutations:")
        menu = _mutation_menu(summands, pool)
        for k, payload, cert in menu:
            if payload is None:
                print(f"  {k + 1} unavailable ({cert})")
            else:
                _, tri = payload
                print(f"  {k + 1} -> {formats.describe_object(tri.y)} (Ext1 {cert})")
        sys.stdout.write("> ")
        sys.stdout.flush()
        line = sys.stdin.readline()
        if not line or line.strip() in ("q", "quit", "exit"):
            print("")
            return 0
        try:
            k = int(line.strip()) - 1
        except ValueError:
            print(f"not a position: {line.strip()}")
            continue
        if not 0 <= k < len(summands):
            print(f"position {k + 1} out of range")
            continue
        entry = menu[k]
        if entry[1] is None:
            print(f"position {k + 1} unavailable: {entry[2]}")
            continue
        summands, tri = entry[1]
        print(f"mutated {formats.describe_object(tri.x)} -> {formats.describe_object(tri.y)}")
        _print_triangles(tri)


def cmd_graph(args) -> int:
    q = formats.load_quiver(args.quiver)
    g = cluster.exchange_graph(q, args.dim_bound, args.max_nodes)
    if args.format == "dot":
        sys.stdout.write(formats.graph_to_dot(g))
    elif args.format == "structured":
        sys.stdout.write(formats.graph_to_structured(g))
    else:
        print(f"nodes {len(g.nodes)}")
        undirected = {(min(i, j), max(i, j)) for i, _, j, _ in g.edges}
        print(f"edges {len(undirected)}")
        print(f"truncated {'true' if g.truncated else 'false'}")
    return 0


def cmd_verify(args) -> int:
    q = formats.load_quiver(args.quiver)
    primes = _primes_or_default(args.prime) or (2, 3, 5)
    extra = []
    parse_failures = []
    for path in args.rep:
        try:
            extra.append((path, _load_rep_for(q, path)))
        except FormatError as exc:
            parse_failures.append((path, str(exc)))
    report = verify.run_suite(q, args.dim_bound, primes, extra_reps=extra)
    failed = False
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        detail = f": {check.detail}" if check.detail and not check.passed else ""
        print(f"{status} {check.name}{detail}")
        failed = failed or not check.passed
    for path, msg in parse_failures:
        print(f"FAIL rep-wellformed({path}): {msg}")
        failed = True
    return 1 if failed else 0


def cmd_pool(args) -> int:
    q = formats.load_quiver(args.quiver)
    pool = cluster.build_pool(q, args.dim_bound)
    print(f"pool {len(pool.objects)} complete {'true' if pool.complete else 'false'}")
    for obj in pool.objects:
        print(f"{formats.describe_object(obj)} {pool.provenance[obj.key()]}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        if args.command in ("ext", "hom"):
            return cmd_ext(args, args.command)
        if args.command == "tau":
            return cmd_tau(args)
        if args.command == "mutate":
            return cmd_mutate(args)
        if args.command == "graph":
            return cmd_graph(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "pool":
            return cmd_pool(args)
        raise AssertionError("unreachable")
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ClusterForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
