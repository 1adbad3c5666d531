#!/usr/bin/env python3
"""Regenerate the shipped certificates from the transcribed trees.

Each tree is rebuilt, eliminated, verified and written as JSON; the run
stops on the first tree that does not verify.
"""

import argparse
import json
import sys
from pathlib import Path

from pluckertree.certificate import build_tree, dumps, make_certificate, verify
from pluckertree.generators import dataset, forbidden_facets
from pluckertree.solids import SolidTable

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--trees", default=str(ROOT / "tests" / "data" / "reference_trees.json"))
    ap.add_argument("--output", default=str(ROOT / "src" / "pluckertree" / "data" / "certificates"))
    args = ap.parse_args()

    trees = json.loads(Path(args.trees).read_text())
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for name, entry in trees.items():
        ds_name = entry.get("dataset", name)
        cx = dataset(ds_name).complex()
        vt = cx.vertices
        forb = forbidden_facets(dataset(entry["forbidden"]).text, cx) if entry.get("forbidden") else None
        nodes = [(vt.encode(S.split()), vt.encode(q.split()), s) for S, q, s in entry["nodes"]]
        edges = None if entry["edges"] is None else [tuple(e) for e in entry["edges"]]
        tree = build_tree(SolidTable(cx, forb or ()), nodes, edges)
        meta = {"source": "transcribed tree", "size": tree.size}
        cert = make_certificate(tree, ds_name, forb, meta)
        rep = verify(cert, cx, forb)
        if not rep.passed:
            print(f"{name}: verification failed", *rep.lines(), sep="\n  ")
            return 1
        path = out / f"{name}.json"
        path.write_text(dumps(cert))
        print(f"{name}: {tree.size} relations, {len(cert.final)} monomials -> {path.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
