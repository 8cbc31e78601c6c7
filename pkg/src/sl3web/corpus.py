"""Named diagrams, test corpora and the bundled knot-table data."""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .diagram import (LinkDiagram, connected_sum, diagram_from_text, from_braid_word,
                      from_pd_code, is_alternating, mirror, torus_braid)

TREFOIL_PD = ((1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2))
FIVE_TWO_PD = ((1, 5, 2, 4), (3, 9, 4, 8), (5, 1, 6, 10), (7, 3, 8, 2), (9, 7, 10, 6))


def data_path(name: str) -> Path:
    return Path(str(resources.files("sl3web") / "data" / name))


def knot_11n183() -> LinkDiagram:
    return diagram_from_text(data_path("11n183.pd").read_text())


def trefoil() -> LinkDiagram:
    return from_pd_code(TREFOIL_PD)


def five_two() -> LinkDiagram:
    """Positive twist-knot diagram whose reduced Seifert graph has a cycle."""
    d = from_pd_code(FIVE_TWO_PD)
    return mirror(d) if d.is_negative() else d


def alternating_sum(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    """A connected sum of two alternating diagrams that is again alternating."""
    for a in d1.labels:
        for b in d2.labels:
            s = connected_sum(d1, d2, a, b)
            if is_alternating(s):
                return s
    raise ValueError("no alternating band position")


@dataclass(frozen=True)
class Entry:
    name: str
    diagram: LinkDiagram
    source: str
    expect: dict | None = None


def _braid_entry(name: str, word: list[int], n: int) -> Entry:
    return Entry(name, from_braid_word(word, n), f"{n}:{json.dumps(word)}")


def random_diagrams(seed: int, count: int, max_crossings: int = 10,
                    positive: bool = False) -> list[Entry]:
    """Random closed braids; positive ones use every generator, so they stay connected."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 4)
        length = rng.randint(max(2, n - 1), max_crossings)
        word = [rng.randint(1, n - 1) for _ in range(length)]
        if positive:
            if len(set(word)) < n - 1:
                continue
        else:
            word = [g if rng.random() < 0.5 else -g for g in word]
        out.append(_braid_entry(f"random{len(out)}", word, n))
    return out


def oracle_corpus(seed: int = 0, random_count: int = 8) -> list[Entry]:
    """Torus braids, sums, 11n183 and random diagrams for the HOMFLY comparison."""
    out = [Entry(f"T(2,{n})", torus_braid(2, n), f"2:{[1] * n}") for n in range(2, 10)]
    out.append(Entry("T(3,4)", torus_braid(3, 4), f"3:{[1, 2] * 4}"))
    t, f = trefoil(), from_braid_word([1] * 5, 2)
    out.append(Entry("3_1#3_1", connected_sum(t, t), "sum"))
    out.append(Entry("3_1#5_1", connected_sum(t, f), "sum"))
    out.append(Entry("3_1#mirror(3_1)", connected_sum(t, mirror(t)), "sum"))
    out.append(Entry("11n183", knot_11n183(), "11n183.pd"))
    out.append(Entry("5_2", five_two(), "pd"))
    out.extend(random_diagrams(seed, random_count))
    return out


def positive_corpus(seed: int = 0, random_count: int = 8) -> list[Entry]:
    """Connected positive diagrams for the coefficient theorems."""
    out = [Entry(f"T(2,{n})", torus_braid(2, n), f"2:{[1] * n}") for n in range(2, 10)]
    out.append(Entry("T(3,4)", torus_braid(3, 4), f"3:{[1, 2] * 4}"))
    out.append(Entry("T(3,5)", torus_braid(3, 5), f"3:{[1, 2] * 5}"))
    out.append(Entry("trefoil-pd", trefoil(), "pd"))
    out.append(Entry("5_2", five_two(), "pd"))
    out.append(Entry("11n183", knot_11n183(), "11n183.pd"))
    t, f = trefoil(), from_braid_word([1] * 5, 2)
    out.append(Entry("3_1#3_1", connected_sum(t, t), "sum"))
    out.append(Entry("3_1#5_1", connected_sum(t, f), "sum"))
    out.extend(random_diagrams(seed, random_count, positive=True))
    return out


# corpus files


def load_corpus(path: str | Path) -> list[Entry]:
    """Read a JSON list of ``{"name", "braid" | "pd", "expect"?}`` objects."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, list):
        raise ValueError("corpus must be a JSON list")
    out = []
    for i, obj in enumerate(raw):
        text = obj.get("braid") or obj.get("pd")
        if not text:
            raise ValueError(f"corpus entry {i} has neither braid nor pd")
        out.append(Entry(obj.get("name", f"entry{i}"), diagram_from_text(text), text,
                         obj.get("expect")))
    return out


def dump_corpus(entries: Iterable[Entry]) -> list[dict]:
    out = []
    for en in entries:
        obj = {"name": en.name, "pd": en.diagram.to_pd_text()}
        if en.expect:
            obj["expect"] = en.expect
        out.append(obj)
    return out


def bundled_corpus() -> list[Entry]:
    return load_corpus(data_path("positive_corpus.json"))


# knot table


def read_knotinfo_csv(path: str | Path) -> list[dict]:
    """Rows of a KnotInfo export, comma or pipe delimited."""
    text = Path(path).read_text()
    head = text.split("\n", 1)[0]
    delim = "|" if head.count("|") > head.count(",") else ","
    csv.field_size_limit(1 << 30)
    rows = list(csv.DictReader(text.splitlines(), delimiter=delim))
    if not rows or "name" not in rows[0] or "homfly_polynomial" not in rows[0]:
        raise ValueError("CSV needs name and homfly_polynomial columns")
    return rows


def bundled_knotinfo() -> list[dict]:
    return read_knotinfo_csv(data_path("knotinfo_positive_fibered.csv"))


def expected_table() -> dict[str, dict]:
    with open(data_path("table_gamma3.csv")) as fh:
        return {r["name"]: {"positive_braid": r["positive_braid"] == "Y",
                            "gamma3": int(r["gamma3"])} for r in csv.DictReader(fh)}


def table_fixtures(rows: list[dict] | None = None) -> dict[str, LinkDiagram]:
    """Positive diagram for every table knot.

    Rows without a positive PD fall back to the bundled 11n183 diagram.
    PD codes that read as all-negative are mirrored.
    """
    rows = bundled_knotinfo() if rows is None else rows
    out = {}
    for r in rows:
        pd = (r.get("positive_pd_notation") or "").strip()
        if pd:
            d = diagram_from_text(pd)
        elif r["name"] in ("11n_183", "11n183"):
            d = knot_11n183()
        else:
            continue
        if d.is_negative():
            d = mirror(d)
        if not d.is_positive():
            raise ValueError(f"{r['name']}: positive PD has mixed signs")
        out[r["name"]] = d
    return out
