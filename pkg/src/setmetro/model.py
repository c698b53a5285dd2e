"""Set-system model: parsing, validation, similarity, and condensation.

A set system is a hypergraph whose hyperedges are named sets over named
elements. Every ordering in this module is document order (first appearance
in the input), which downstream stages rely on for determinism.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


class InputError(ValueError):
    """Invalid input data; `location` points at the offending piece."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{message} (at {location})" if location else message)


@dataclass(frozen=True)
class SetSystem:
    """Named sets over named elements, both in document order."""

    sets: tuple[str, ...]
    members: dict[str, tuple[str, ...]]  # set name -> element names, document order
    elements: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.elements:
            seen: dict[str, None] = {}
            for s in self.sets:
                for e in self.members[s]:
                    seen.setdefault(e)
            object.__setattr__(self, "elements", tuple(seen))

    def memberships(self, element: str) -> tuple[str, ...]:
        return tuple(s for s in self.sets if element in self._member_sets[s])

    @property
    def _member_sets(self) -> dict[str, frozenset]:
        cache = self.__dict__.get("_member_sets_cache")
        if cache is None:
            cache = {s: frozenset(self.members[s]) for s in self.sets}
            self.__dict__["_member_sets_cache"] = cache
        return cache


def signature(element: str, system: SetSystem) -> tuple[int, ...]:
    """Membership bit vector of an element over the system's sets, in set order."""
    return tuple(1 if element in system._member_sets[s] else 0 for s in system.sets)


def similarity(u: str, v: str, system: SetSystem) -> int:
    """Number of sets containing both u and v."""
    su = signature(u, system)
    sv = signature(v, system)
    return sum(a & b for a, b in zip(su, sv))


def check_set_system(system: SetSystem) -> SetSystem:
    """Validate minimum set size, membership, and intersection-graph connectivity."""
    for s in system.sets:
        if len(set(system.members[s])) < 2:
            raise InputError("set below minimum size of 2 distinct elements", f"set {s!r}")
    member_of = {e: [] for e in system.elements}
    for s in system.sets:
        for e in system.members[s]:
            member_of[e].append(s)
    for e, owners in member_of.items():
        if not owners:
            raise InputError("element belongs to no set", f"element {e!r}")
    if system.sets:
        reached = {system.sets[0]}
        frontier = [system.sets[0]]
        elem_sets = {e: set(owners) for e, owners in member_of.items()}
        while frontier:
            s = frontier.pop()
            for e in system.members[s]:
                for t in elem_sets[e]:
                    if t not in reached:
                        reached.add(t)
                        frontier.append(t)
        if len(reached) < len(system.sets):
            missing = [s for s in system.sets if s not in reached]
            raise InputError(
                "set intersection graph is disconnected", f"unreached sets {missing}"
            )
    return system


def _clean_name(raw: str, kind: str, location: str) -> str:
    name = raw.strip()
    if not name:
        raise InputError(f"empty {kind} name after trimming", location)
    return name


def parse_set_system(data: str | bytes, fmt: str = "json", csv_header: bool = False) -> SetSystem:
    """Parse and validate a set system from JSON or CSV text.

    JSON: {"sets": {name: [element, ...], ...}}. CSV: one row per element,
    first column the element name, remaining columns its sets; csv_header
    skips the first row.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if fmt == "json":
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc.msg}", f"offset {exc.pos}") from exc
        if not isinstance(doc, dict) or "sets" not in doc:
            raise InputError("top-level object must contain a 'sets' mapping", "document root")
        raw_sets = doc["sets"]
        if not isinstance(raw_sets, dict) or not raw_sets:
            raise InputError("'sets' must be a non-empty object", "key 'sets'")
        sets: list[str] = []
        members: dict[str, tuple[str, ...]] = {}
        for raw_name, elems in raw_sets.items():
            name = _clean_name(str(raw_name), "set", f"set {raw_name!r}")
            if name in members:
                raise InputError("duplicate set name", f"set {name!r}")
            if not isinstance(elems, list):
                raise InputError("set members must be a list", f"set {name!r}")
            cleaned: list[str] = []
            for i, raw_e in enumerate(elems):
                e = _clean_name(str(raw_e), "element", f"set {name!r}, entry {i}")
                if e in cleaned:
                    raise InputError("duplicate element in set", f"set {name!r}, element {e!r}")
                cleaned.append(e)
            sets.append(name)
            members[name] = tuple(cleaned)
        system = SetSystem(sets=tuple(sets), members=members)
    elif fmt == "csv":
        reader = csv.reader(io.StringIO(data))
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
        if csv_header:
            rows = rows[1:]
        if not rows:
            raise InputError("no data rows", "csv body")
        sets = []
        per_set: dict[str, list[str]] = {}
        seen_elems: set[str] = set()
        for lineno, row in enumerate(rows, start=1):
            e = _clean_name(row[0], "element", f"row {lineno}")
            if e in seen_elems:
                raise InputError("duplicate element row", f"row {lineno}, element {e!r}")
            seen_elems.add(e)
            owners = [c for c in (cell.strip() for cell in row[1:]) if c]
            if not owners:
                raise InputError("element belongs to no set", f"row {lineno}, element {e!r}")
            for s in owners:
                if s not in per_set:
                    sets.append(s)
                    per_set[s] = []
                if e in per_set[s]:
                    raise InputError("duplicate membership", f"row {lineno}, set {s!r}")
                per_set[s].append(e)
        system = SetSystem(sets=tuple(sets), members={s: tuple(v) for s, v in per_set.items()})
    else:
        raise InputError(f"unknown format {fmt!r}", "format argument")
    return check_set_system(system)


@dataclass(frozen=True)
class CondensedSystem:
    """Kernel hypergraph plus the bookkeeping needed to restore what was removed.

    merge_map: representative -> all merged members (document order, including
    the representative itself). singles_map: set name -> its removed single-set
    elements (document order). source: the uncondensed system, kept because the
    global element interleaving is not recoverable from the maps alone.
    """

    kernel: SetSystem
    merge_map: dict[str, tuple[str, ...]]
    singles_map: dict[str, tuple[str, ...]]
    source: SetSystem


def condense(system: SetSystem) -> CondensedSystem:
    """Drop single-set elements and merge identical-membership elements.

    Single-set elements are set aside per set; elements with identical
    membership signatures collapse to their first representative. A set that
    would fall below 2 kernel vertices gets its lexicographically smallest
    removed singles back until it has 2 (or none remain to give back).
    """
    sigs = {e: signature(e, system) for e in system.elements}
    singles: dict[str, list[str]] = {s: [] for s in system.sets}
    merge_groups: dict[tuple[int, ...], list[str]] = {}
    for e in system.elements:
        sig = sigs[e]
        if sum(sig) == 1:
            owner = system.sets[sig.index(1)]
            singles[owner].append(e)
        else:
            merge_groups.setdefault(sig, []).append(e)

    merge_map = {group[0]: tuple(group) for group in merge_groups.values()}
    kernel_elems = [e for e in system.elements if e in merge_map]

    # degenerate guard: top a set back up to 2 kernel vertices from its own singles
    kept_singles: dict[str, list[str]] = {s: [] for s in system.sets}
    for s in system.sets:
        have = sum(1 for e in kernel_elems if s in system.memberships(e))
        have += len(kept_singles[s])
        if have < 2 and singles[s]:
            for e in sorted(singles[s]):
                if have >= 2:
                    break
                kept_singles[s].append(e)
                singles[s] = [x for x in singles[s] if x != e]
                have += 1
    retained = {e for kept in kept_singles.values() for e in kept}
    kernel_order = [e for e in system.elements if e in merge_map or e in retained]

    kernel_members = {}
    kernel_elem_set = set(kernel_order)
    for s in system.sets:
        kernel_members[s] = tuple(
            e for e in kernel_order
            if e in kernel_elem_set and s in system.memberships(e)
        )
    kernel = SetSystem(sets=system.sets, members=kernel_members, elements=tuple(kernel_order))
    for e in kernel_order:
        if e not in merge_map:
            merge_map[e] = (e,)
    merge_map = {e: merge_map[e] for e in kernel_order}
    return CondensedSystem(
        kernel=kernel,
        merge_map=merge_map,
        singles_map={s: tuple(v) for s, v in singles.items()},
        source=system,
    )


def reconstruct(cs: CondensedSystem) -> SetSystem:
    """Rebuild the original system from the kernel and the condensation maps."""
    restored_members = {}
    src = cs.source
    expanded: set[str] = set()
    for rep, group in cs.merge_map.items():
        expanded.update(group)
    for s, kept in cs.singles_map.items():
        expanded.update(kept)
    for s in src.sets:
        restored_members[s] = tuple(e for e in src.members[s] if e in expanded)
    return SetSystem(
        sets=src.sets,
        members=restored_members,
        elements=tuple(e for e in src.elements if e in expanded),
    )
