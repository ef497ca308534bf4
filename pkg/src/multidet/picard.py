"""Skeletal Picard groupoid presentations.

A presentation is a triple (A, B, c): A is the group of objects, B the
automorphism group of any object, and c an antisymmetric biadditive pairing
A x A -> B giving the symmetry isomorphism c_{x,y}: x + y -> y + x.  The
model is strictly associative and strictly unital, so every coherence
diagram evaluates to an equation "sum of c-contributions along one path =
sum along the other" in B.  All validators downstream reduce to such
equations.
"""

from __future__ import annotations

import itertools

from .errors import (
    DimensionMismatch,
    InfiniteDomainWithoutSampleBudget,
)
from .groups import FGAbelianGroup, GroupElement
from .report import Report


class PicardPresentation:
    __slots__ = ("A", "B", "c_table", "name")

    def __init__(self, A: FGAbelianGroup, B: FGAbelianGroup, c_table=None,
                 name=None):
        self.A = A
        self.B = B
        self.name = name or "P"
        if c_table is None:
            c_table = [[B.zero() for _ in range(A.rank)] for _ in range(A.rank)]
        table = []
        if len(c_table) != A.rank:
            raise DimensionMismatch("symmetry table must be square on A generators")
        for row in c_table:
            if len(row) != A.rank:
                raise DimensionMismatch("ragged symmetry table")
            table.append(tuple(
                v if isinstance(v, GroupElement) else B.element(v)
                for v in row))
        self.c_table = tuple(table)

    def c(self, x: GroupElement, y: GroupElement) -> GroupElement:
        """Symmetry pairing, extended biadditively from the generator table."""
        out = self.B.zero()
        for i, xi in enumerate(x.coords):
            if not xi:
                continue
            for j, yj in enumerate(y.coords):
                if not yj:
                    continue
                out = out + (xi * yj) * self.c_table[i][j]
        return out

    def lam(self, a, b, cc, d):
        """The (a+b)+(c+d) -> (a+c)+(b+d) interchange; see commutassoc()."""
        return self.c(b, cc)

    def is_discrete(self):
        return self.B.rank == 0 or self.B.order() == 1

    def finite(self):
        return self.A.is_finite() and self.B.is_finite()

    def zero_obj(self):
        return self.A.zero()

    def zero_mor(self):
        return self.B.zero()

    def __repr__(self):
        return f"PicardPresentation({self.name}: pi0={self.A}, pi1={self.B})"


def validate_picard(P: PicardPresentation) -> Report:
    """Check antisymmetry and order compatibility of the symmetry table."""
    rep = Report("validate-picard")
    r = P.A.rank
    for i in range(r):
        for j in range(i, r):
            s = P.c_table[i][j] + P.c_table[j][i]
            loc = f"c[{i}][{j}]+c[{j}][{i}]"
            if s.is_zero():
                rep.ok("antisymmetry", loc)
            else:
                rep.fail("antisymmetry", loc, f"= {s} != 0")
    for i in range(r):
        di = P.A.invariant_factors[i]
        for j in range(r):
            dj = P.A.invariant_factors[j]
            cell = P.c_table[i][j]
            for d, side in ((di, "left"), (dj, "right")):
                if d == 0:
                    continue
                v = d * cell
                loc = f"{d}*c[{i}][{j}] ({side} order)"
                if v.is_zero():
                    rep.ok("order", loc)
                else:
                    rep.fail("order", loc, f"= {v} != 0")
    if not rep.items:
        rep.ok("structure", "trivial generator table")
    return rep


def commutassoc(P: PicardPresentation, a, b, cc, d) -> GroupElement:
    """Value of the canonical isomorphism (a+b)+(c+d) -> (a+c)+(b+d).

    In the strict skeletal model only the middle symmetry move b+c -> c+b
    contributes, so the value is c(b, cc).  The a and d arguments are kept
    in the signature because the isomorphism is indexed by all four objects.
    """
    return P.lam(a, b, cc, d)


def k_invariant(P: PicardPresentation, a) -> GroupElement:
    """Self-symmetry a -> c(a, a); always 2-torsion."""
    return P.c(a, a)


def reorder_value(P: PicardPresentation, values, target_order):
    """B-value of the canonical symmetry isomorphism re-ordering a sum.

    `values` is a list of A-elements summed in list order; `target_order`
    is a permutation (list of indices into values).  The value accumulates
    c(u, v) for every adjacent transposition (u, v) -> (v, u) performed
    while bubble-sorting the identity arrangement into the target one.
    Coherence of the symmetric structure makes the result independent of
    the sorting schedule.
    """
    cur = list(range(len(values)))
    total = P.B.zero()
    for pos, want in enumerate(target_order):
        at = cur.index(want)
        while at > pos:
            left, right = cur[at - 1], cur[at]
            total = total + P.c(values[left], values[right])
            cur[at - 1], cur[at] = right, left
            at -= 1
    return total


def product_picard(P: PicardPresentation, Q: PicardPresentation,
                   name=None) -> PicardPresentation:
    """The product Picard groupoid, componentwise structure."""
    A = FGAbelianGroup(P.A.invariant_factors + Q.A.invariant_factors)
    B = FGAbelianGroup(P.B.invariant_factors + Q.B.invariant_factors)
    rp, rq = P.A.rank, Q.A.rank
    bp = P.B.rank

    def embed(idx, elt, is_left):
        coords = [0] * B.rank
        if is_left:
            coords[:bp] = elt.coords
        else:
            coords[bp:] = elt.coords
        return B.element(coords)

    table = []
    for i in range(rp + rq):
        row = []
        for j in range(rp + rq):
            if i < rp and j < rp:
                row.append(embed(0, P.c_table[i][j], True))
            elif i >= rp and j >= rp:
                row.append(embed(0, Q.c_table[i - rp][j - rp], False))
            else:
                row.append(B.zero())
        table.append(row)
    return PicardPresentation(A, B, table, name=name or f"{P.name}x{Q.name}")


def split_product_element(P, Q, x):
    """Split an element of product_picard(P, Q).A into its components."""
    rp = P.A.rank
    return P.A.element(x.coords[:rp]), Q.A.element(x.coords[rp:])


class PicardFunctorData:
    """A multiadditive functor between Picard presentations with monoidal
    structure cells.

    f0 maps generator-index tuples (one generator index per source slot)
    to target objects and extends multiadditively.  f1 is one matrix per
    slot sending source automorphisms to target automorphisms.  The cells
    witness f(..., y+y', ...) -> f(..., y, ...) + f(..., y', ...) in slot i
    and are supplied as a callable m(slot, others, y, yprime) because they
    are generally not bilinear.
    """

    def __init__(self, sources, target, f0, f1=None, m_cells=None, name=None):
        self.sources = list(sources)
        self.target = target
        self.name = name or "F"
        self.f0_table = {}
        n = len(self.sources)
        for key, val in f0.items():
            key = tuple(key)
            if len(key) != n:
                raise DimensionMismatch("f0 key arity mismatch")
            if not isinstance(val, GroupElement):
                val = target.A.element(val)
            self.f0_table[key] = val
        if f1 is None:
            f1 = [None] * n
        self.f1_tables = []
        for k, tab in enumerate(f1):
            if tab is None:
                self.f1_tables.append(
                    [target.B.zero()] * self.sources[k].B.rank)
            else:
                self.f1_tables.append([
                    v if isinstance(v, GroupElement) else target.B.element(v)
                    for v in tab])
        self.m_cells = m_cells or (lambda slot, others, y, yp: target.B.zero())

    @property
    def arity(self):
        return len(self.sources)

    def f0(self, objs):
        """Multiadditive object map on a tuple of source-A elements."""
        out = self.target.A.zero()
        ranges = [range(src.A.rank) for src in self.sources]
        for idxs in itertools.product(*ranges):
            coeff = 1
            for slot, i in enumerate(idxs):
                coeff *= objs[slot].coords[i]
                if coeff == 0:
                    break
            if coeff == 0:
                continue
            base = self.f0_table.get(idxs)
            if base is not None:
                out = out + coeff * base
        return out

    def f1(self, slot, mor):
        out = self.target.B.zero()
        for i, ci in enumerate(mor.coords):
            if ci:
                out = out + ci * self.f1_tables[slot][i]
        return out

    def m(self, slot, others, y, yprime):
        return self.m_cells(slot, others, y, yprime)


def _tuples_for_check(F, rng, sample_budget, arity_needed):
    """Tuples of source elements to test on: exhaustive or sampled."""
    srcs = [s.A for s in F.sources]
    finite = all(a.is_finite() for a in srcs)
    if finite:
        total = 1
        for a in srcs:
            total *= max(a.order(), 1)
        if total ** arity_needed <= (sample_budget or 4096):
            pools = [a.elements() for a in srcs]
            per_slot = [list(p) for p in pools]
            # exhaustive: every slot independently enumerated
            return "exhaustive", per_slot
    if rng is None or sample_budget is None:
        raise InfiniteDomainWithoutSampleBudget(
            "need a sample budget (and rng) for this domain")

    def sample(slot_group):
        coords = []
        for d in slot_group.invariant_factors:
            coords.append(rng.randrange(d) if d else rng.randint(-4, 4))
        return slot_group.element(coords)

    return "sampled", [sample, srcs]


def check_multiexact_picard_functor(F: PicardFunctorData, rng=None,
                                    sample_budget=None) -> Report:
    """Verify f0/f1 well-definedness, per-slot monoidal coherence
    (unit, associativity, symmetry) and the two-slot compatibility square.

    Finite source groups are enumerated exhaustively when small enough;
    otherwise tuples are sampled with the given budget.
    """
    rep = Report("check-multiexact")
    tgt = F.target
    n = F.arity

    # order compatibility of the tables
    ranges = [range(src.A.rank) for src in F.sources]
    for idxs in itertools.product(*ranges):
        base = F.f0_table.get(idxs, tgt.A.zero())
        for slot, i in enumerate(idxs):
            d = F.sources[slot].A.invariant_factors[i]
            if d and not (d * base).is_zero():
                rep.fail("f0-order", f"slot {slot} gens {idxs}",
                         f"{d} * f0{idxs} != 0")
    for slot, src in enumerate(F.sources):
        for i in range(src.B.rank):
            d = src.B.invariant_factors[i]
            v = F.f1_tables[slot][i]
            if d and not (d * v).is_zero():
                rep.fail("f1-order", f"slot {slot} gen {i}", f"{d}*f1(e_{i}) != 0")

    mode, data = _tuples_for_check(F, rng, sample_budget, arity_needed=3)

    def slot_elements(slot, count):
        if mode == "exhaustive":
            return data[slot]
        sample, srcs = data
        return [sample(srcs[slot]) for _ in range(count)]

    def other_tuples(slot, count=None):
        """Tuples of objects for the slots other than `slot`."""
        others_idx = [k for k in range(n) if k != slot]
        if not others_idx:
            return [()]
        if mode == "exhaustive":
            pools = [data[k] for k in others_idx]
            return list(itertools.product(*pools))
        sample, srcs = data
        return [tuple(sample(srcs[k]) for k in others_idx)
                for _ in range(count or 8)]

    budget = sample_budget or 64

    for slot in range(n):
        elems = slot_elements(slot, budget)
        others_list = other_tuples(slot, 4)
        zero = F.sources[slot].A.zero()
        csrc = F.sources[slot]
        for others in others_list:
            octx = ",".join(map(repr, others)) or "-"
            # unit cells
            for y in elems:
                mv = F.m(slot, others, zero, y) + F.m(slot, others, y, zero)
                if not mv.is_zero():
                    rep.fail("monoidal-unit", f"slot {slot} y={y} @ {octx}",
                             "m(0,y) or m(y,0) nonzero")
            # associativity and symmetry of the cells
            if mode == "exhaustive":
                triples = itertools.product(elems, elems, elems)
                pairs = itertools.product(elems, elems)
            else:
                triples = [(elems[3 * i], elems[3 * i + 1], elems[3 * i + 2])
                           for i in range(len(elems) // 3)]
                pairs = [(elems[2 * i], elems[2 * i + 1])
                         for i in range(len(elems) // 2)]
            for y1, y2, y3 in triples:
                lhs = F.m(slot, others, y1, y2) + F.m(slot, others, y1 + y2, y3)
                rhs = F.m(slot, others, y2, y3) + F.m(slot, others, y1, y2 + y3)
                if lhs != rhs:
                    rep.fail("monoidal-assoc",
                             f"slot {slot} ({y1},{y2},{y3}) @ {octx}",
                             f"{lhs} != {rhs}")
            for y1, y2 in pairs:
                def full(objs_slot):
                    vals = list(others)
                    vals.insert(slot, objs_slot)
                    return tuple(vals)
                gy1 = F.f0(full(y1))
                gy2 = F.f0(full(y2))
                lhs = F.f1(slot, csrc.c(y1, y2)) + F.m(slot, others, y2, y1)
                rhs = F.m(slot, others, y1, y2) + tgt.c(gy1, gy2)
                if lhs != rhs:
                    rep.fail("monoidal-symmetry",
                             f"slot {slot} ({y1},{y2}) @ {octx}",
                             f"{lhs} != {rhs}")

    # two-slot compatibility square
    for si, sj in itertools.combinations(range(n), 2):
        if mode == "exhaustive":
            ei = data[si]
            ej = data[sj]
            rest_idx = [k for k in range(n) if k not in (si, sj)]
            rest_pools = [data[k] for k in rest_idx]
            rests = list(itertools.product(*rest_pools)) if rest_idx else [()]
            quads = itertools.product(ei, ei, ej, ej)
            combos = [(a, b, cc, d, rest) for (a, b, cc, d) in quads
                      for rest in rests]
        else:
            sample, srcs = data
            combos = []
            for _ in range(budget):
                a = sample(srcs[si]); b = sample(srcs[si])
                cc = sample(srcs[sj]); d = sample(srcs[sj])
                rest = tuple(sample(srcs[k]) for k in range(n)
                             if k not in (si, sj))
                combos.append((a, b, cc, d, rest))
        for a, b, cc, d, rest in combos:
            def tup(oi, oj):
                vals = []
                it = iter(rest)
                for k in range(n):
                    if k == si:
                        vals.append(oi)
                    elif k == sj:
                        vals.append(oj)
                    else:
                        vals.append(next(it))
                return tuple(vals)

            def others_for(slot, tup_full):
                return tuple(v for k, v in enumerate(tup_full) if k != slot)

            lam = tgt.c(F.f0(tup(a, d)), F.f0(tup(b, cc)))
            lhs = (F.m(si, others_for(si, tup(a, cc + d)), a, b)
                   + F.m(sj, others_for(sj, tup(a, cc)), cc, d)
                   + F.m(sj, others_for(sj, tup(b, cc)), cc, d)
                   + lam)
            rhs = (F.m(sj, others_for(sj, tup(a + b, cc)), cc, d)
                   + F.m(si, others_for(si, tup(a, cc)), a, b)
                   + F.m(si, others_for(si, tup(a, d)), a, b))
            if lhs != rhs:
                rep.fail("compatibility-square",
                         f"slots ({si},{sj}) a={a} b={b} c={cc} d={d}",
                         f"{lhs} != {rhs}")
    if not rep.items:
        rep.ok("multiexact", "all cells", "nothing to check (empty domain)")
    elif not rep.failures:
        rep.ok("multiexact", "all cells")
    return rep
