"""Line objects, coverings, descent data and gluing."""
import functools
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from helpers.logging import logger
from relproj import linalg
from relproj.amod import (
    AlgebraTensor,
    ModuleInC,
    ModuleMap,
    TensorOver,
    base_change,
    base_change_map,
    compose_module_maps,
    composite_base_change_iso,
    factor_through_epi,
    ideal_module,
    inner_hom,
    inverse_module_map,
    module_direct_sum,
    module_map,
    quotient_module,
    regular_module,
    restrict_scalars,
    submodule,
    tensor_algebras_over,
    tensor_over,
)
from relproj.calg import (
    AlgebraInC,
    AlgebraMap,
    Ideal,
    algebra_from_structure,
    check_algebra_map,
    compose_algebra_maps,
    endo,
    generated_ideal,
    maximal_ideals,
    partition_of_unity,
    random_element,
)
from relproj.errors import InputError
from relproj.graded_linear import (
    GradedMap,
    GradedSubspace,
    compose,
    direct_sum,
    identity_map,
    is_epi,
    is_invertible,
    is_mono,
    kernel_subspace,
    symmetry_map,
)
from relproj.linalg import ZERO, Vector
from relproj.report import CheckReport


def dual_module(A: AlgebraInC, L: ModuleInC) -> ModuleInC:
    return inner_hom(A, L, regular_module(A)).module


def dual_map(f: ModuleMap) -> ModuleMap:
    """f^v: N^v -> M^v, h -> h f."""
    A = f.source.algebra
    src = inner_hom(A, f.target, regular_module(A))
    dst = inner_hom(A, f.source, regular_module(A))
    columns = [
        dst.from_matrix(linalg.mul(src.to_matrix(src.module.carrier.basis_vector(h)), f.map.matrix))
        for h in range(src.module.carrier.total)
    ]
    m = linalg.from_columns(columns, dst.module.carrier.total)
    return ModuleMap(src.module, dst.module, GradedMap.from_matrix(src.module.carrier, dst.module.carrier, m))


@dataclass(frozen=True, eq=False)
class LineCertificate:
    """L, its dual, the evaluation L^v (x)_A L -> A and the coevaluation A -> L^v (x)_A L."""

    module: ModuleInC
    inverse: ModuleInC
    tensor: TensorOver
    evaluation: ModuleMap
    coevaluation: ModuleMap
    triangles: CheckReport
    signature: Vector | None


def _pairing(A: AlgebraInC, L: ModuleInC):
    """eps(f (x) m) for basis vectors f of L^v and m of L, memoized."""
    hom = inner_hom(A, L, regular_module(A))
    mats = [linalg.entries(hom.to_matrix(hom.module.carrier.basis_vector(f))) for f in range(hom.module.carrier.total)]

    @functools.cache
    def pair(f: int, m: int) -> Vector:
        return tuple(mats[f][r][m] for r in range(A.dimension))

    return pair


def _check_triangles(A: AlgebraInC, L: ModuleInC, Ld: ModuleInC, lifted: Sequence[tuple[int, int, Fraction]]) -> CheckReport:
    """Both zig-zag identities for delta = sum t_k f_k (x) m_k, exactly."""
    phi, R = A.phi, A.ratio
    group = A.group
    s, neg = group.sum_table, group.neg_table
    ldeg, ddeg = L.carrier.degrees, Ld.carrier.degrees
    pair = _pairing(A, L)
    report = CheckReport("triangles")
    for m in range(L.carrier.total):
        report.checked += 1
        z = ldeg[m]
        total = [ZERO] * L.carrier.total
        for f, mk, t in lifted:
            g = ddeg[f]
            c = t * R.at(z, g) / phi.at(z, g, neg[g])
            for k, v in enumerate(L.act(pair(f, m), L.carrier.basis_vector(mk))):
                total[k] += c * v
        if tuple(total) != L.carrier.basis_vector(m):
            report.fail({"triangle": "module", "basis": m})
    for f0 in range(Ld.carrier.total):
        report.checked += 1
        h = ddeg[f0]
        total = [ZERO] * Ld.carrier.total
        for f, mk, t in lifted:
            g = ddeg[f]
            c = t * phi.at(g, neg[g], h) * R.at(neg[g], h) * R.at(g, s[h][neg[g]])
            for k, v in enumerate(Ld.act(pair(f0, mk), Ld.carrier.basis_vector(f))):
                total[k] += c * v
        if tuple(total) != Ld.carrier.basis_vector(f0):
            report.fail({"triangle": "dual", "basis": f0})
    return report


def find_inverse(A: AlgebraInC, L: ModuleInC) -> LineCertificate | None:
    """Certificate with L^v = hom_A(L, A) when the evaluation is invertible."""
    hom = inner_hom(A, L, regular_module(A))
    Ld = hom.module
    t = tensor_over(A, Ld, L)
    reg = regular_module(A)
    evaluation = ModuleMap(t.module, reg, t.induced(hom.evaluation))
    coevaluation = inverse_module_map(evaluation)
    if coevaluation is None:
        logger.debug("evaluation %s -> %s is not invertible", t.module.carrier.dims, A.carrier.dims)
        return None
    delta = t.section.apply(coevaluation.apply(A.unit))
    lifted = [(f, m, delta[k]) for k, (f, m) in enumerate(t.product.pairs) if delta[k]]
    triangles = _check_triangles(A, L, Ld, lifted)
    if not triangles.passed:
        logger.warning("duality triangles fail: %s", triangles.violations)
    return LineCertificate(L, Ld, t, evaluation, coevaluation, triangles, signature(A, L))


def signature(A: AlgebraInC, L: ModuleInC) -> Vector | None:
    """The identity-degree s with sigma_{L,L} = rho(s, -) on L (x)_A L."""
    t = tensor_over(A, L, L)
    swap = compose(t.projection, symmetry_map(L.carrier, L.carrier, A.ratio))
    if not t.kills_relations(swap):
        raise ArithmeticError("symmetry does not descend to the tensor over A")
    induced = linalg.entries(compose(swap, t.section).matrix)
    n = t.module.carrier.total
    zero_idx = list(A.degree_zero)
    columns = [[v for row in linalg.entries(t.module.action[k]) for v in row] for k in zero_idx]
    solution = linalg.solve(
        linalg.from_columns(columns, n * n), linalg.column([v for row in induced for v in row])
    )
    if solution is None:
        return None
    coeffs = linalg.flat(solution)
    result = [ZERO] * A.dimension
    for pos, k in enumerate(zero_idx):
        result[k] = coeffs[pos]
    return tuple(result)


def is_symtrivial(A: AlgebraInC, M: ModuleInC) -> bool:
    """sigma_{M,M} induces the identity on M (x)_A M; for a line this is signature(A, M) == 1."""
    t = tensor_over(A, M, M)
    swap = compose(t.projection, symmetry_map(M.carrier, M.carrier, A.ratio))
    if not t.kills_relations(swap):
        raise ArithmeticError("symmetry does not descend to the tensor over A")
    return compose(swap, t.section).equals(identity_map(t.module.carrier))


def is_line_object(A: AlgebraInC, L: ModuleInC) -> tuple[bool, CheckReport]:
    report = CheckReport("line_object")
    report.checked += 1
    cert = find_inverse(A, L)
    if cert is None:
        report.fail({"reason": "not invertible"})
        report.details = {"invertible": False}
        return False, report
    report = report.merge(cert.triangles)
    sign = cert.signature
    report.checked += 1
    if sign != A.unit:
        report.fail({"reason": "nontrivial signature", "signature": list(sign) if sign else None})
    report.details = {"invertible": True, "signature": list(sign) if sign else None}
    return report.passed, report


def epi_from_unit_is_iso(A: AlgebraInC, p: ModuleMap) -> tuple[ModuleMap | None, CheckReport]:
    """Every epimorphism A -> L onto a line is invertible; produce the inverse."""
    if p.source is not regular_module(A):
        raise InputError("the map must start at A")
    if not is_epi(p.map):
        raise InputError("the map is not an epimorphism")
    report = CheckReport("epi_from_unit")
    report.checked += 1
    inverse = inverse_module_map(p)
    if inverse is None:
        logger.warning("epimorphism from the unit onto a line is not invertible: dims %s -> %s", p.source.carrier.dims, p.target.carrier.dims)
        report.fail({"reason": "epimorphism from the unit is not invertible"})
    return inverse, report


class ProductAlgebra(NamedTuple):
    algebra: AlgebraInC
    projections: tuple[AlgebraMap, ...]
    positions: tuple[tuple[int, ...], ...]


def product_algebra(algebras: Sequence[AlgebraInC]) -> ProductAlgebra:
    """Componentwise product; ``positions[i][k]`` is where e_k of factor i sits."""
    if not algebras:
        raise InputError("a product needs at least one factor")
    cochain = algebras[0].cochain
    if any(A.cochain != cochain for A in algebras):
        raise InputError("factors live in different categories")
    ds = direct_sum([A.carrier for A in algebras])
    n = ds.space.total
    positions = []
    for inj in ds.injections:
        data = linalg.entries(inj.matrix)
        positions.append(tuple(next(r for r in range(n) if data[r][k]) for k in range(inj.source.total)))
    products = {}
    unit = [ZERO] * n
    for A, pos in zip(algebras, positions):
        for i, j in itertools.product(range(A.dimension), repeat=2):
            vector = [ZERO] * n
            for k, v in A.table[i][j]:
                vector[pos[k]] = v
            products[pos[i], pos[j]] = vector
        for k, v in enumerate(A.unit):
            unit[pos[k]] = v
    name = "x".join(A.name for A in algebras)
    B = algebra_from_structure(cochain, ds.space, products, unit, name)
    projections = tuple(AlgebraMap(B, A, proj, "projection") for A, proj in zip(algebras, ds.projections))
    return ProductAlgebra(B, projections, tuple(positions))


def product_module(product: ProductAlgebra, modules: Sequence[ModuleInC]) -> ModuleInC:
    """prod M_i over prod A_i, factor i acting on summand i only."""
    B = product.algebra
    ds = direct_sum([M.carrier for M in modules])
    n = ds.space.total
    ops = [linalg.zeros(n, n) for _ in range(B.dimension)]
    for M, pos, inj, proj in zip(modules, product.positions, ds.injections, ds.projections):
        for p in range(M.algebra.dimension):
            ops[pos[p]] = linalg.add(ops[pos[p]], linalg.chain(inj.matrix, M.action[p], proj.matrix))
    return ModuleInC(B, ds.space, tuple(ops), "x".join(M.name for M in modules))


class ProductLine(NamedTuple):
    module: ModuleInC
    product: ProductAlgebra
    inverse: ModuleInC
    line: bool
    report: CheckReport


def product_line(lines: Sequence[ModuleInC]) -> ProductLine:
    product = product_algebra([L.algebra for L in lines])
    J = product_module(product, lines)
    inverse = product_module(product, [dual_module(L.algebra, L) for L in lines])
    verdict, report = is_line_object(product.algebra, J)
    return ProductLine(J, product, inverse, verdict, report)


def direct_sum_symtrivial_check(A: AlgebraInC, M: ModuleInC, N: ModuleInC) -> CheckReport:
    """M (+) N is symtrivial iff M (x)_A N = 0 and both summands are symtrivial."""
    report = CheckReport("direct_sum_symtrivial", checked=1)
    whole = is_symtrivial(A, module_direct_sum([M, N]).module)
    orthogonal = tensor_over(A, M, N).module.carrier.total == 0
    parts = is_symtrivial(A, M) and is_symtrivial(A, N)
    if whole != (orthogonal and parts):
        report.fail({"symtrivial": whole, "orthogonal": orthogonal, "summands_symtrivial": parts})
    report.details = {"symtrivial": whole, "orthogonal": orthogonal}
    return report


class TripleOverlap(NamedTuple):
    """A_ij (x)_A A_k with the maps in from each pair overlap and from each A_i."""

    algebra: AlgebraInC
    from_ij: AlgebraMap
    from_ik: AlgebraMap
    from_jk: AlgebraMap
    legs: tuple[AlgebraMap, AlgebraMap, AlgebraMap]


@dataclass(frozen=True, eq=False)
class Covering:
    base: AlgebraInC
    legs: tuple[AlgebraMap, ...]
    _overlaps: dict = field(default_factory=dict, init=False, repr=False)
    _triples: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        for k, u in enumerate(self.legs):
            if u.source is not self.base:
                raise InputError("every leg must start at the base", location=f"legs[{k}]")
            if not check_algebra_map(u).passed:
                raise InputError("leg is not an algebra map", location=f"legs[{k}]")

    def overlap(self, i: int, j: int) -> AlgebraTensor:
        """A_i (x)_A A_j for i < j."""
        if (i, j) not in self._overlaps:
            self._overlaps[i, j] = tensor_algebras_over(self.base, self.legs[i], self.legs[j])
        return self._overlaps[i, j]

    def overlap_base(self, i: int, j: int) -> AlgebraMap:
        ov = self.overlap(i, j)
        return compose_algebra_maps(ov.left, self.legs[i])

    def triple(self, i: int, j: int, k: int) -> TripleOverlap:
        if (i, j, k) not in self._triples:
            ij = self.overlap(i, j)
            t = tensor_algebras_over(self.base, self.overlap_base(i, j), self.legs[k])
            D = t.algebra
            via_i = compose_algebra_maps(t.left, ij.left)
            via_j = compose_algebra_maps(t.left, ij.right)
            from_ik = self._overlap_into(i, k, via_i, t.right, D)
            from_jk = self._overlap_into(j, k, via_j, t.right, D)
            self._triples[i, j, k] = TripleOverlap(D, t.left, from_ik, from_jk, (via_i, via_j, t.right))
        return self._triples[i, j, k]

    def _overlap_into(self, a: int, b: int, la: AlgebraMap, lb: AlgebraMap, D: AlgebraInC) -> AlgebraMap:
        """A_a (x)_A A_b -> D induced by x (x) y -> la(x) lb(y)."""
        ov = self.overlap(a, b)
        t = ov.tensor
        A_a, A_b = self.legs[a].target, self.legs[b].target
        columns = [
            D.multiply(la.apply(A_a.basis(x)), lb.apply(A_b.basis(y))) for x, y in t.product.pairs
        ]
        g = GradedMap.from_matrix(t.product.space, D.carrier, linalg.from_columns(columns, D.dimension))
        induced = factor_through_epi(t.projection, g)
        if induced is None:
            raise ArithmeticError(f"overlap {a}{b} does not map into the triple overlap")
        return AlgebraMap(ov.algebra, D, induced, "overlap_restriction")


def _localization_family(cov: Covering) -> list | None:
    if cov.legs and all(u.kind == "localization" for u in cov.legs):
        return [endo(cov.base, u.element) for u in cov.legs]
    return None


def verify_covering(cov: Covering, seed: int = 0, samples: int = 8) -> CheckReport:
    """Flatness, joint conservativity and finite presentation of the legs."""
    A = cov.base
    report = CheckReport("covering")
    structural = {"localization", "projection", "identity"}
    if all(u.kind in structural for u in cov.legs):
        flat = "certified"
    else:
        flat = "not refuted"
        rng = random.Random(seed)
        for _ in range(samples):
            a = tuple(v if A.carrier.degrees[k] == A.identity_degree else ZERO for k, v in enumerate(random_element(A, rng)))
            I = generated_ideal(A, [a])
            module, inclusion = ideal_module(I)
            for k, u in enumerate(cov.legs):
                report.checked += 1
                if not is_mono(base_change_map(u, inclusion).map):
                    flat = "refuted"
                    report.fail({"flat": "base change of an ideal inclusion is not mono", "leg": k, "ideal": list(I.subspace.dims)})
    killed = []
    for m in maximal_ideals(A):
        report.checked += 1
        simple, _ = quotient_module(regular_module(A), m.subspace)
        if all(base_change(u, simple).module.carrier.total == 0 for u in cov.legs):
            killed.append(m)
            report.fail({"jointly_conservative": "a simple module is killed by every leg", "ideal": [list(v) for v in m.subspace.vectors()]})
    conservative = not killed
    details = {
        "flat": flat,
        "jointly_conservative": conservative,
        "finite_presentation": True,
        "legs": len(cov.legs),
    }
    family = _localization_family(cov)
    if family is not None:
        certificate = partition_of_unity(A, family)
        details["partition_of_unity"] = None if certificate is None else [list(s.element) for s in certificate]
        report.checked += 1
        if (certificate is not None) != conservative:
            report.fail({"reason": "partition of unity and conservativity disagree"})
    report.details = details
    return report


def base_change_line_check(u: AlgebraMap, L: ModuleInC) -> CheckReport:
    """B (x)_A - keeps line objects; along a faithfully flat u it also reflects them."""
    A, B = u.source, u.target
    report = CheckReport("base_change_line", checked=1)
    line, _ = is_line_object(A, L)
    moved, _ = is_line_object(B, base_change(u, L).module)
    if line and not moved:
        report.fail({"reason": "base change of a line object is not a line object"})
    faithfully_flat = verify_covering(Covering(A, (u,))).passed
    if faithfully_flat:
        report.checked += 1
        if moved and not line:
            report.fail({"reason": "faithfully flat base change of a non-line is a line object"})
    report.details = {"line": line, "base_changed_line": moved, "faithfully_flat": faithfully_flat}
    return report


def membership_U_I(u: AlgebraMap, I: Ideal) -> bool:
    """Is B I = B for the image of I under u?"""
    B = u.target
    images = [u.apply(v) for v in I.subspace.vectors()]
    products = [B.multiply(B.basis(b), w) for b in range(B.dimension) for w in images]
    return GradedSubspace.from_vectors(B.carrier, products).is_whole()


@dataclass(frozen=True, eq=False)
class DescentDatum:
    """Locals L_i over A_i and transitions theta_ij over A_ij for i < j.

    theta_ij runs from base_change(left leg, L_i) to base_change(right leg, L_j).
    """

    covering: Covering
    locals: tuple[ModuleInC, ...]
    transitions: Mapping[tuple[int, int], ModuleMap]


def descent_datum(cov: Covering, locals_: Sequence[ModuleInC], transitions: Mapping[tuple[int, int], object]) -> DescentDatum:
    """Transitions may be ModuleMaps, matrices (row lists) or scalars."""
    if len(locals_) != len(cov.legs):
        raise InputError("one local module per leg is required")
    for k, (L, u) in enumerate(zip(locals_, cov.legs)):
        if L.algebra is not u.target:
            raise InputError("local module lives over the wrong algebra", location=f"locals[{k}]")
    maps = {}
    for i, j in itertools.combinations(range(len(cov.legs)), 2):
        ov = cov.overlap(i, j)
        src = base_change(ov.left, locals_[i]).module
        dst = base_change(ov.right, locals_[j]).module
        if (i, j) not in transitions:
            raise InputError("missing transition", location=f"transitions[{i},{j}]")
        given = transitions[i, j]
        if isinstance(given, ModuleMap):
            if given.source is not src or given.target is not dst:
                raise InputError("transition between the wrong modules", location=f"transitions[{i},{j}]")
            maps[i, j] = given
            continue
        if isinstance(given, (int, Fraction)):
            if src.carrier.dims != dst.carrier.dims:
                raise InputError("scalar transition between modules of different shape", location=f"transitions[{i},{j}]")
            m = linalg.scale(linalg.identity(src.carrier.total), given)
        else:
            m = linalg.matrix(given, (dst.carrier.total, src.carrier.total))
        maps[i, j] = module_map(src, dst, m)
    return DescentDatum(cov, tuple(locals_), maps)


def _restricted(
    cov: Covering,
    theta: ModuleMap,
    pair: tuple[int, int],
    w: AlgebraMap,
    legs: tuple[AlgebraMap, AlgebraMap],
    modules: tuple[ModuleInC, ModuleInC],
):
    """theta_ab carried along w, as a matrix between (legs[0])* L_a and (legs[1])* L_b."""
    ov = cov.overlap(*pair)
    moved = base_change_map(w, theta)
    src = composite_base_change_iso(ov.left, w, modules[0], legs[0])
    dst = composite_base_change_iso(ov.right, w, modules[1], legs[1])
    src_inv = linalg.inverse(src.map.matrix)
    if src_inv is None:
        raise ArithmeticError("canonical base change comparison is not invertible")
    return linalg.chain(dst.map.matrix, moved.map.matrix, src_inv)


def check_cocycle(datum: DescentDatum) -> CheckReport:
    """theta_jk theta_ij = theta_ik over every triple overlap."""
    cov = datum.covering
    L = datum.locals
    report = CheckReport("cocycle")
    for i, j, k in itertools.combinations(range(len(cov.legs)), 3):
        report.checked += 1
        t = cov.triple(i, j, k)
        li, lj, lk = t.legs
        ij = _restricted(cov, datum.transitions[i, j], (i, j), t.from_ij, (li, lj), (L[i], L[j]))
        jk = _restricted(cov, datum.transitions[j, k], (j, k), t.from_jk, (lj, lk), (L[j], L[k]))
        ik = _restricted(cov, datum.transitions[i, k], (i, k), t.from_ik, (li, lk), (L[i], L[k]))
        if not linalg.equal(linalg.mul(jk, ij), ik):
            report.fail({"triple": [i, j, k]})
    return report


class Glued(NamedTuple):
    module: ModuleInC
    inclusion: ModuleMap
    sections: tuple[ModuleMap, ...]
    comparisons: tuple[ModuleMap, ...]
    report: CheckReport


def glue(datum: DescentDatum) -> Glued:
    """Equalizer of prod L_i => prod L_j|ij, with comparisons base_change(u_i, L) -> L_i."""
    cocycle = check_cocycle(datum)
    if not cocycle.passed:
        raise InputError("transitions violate the cocycle condition", location=str(cocycle.violations[0]))
    cov = datum.covering
    A = cov.base
    restricted = [restrict_scalars(u, L) for u, L in zip(cov.legs, datum.locals)]
    total = module_direct_sum(restricted, A)
    pairs = list(itertools.combinations(range(len(cov.legs)), 2))
    targets = direct_sum(
        [base_change(cov.overlap(i, j).right, datum.locals[j]).module.carrier for i, j in pairs], A.group
    )
    difference = linalg.zeros(targets.space.total, total.module.carrier.total)
    for (i, j), inj in zip(pairs, targets.injections):
        ov = cov.overlap(i, j)
        unit_i = base_change(ov.left, datum.locals[i]).unit
        unit_j = base_change(ov.right, datum.locals[j]).unit
        forward = linalg.chain(datum.transitions[i, j].map.matrix, unit_i.matrix, total.projections[i].map.matrix)
        backward = linalg.mul(unit_j.matrix, total.projections[j].map.matrix)
        difference = linalg.add(difference, linalg.mul(inj.matrix, linalg.sub(forward, backward)))
    kernel = kernel_subspace(GradedMap.from_matrix(total.module.carrier, targets.space, difference))
    glued, inclusion = submodule(total.module, kernel)
    report = CheckReport("glue").merge(cocycle)
    comparisons = []
    sections = tuple(compose_module_maps(p, inclusion) for p in total.projections)
    for k, (u, L_k) in enumerate(zip(cov.legs, datum.locals)):
        bc = base_change(u, glued)
        to_local = sections[k].map.matrix
        columns = []
        for b, x in bc.tensor.product.pairs:
            local = linalg.flat(linalg.mul(to_local, linalg.column(glued.carrier.basis_vector(x))))
            columns.append(L_k.act(u.target.basis(b), local))
        g = GradedMap.from_matrix(bc.tensor.product.space, L_k.carrier, linalg.from_columns(columns, L_k.carrier.total))
        comparison = ModuleMap(bc.module, L_k, bc.tensor.induced(g))
        report.checked += 1
        if not is_invertible(comparison.map):
            report.fail({"comparison": k, "reason": "base change of the glued module is not the local module"})
        comparisons.append(comparison)
    logger.debug("glued module: dims %s from %s locals", glued.carrier.dims, len(datum.locals))
    return Glued(glued, inclusion, sections, tuple(comparisons), report)


def restrict_to_covering(cov: Covering, M: ModuleInC) -> DescentDatum:
    """L_i = base_change(u_i, M) with the canonical transitions."""
    locals_ = tuple(base_change(u, M).module for u in cov.legs)
    maps = {}
    for i, j in itertools.combinations(range(len(cov.legs)), 2):
        ov = cov.overlap(i, j)
        shared = cov.overlap_base(i, j)
        through_i = composite_base_change_iso(cov.legs[i], ov.left, M, shared)
        through_j = composite_base_change_iso(cov.legs[j], ov.right, M, shared)
        back = linalg.inverse(through_j.map.matrix)
        if back is None:
            raise ArithmeticError("canonical base change comparison is not invertible")
        m = linalg.mul(back, through_i.map.matrix)
        src, dst = through_i.source, through_j.source
        maps[i, j] = ModuleMap(src, dst, GradedMap.from_matrix(src.carrier, dst.carrier, m))
    return DescentDatum(cov, locals_, maps)
