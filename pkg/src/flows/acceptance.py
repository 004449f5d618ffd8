import random
from fractions import Fraction

from flows.octonion_suite import COVER_POINTS
from helpers.logging import logger
from relproj.amod import (
    find_isomorphism,
    find_retraction,
    free_rank,
    has_retraction,
    ideal_module,
    module_direct_sum,
    module_from_structure,
    o_module_from_degree_zero,
    regular_module,
    zeta_map,
)
from relproj.calg import (
    check_algebra_axioms,
    dual_numbers,
    element_inverse,
    endo,
    factor_through_localization,
    generated_ideal,
    ground_algebra,
    identity_algebra_map,
    inverse_in_localization,
    is_field_object,
    localize,
    octonions,
    partition_of_unity,
    product_of_fields,
    quotient_algebra,
    underlying_identities,
)
from relproj.cochain_core import (
    check_hexagon,
    check_pentagon,
    coboundary3,
    octonion_cochain,
    super_cochain,
    trivial_cochain,
    z2_cubed,
)
from relproj.graded_linear import GradedSpace, is_invertible
from relproj.linedesc import (
    Covering,
    base_change_line_check,
    descent_datum,
    direct_sum_symtrivial_check,
    glue,
    is_line_object,
    product_line,
    restrict_to_covering,
    signature,
)
from relproj.linalg import ONE, ZERO
from relproj.proj import (
    base_change_point,
    chart_coordinates,
    chart_membership,
    dualize_point,
    dualize_point_inv,
    field_cover_check,
    point_from_chart,
    points_equal,
    quotient_chart_coordinates,
    quotient_chart_membership,
    quotients_equal,
    random_point,
    sheaf_condition_instance,
    transition,
    unit_mono,
    verify_point,
)
from relproj.report import CheckReport

IDENTITY_TRIALS = 1000
PARTITIONS = 50
LOCALIZATIONS = 50
ROUND_TRIPS = 20
PROJ_POINTS = COVER_POINTS
ZETA_TRIPLES = 30
LAMBDAS = (Fraction(1), Fraction(2), Fraction(-3))
_SCALARS = (Fraction(1), Fraction(2), Fraction(-1), Fraction(3), Fraction(1, 2))


def _absorb(report: CheckReport, sub: CheckReport, label: str | None = None) -> None:
    report.checked += sub.checked
    for witness in sub.violations:
        report.fail({"check": label or sub.name, "witness": witness})


def _expect(report: CheckReport, holds: bool, witness) -> None:
    report.checked += 1
    if not holds:
        report.fail(witness)


def _nonzero_vector(rng: random.Random, n: int, keep: int | None = None) -> list[Fraction]:
    v = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
    position = rng.randrange(n) if keep is None else keep
    v[position] = rng.choice(_SCALARS)
    return v


def _random_unit(A, rng: random.Random) -> tuple[Fraction, ...]:
    """Identity-degree element with every identity-degree coordinate nonzero."""
    return tuple(rng.choice(_SCALARS) if k in A.degree_zero else ZERO for k in range(A.dimension))


def _factor_projections(A) -> list:
    """A -> Q onto each factor of a product of fields."""
    maps = []
    for k in range(A.dimension):
        complement = tuple(u - v for u, v in zip(A.unit, A.basis(k)))
        maps.append(quotient_algebra(A, generated_ideal(A, [complement]), kind="projection")[1])
    return maps


def two_chart_cover(A):
    """Q^3 covered by the localizations at (1, 1, 0) and (0, 1, 1)."""
    legs = tuple(localize(A, endo(A, f)).map for f in ((ONE, ONE, ZERO), (ZERO, ONE, ONE)))
    return Covering(A, legs)


def odd_line():
    """The odd line of super vector spaces, over the ground algebra of the super category."""
    A = ground_algebra(super_cochain())
    return A, module_from_structure(A, GradedSpace(A.group, (0, 1)), {(0, 0): (ONE,)}, "odd")


def octonion_line(rng: random.Random, O=None):
    O = O or octonions()
    identity = O.group.identity
    isos = {g: [[rng.choice(_SCALARS)]] for g in O.group.elements if g != identity}
    return o_module_from_degree_zero(1, isos, O)


def monoidal_axioms() -> CheckReport:
    report = CheckReport("monoidal_axioms")
    counts = {}
    for name, F in (
        ("octonion", octonion_cochain()),
        ("super", super_cochain()),
        ("trivial", trivial_cochain(z2_cubed())),
    ):
        phi = coboundary3(F)
        pentagon, hexagon = check_pentagon(phi), check_hexagon(F, phi)
        _absorb(report, pentagon, f"{name}/pentagon")
        _absorb(report, hexagon, f"{name}/hexagon")
        counts[name] = {"pentagon": pentagon.checked, "hexagon": hexagon.checked}
    phi = coboundary3(octonion_cochain())
    x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    perturbed = check_pentagon(phi.perturbed(x, y, z, -phi(x, y, z)))
    _expect(report, not perturbed.passed, {"check": "perturbation", "reason": "perturbed associator passes"})
    report.details = {
        "counts": counts,
        "perturbation_witness": perturbed.violations[0] if perturbed.violations else None,
    }
    return report


def octonion_algebra(seed: int, trials: int) -> CheckReport:
    O = octonions()
    axioms = check_algebra_axioms(O)
    identities = underlying_identities(O, trials, seed)
    report = CheckReport("octonion_algebra")
    _absorb(report, axioms)
    _absorb(report, identities)
    _expect(
        report,
        axioms.details["associativity"] == 512 and axioms.details["commutativity"] == 64,
        {"reason": "basis tuple counts", "counts": axioms.details},
    )
    _expect(report, identities.details["witness"] == "non-associative", {"reason": "(e1 e2) e4 = e1 (e2 e4)"})
    report.details = {**axioms.details, "trials": trials, "witness": identities.details["witness"]}
    return report


def partitions(seed: int, count: int) -> CheckReport:
    """Certificates exist exactly for generating families; odd trials are forced not to generate."""
    rng = random.Random(seed)
    report = CheckReport("partition_of_unity")
    generating = 0
    for trial in range(count):
        n = 1 + trial % 4
        A = product_of_fields(n)
        family = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(1 + rng.randrange(3))]
        if trial % 2:
            dead = rng.randrange(n)
            for f in family:
                f[dead] = ZERO
        elif trial % 4 == 0:
            family.append(list(_random_unit(A, rng)))
        whole = generated_ideal(A, family).is_whole()
        certificate = partition_of_unity(A, [endo(A, f) for f in family])
        _expect(report, (certificate is not None) == whole, {"trial": trial, "whole": whole})
        if trial % 2:
            _expect(report, certificate is None, {"trial": trial, "reason": "certificate for a non-generating family"})
        if certificate is not None:
            total = [ZERO] * n
            for s, f in zip(certificate, family):
                total = [a + b for a, b in zip(total, A.multiply(s.element, f))]
            _expect(report, tuple(total) == A.unit, {"trial": trial, "reason": "sum s_i f_i != 1"})
        generating += whole
    _expect(
        report,
        generating > 0 and (count == 1 or generating < count),
        {"reason": "corpus lacks generating or non-generating families"},
    )
    report.details = {"algebras": count, "generating": generating}
    return report


def localizations(seed: int, count: int) -> CheckReport:
    rng = random.Random(seed)
    report = CheckReport("localization")
    seen = {}
    for trial in range(count):
        if trial % 5 == 4:
            A = seen.setdefault("dual", dual_numbers())
            f = [rng.choice(_SCALARS), Fraction(rng.randint(-2, 2))]
            targets = [identity_algebra_map(A), quotient_algebra(A, generated_ideal(A, [(ZERO, ONE)]))[1]]
        else:
            n = 1 + trial % 4
            A = seen.setdefault(n, product_of_fields(n))
            f = _nonzero_vector(rng, n)
            targets = [identity_algebra_map(A)] + _factor_projections(A)
        loc = localize(A, endo(A, f))
        _expect(report, inverse_in_localization(loc.map) is not None, {"trial": trial, "reason": "f not inverted"})
        for k, v in enumerate(targets):
            w = factor_through_localization(loc.map, v)
            inverts = element_inverse(v.target, v.apply(f)) is not None
            _expect(report, (w is not None) == inverts, {"trial": trial, "target": k, "inverts": inverts})
    for A in seen.values():
        at_unit = localize(A, endo(A, A.unit))
        _expect(
            report,
            at_unit.algebra.dimension == A.dimension and is_invertible(at_unit.map.map),
            {"algebra": A.name, "reason": "localizing at 1 changes the algebra"},
        )
    report.details = {"pairs": count}
    return report


def line_objects(seed: int) -> CheckReport:
    rng = random.Random(seed)
    report = CheckReport("line_objects")
    O = octonions()
    Q2, D = product_of_fields(2), dual_numbers()
    O1 = octonion_line(rng, O)
    cases = [
        ("Q^2", Q2, regular_module(Q2)),
        ("dual_numbers", D, regular_module(D)),
        ("octonions", O, regular_module(O)),
        ("O[1]", O, O1),
    ]
    for name, A, L in cases:
        line, sub = is_line_object(A, L)
        _absorb(report, sub, name)
        _expect(report, signature(A, L) == A.unit, {"line": name, "reason": "signature is not +1"})
    A, L = odd_line()
    line, sub = is_line_object(A, L)
    _expect(report, sub.details["invertible"] and not line, {"line": "odd", "reason": "odd line misclassified"})
    _expect(report, signature(A, L) == (-ONE,), {"line": "odd", "signature": signature(A, L)})
    for name, factors in (("Q^2 x dual_numbers", [regular_module(Q2), regular_module(D)]), ("O x O[1]", [regular_module(O), O1])):
        product = product_line(factors)
        _absorb(report, product.report, name)
        _expect(report, product.line, {"product": name})
    first, second = (ideal_module(generated_ideal(Q2, [e]))[0] for e in ((ONE, ZERO), (ZERO, ONE)))
    Q = ground_algebra()
    sums = [
        ("idempotent ideals of Q^2", Q2, first, second),
        ("Q + Q", Q, regular_module(Q), regular_module(Q)),
        ("odd + odd", A, L, L),
    ]
    for name, B, M, N in sums:
        _absorb(report, direct_sum_symtrivial_check(B, M, N), name)
    changes = [
        ("Q^2 -> Q", _factor_projections(Q2)[0], regular_module(Q2)),
        ("O[1]", identity_algebra_map(O), O1),
        ("odd", identity_algebra_map(A), L),
    ]
    for name, u, M in changes:
        _absorb(report, base_change_line_check(u, M), name)
    report.details = {
        "lines": [name for name, _, _ in cases] + ["odd"],
        "products": 2,
        "direct_sums": [name for name, _, _, _ in sums],
        "base_changes": [name for name, _, _ in changes],
    }
    return report


def descent(seed: int, count: int) -> CheckReport:
    rng = random.Random(seed)
    report = CheckReport("descent")
    A = product_of_fields(3)
    cov = two_chart_cover(A)
    for lam in LAMBDAS:
        datum = descent_datum(cov, [regular_module(u.target) for u in cov.legs], {(0, 1): lam})
        glued = glue(datum)
        _absorb(report, glued.report, f"lambda={lam}")
        line, sub = is_line_object(A, glued.module)
        _absorb(report, sub, f"lambda={lam}/line")
        _expect(report, has_retraction(glued.inclusion), {"lambda": lam, "reason": "not a direct summand"})
    for trial in range(count):
        # the middle factor is shared by both charts
        gens = [_nonzero_vector(rng, 3, keep=1) for _ in range(1 + rng.randrange(3))]
        M = module_direct_sum([ideal_module(generated_ideal(A, [g]))[0] for g in gens]).module
        glued = glue(restrict_to_covering(cov, M))
        _absorb(report, glued.report, f"round_trip[{trial}]")
        _expect(report, find_isomorphism(glued.module, M, seed) is not None, {"round_trip": trial})
    report.details = {"lambdas": list(LAMBDAS), "round_trips": count}
    return report


def _scaled(p, rng: random.Random):
    """The same point written with every coordinate multiplied by a unit."""
    A = p.algebra
    c = _random_unit(A, rng)
    i = next(i for i in range(p.n + 1) if chart_membership(p, i))
    values = list(chart_coordinates(p, i).coords)
    values.insert(i, A.unit)
    point, _ = verify_point(A, p.n, regular_module(A), unit_mono(A, [A.multiply(v, c) for v in values]))
    return point


def proj_points(seed: int, count: int) -> CheckReport:
    rng = random.Random(seed)
    report = CheckReport("proj")
    algebras = [ground_algebra(), product_of_fields(2), product_of_fields(3), octonions()]
    cocycles = 0
    for trial in range(count):
        A = algebras[trial % 4]
        n = 1 + (trial // 4) % 2
        p = random_point(A, n, rng)
        charts = [i for i in range(n + 1) if chart_membership(p, i)]
        for i in charts:
            coords = chart_coordinates(p, i).coords
            _expect(report, points_equal(point_from_chart(A, n, i, coords), p), {"trial": trial, "chart": i})
        scaled = _scaled(p, rng)
        _expect(report, scaled is not None and points_equal(scaled, p), {"trial": trial, "reason": "scaling"})
        q = dualize_point_inv(p)
        _expect(report, points_equal(dualize_point(q), p), {"trial": trial, "reason": "Psi Psi^-1"})
        _expect(report, quotients_equal(dualize_point_inv(dualize_point(q)), q), {"trial": trial, "reason": "Psi^-1 Psi"})
        for i in range(n + 1):
            inside = quotient_chart_membership(q, i)
            same = inside == (i in charts) and (
                not inside or quotient_chart_coordinates(q, i).coords == chart_coordinates(p, i).coords
            )
            _expect(report, same, {"trial": trial, "chart": i, "reason": "Psi and charts disagree"})
        if n == 2 and charts == [0, 1, 2]:
            cocycles += 1
            c0 = chart_coordinates(p, 0).coords
            t01 = transition(A, 2, 0, 1, c0)
            _expect(report, t01 == chart_coordinates(p, 1).coords, {"trial": trial, "reason": "t01"})
            _expect(report, transition(A, 2, 0, 2, c0) == transition(A, 2, 1, 2, t01), {"trial": trial, "reason": "t02 != t12 t01"})
    report.details = {"points": count, "cocycle_instances": cocycles}
    return report


def flagship(seed: int, count: int) -> CheckReport:
    rng = random.Random(seed)
    report = CheckReport("octonionic_flagship")
    O = octonions()
    _expect(report, is_field_object(O), {"reason": "octonions are not a field object"})
    for k, n in enumerate((1, 2, 3)):
        size = count // 3 + (1 if k < count % 3 else 0)
        _absorb(report, field_cover_check(O, n, [random_point(O, n, rng) for _ in range(size)]), f"P^{n}")
    A = product_of_fields(3)
    coverings = [("Q^3", two_chart_cover(A)), ("O", Covering(O, (identity_algebra_map(O),)))]
    for name, cov in coverings:
        for n in (1, 2):
            P = random_point(cov.base, n, rng)
            locals_ = [base_change_point(u, P) for u in cov.legs]
            glued, sub = sheaf_condition_instance(cov, locals_)
            _absorb(report, sub, f"{name}/P^{n}")
            _expect(report, glued is not None and points_equal(glued, P), {"covering": name, "n": n})
    report.details = {"points": count, "coverings": [name for name, _ in coverings]}
    return report


def zeta(seed: int, count: int) -> CheckReport:
    rng = random.Random(seed)
    report = CheckReport("zeta")
    O = octonions()
    for trial in range(count):
        if trial % 10 == 9:
            u, M, N = identity_algebra_map(O), regular_module(O), octonion_line(rng, O)
        else:
            n = 2 + trial % 2
            A = product_of_fields(n)
            choice = trial % 3
            if choice == 0:
                u = identity_algebra_map(A)
            elif choice == 1:
                u = localize(A, endo(A, _nonzero_vector(rng, n))).map
            else:
                u = _factor_projections(A)[rng.randrange(n)]
            modules = [
                regular_module(A),
                free_rank(A, 2).module,
                ideal_module(generated_ideal(A, [_nonzero_vector(rng, n)]))[0],
            ]
            M, N = rng.choice(modules), rng.choice(modules)
        _, invertible = zeta_map(u, M, N)
        _expect(report, invertible, {"trial": trial, "reason": "zeta is not invertible"})
    retractions = _retraction_agreement(rng)
    _absorb(report, retractions)
    report.details = {"triples": count, **retractions.details}
    return report


def _retraction_agreement(rng: random.Random) -> CheckReport:
    """find_retraction against the hom-basis oracle; the (eps) ideal of Q[eps] is the negative case."""
    report = CheckReport("retraction_oracle")
    instances = []
    for A in (product_of_fields(2), product_of_fields(3), octonions()):
        instances.append(random_point(A, 1, rng).mono)
        instances.append(module_direct_sum([regular_module(A), regular_module(A)]).injections[0])
    Q3 = product_of_fields(3)
    instances.append(ideal_module(generated_ideal(Q3, [(ONE, ZERO, ZERO)]))[1])
    D = dual_numbers()
    negative = ideal_module(generated_ideal(D, [(ZERO, ONE)]))[1]
    instances.append(negative)
    for k, x in enumerate(instances):
        found = find_retraction(x) is not None
        _expect(report, found == has_retraction(x), {"instance": k, "solver": found})
    _expect(report, find_retraction(negative) is None, {"instance": "dual_numbers", "reason": "retraction found"})
    report.details = {"retraction_instances": len(instances)}
    return report


def run(seed: int = 0, samples: int | None = None) -> list[CheckReport]:
    """Every acceptance criterion as one named check; ``samples`` replaces each default count."""

    def count(default: int) -> int:
        return default if samples is None else samples

    checks = [
        monoidal_axioms(),
        octonion_algebra(seed, count(IDENTITY_TRIALS)),
        partitions(seed, count(PARTITIONS)),
        localizations(seed, count(LOCALIZATIONS)),
        line_objects(seed),
        descent(seed, count(ROUND_TRIPS)),
        proj_points(seed, count(PROJ_POINTS)),
        flagship(seed, count(PROJ_POINTS)),
        zeta(seed, count(ZETA_TRIPLES)),
    ]
    for check in checks:
        logger.info("%s: %s checked, %s violations", check.name, check.checked, len(check.violations))
    return checks
