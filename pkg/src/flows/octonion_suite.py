"""The builtin octonion suite: the Z2^3 cochain, its category and the algebra it twists."""
import random

from helpers.logging import logger
from relproj.amod import regular_module
from relproj.calg import check_algebra_axioms, is_field_object, octonions, underlying_identities
from relproj.cochain_core import braiding, check_hexagon, check_normalized, check_pentagon, coboundary3, octonion_cochain
from relproj.graded_linear import coherence_spot_check
from relproj.linedesc import is_line_object
from relproj.proj import field_cover_check, random_point
from relproj.report import CheckReport

IDENTITY_TRIALS = 1000
COVER_POINTS = 100


def run(seed: int = 0, samples: int | None = None) -> list[CheckReport]:
    F = octonion_cochain()
    phi = coboundary3(F)
    O = octonions()
    field = CheckReport("field_object", checked=1)
    if not is_field_object(O):
        field.fail({"reason": "the octonions have a proper nonzero ideal"})
    _, line = is_line_object(O, regular_module(O))
    rng = random.Random(seed)
    points = [random_point(O, 2, rng) for _ in range(samples or COVER_POINTS)]
    checks = [
        check_normalized(F),
        check_pentagon(phi),
        check_hexagon(F, phi),
        coherence_spot_check(phi, braiding(F)),
        check_algebra_axioms(O),
        underlying_identities(O, samples or IDENTITY_TRIALS, seed),
        field,
        line,
        field_cover_check(O, 2, points),
    ]
    logger.info("octonion suite: %s checks, %s failing", len(checks), sum(not c.passed for c in checks))
    return checks
