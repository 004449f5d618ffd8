import json
from fractions import Fraction


class FractionEncoder(json.JSONEncoder):
    """Rationals as canonical "p/q" strings ("p" for integers)."""

    def default(self, o):
        if isinstance(o, Fraction):
            return str(o)
        if hasattr(o, "numerator") and hasattr(o, "denominator"):
            return str(Fraction(int(o.numerator), int(o.denominator)))
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        return super(FractionEncoder, self).default(o)


def dumps(obj) -> str:
    return json.dumps(obj, cls=FractionEncoder, sort_keys=True, indent=2)
