import json
from typing import Any, List, Sequence

from divides.formats import format_divide
from generators.families import Families
from generators.family import FamilySpec
from lib.errors import DivideKitError, Failure


def get_family(family_name: str) -> FamilySpec:
    family = Families.mapping.get(family_name)
    if family is None:
        raise DivideKitError(Failure.BAD_PARAMS, f"Could not find family {family_name} in families.py")
    return family


def family_args(family: FamilySpec, raw: Sequence[str]) -> List[Any]:
    if len(raw) != len(family.params):
        raise DivideKitError(Failure.BAD_PARAMS, f"{family.name} takes {', '.join(family.params)}")
    if not family.minimum:
        return list(raw)
    args = []
    for name, value, least in zip(family.params, raw, family.minimum):
        try:
            n = int(value)
        except ValueError:
            raise DivideKitError(Failure.BAD_PARAMS, f"{family.name}: {name} must be an integer, got {value!r}")
        if n < least:
            raise DivideKitError(Failure.BAD_PARAMS, f"{family.name}: {name} must be at least {least}, got {n}")
        args.append(n)
    return args


def build_family(family_name: str, raw: Sequence[str]) -> Any:
    family = get_family(family_name)
    return family.build(*family_args(family, raw))


def render_family(family_name: str, raw: Sequence[str]) -> str:
    """Text written by `generate`: a divide file, a diagram as JSON, or the stored fixture."""
    family = get_family(family_name)
    built = family.build(*family_args(family, raw))
    if family.output == "divide":
        return format_divide(built)
    if family.output == "diagram":
        return json.dumps({str(v): sorted(ws) for v, ws in sorted(built.items())}, indent=2) + "\n"
    return built


def parse_vertices(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DivideKitError(Failure.PARSE_ERROR, f"expected comma-separated vertex ids, got {text!r}")
