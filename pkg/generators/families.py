from generators.chebyshev import CHEBYSHEV_FAMILY
from generators.diagrams import AN_FAMILY, DN_FAMILY
from generators.fixtures import FIXTURE_FAMILY
from generators.lines import LINES_FAMILY
from generators.pencil import PENCIL_FAMILY


class Families:
    CHEBYSHEV = CHEBYSHEV_FAMILY
    LINES = LINES_FAMILY
    PENCIL = PENCIL_FAMILY
    AN = AN_FAMILY
    DN = DN_FAMILY
    FIXTURE = FIXTURE_FAMILY
    mapping = {
        CHEBYSHEV_FAMILY.name: CHEBYSHEV_FAMILY,
        LINES_FAMILY.name: LINES_FAMILY,
        PENCIL_FAMILY.name: PENCIL_FAMILY,
        AN_FAMILY.name: AN_FAMILY,
        DN_FAMILY.name: DN_FAMILY,
        FIXTURE_FAMILY.name: FIXTURE_FAMILY,
    }
