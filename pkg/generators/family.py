from collections import namedtuple

# `params` names the positional arguments; `minimum` gives the smallest allowed value of each
# integer argument and is empty for families addressed by name. `output` is one of
# "divide", "diagram" or "fixture".
FamilySpec = namedtuple("FamilySpec", ["name", "params", "minimum", "build", "output"])
