from enum import Enum


class Failure(Enum):
    MALFORMED_MAP = "MalformedMap"
    MALFORMED_DIVIDE = "MalformedDivide"
    NON_GENERIC_INTERSECTION = "NonGenericIntersection"
    ENDPOINT_IN_INTERIOR = "EndpointInInterior"
    MOVE_NOT_APPLICABLE = "MoveNotApplicable"
    INVALID_PUISEUX = "InvalidPuiseux"
    DIMENSION_MISMATCH = "DimensionMismatch"
    INCOHERENT_DIVIDE = "IncoherentDivide"
    FACE_CENSUS_VIOLATION = "FaceCensusViolation"
    MODEL_MISMATCH = "ModelMismatch"
    NOT_A_TREE = "NotATree"
    NOT_EMBEDDED = "NotEmbedded"
    NO_LEGAL_VERTEX = "NoLegalVertex"
    NO_CORE = "NoCore"
    NO_COHERENT_ORIENTATION = "NoCoherentOrientation"
    INCOHERENT_TRIANGLE = "IncoherentTriangle"
    REPLAY_MISMATCH = "ReplayMismatch"
    BAD_PARAMS = "BadParams"
    PARSE_ERROR = "ParseError"
    UNKNOWN_FIXTURE = "UnknownFixture"
    INTERNAL = "InternalError"


class DivideKitError(Exception):
    def __init__(self, error_type: Failure, msg: str = ""):
        super().__init__(f"{error_type.value}: {msg}")
        self.error_type = error_type
        self.msg = msg
