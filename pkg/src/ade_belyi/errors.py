"""Error hierarchy shared by every module.

Each domain error carries a short machine-readable ``code`` that the
command line reports in its JSON error payload.
"""


class DomainError(Exception):
    code = "domain-error"

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


class MalformedInputError(DomainError):
    code = "malformed-input"


class CapacityError(DomainError):
    code = "capacity"


def _jsonable(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)
