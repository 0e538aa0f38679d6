"""
Error hierarchy.

Every error carries a machine code (its class name), a detail string and the CLI exit
code of its family: usage (2), data (3), runtime (4).
"""

from typing import Any, Optional, Tuple


class TuberError(Exception):
    """Base class for all pipeline errors."""

    exit_code: int = 4

    def __init__(self, detail: str = "", **context: Any):
        self.detail = detail
        self.context = context
        super().__init__(detail)

    @property
    def code(self) -> str:
        return type(self).__name__

    def one_line(self) -> str:
        """Format as the single machine-parsable stderr line."""
        detail = " ".join(self.detail.split())
        return f"error: {self.code}: {detail}"


class UsageError(TuberError):
    """Invalid arguments or configuration."""

    exit_code = 2


class DataError(TuberError):
    """Input data violates its contract."""

    exit_code = 3


class RuntimeFailure(TuberError):
    """Failure while computing (model, IO, numerics)."""

    exit_code = 4


# ===== DATASET =====

class MalformedRow(DataError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}", line=line, reason=reason)


class DuplicateKey(DataError):
    def __init__(self, potato_id: str, day: int):
        super().__init__(f"duplicate (potato_id={potato_id}, day={day})",
                         potato_id=potato_id, day=day)


class MissingImage(DataError):
    def __init__(self, path: Any):
        super().__init__(f"image not readable: {path}", path=str(path))


class ImageTooSmall(DataError):
    def __init__(self, path: Any, size: Tuple[int, int], minimum: int):
        super().__init__(f"image {path} is {size[0]}x{size[1]}, needs at least {minimum}x{minimum}",
                         path=str(path), size=size, minimum=minimum)


class SinglePointTrajectory(DataError):
    def __init__(self, potato_id: str):
        super().__init__(f"potato {potato_id} has a single observation", potato_id=potato_id)


class ClassTooSmall(DataError):
    def __init__(self, cls: int, count: int, required: int):
        super().__init__(f"class {cls} has {count} samples, needs at least {required}",
                         cls=cls, count=count, required=required)


class EmptyImage(DataError):
    pass


class NonPositiveInitialWeight(DataError):
    pass


class MissingSproutLabel(DataError):
    def __init__(self, potato_id: str, day: int):
        super().__init__(f"no sprout label for (potato_id={potato_id}, day={day})",
                         potato_id=potato_id, day=day)


class LabelOutOfRange(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EmptyMatrix(DataError):
    pass


class EmptyMask(DataError):
    pass


class MissingArtifacts(DataError):
    pass


# ===== USAGE =====

class UnsupportedClassCount(UsageError):
    def __init__(self, n_classes: int):
        super().__init__(f"n_classes={n_classes} outside [2, 8]", n_classes=n_classes)


class InvalidHead(UsageError):
    pass


class InvalidClassIndex(UsageError):
    pass


class GridTooLarge(UsageError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"grid has {size} points, cap is {cap}", size=size, cap=cap)


class NotBinary(UsageError):
    pass


class LayerNotFound(UsageError):
    pass


class NonSpatialLayer(UsageError):
    pass


# ===== RUNTIME =====

class OutputDirNotWritable(RuntimeFailure):
    pass


class WeightsUnavailable(RuntimeFailure):
    def __init__(self, backbone: str, reason: Optional[str] = None):
        detail = f"pretrained weights for {backbone} unavailable"
        if reason:
            detail += f" ({reason})"
        super().__init__(detail, backbone=backbone)


class ShapeMismatch(RuntimeFailure):
    pass


class CorruptCheckpoint(RuntimeFailure):
    pass


class UnsupportedLayer(RuntimeFailure):
    pass


__all__ = [name for name, obj in list(globals().items())
           if isinstance(obj, type) and issubclass(obj, TuberError)]
