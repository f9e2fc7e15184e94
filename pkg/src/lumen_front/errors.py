"""Exception hierarchy for the front-end."""


class LumenError(Exception):
    """Base class for all errors raised by lumen_front."""


class ImageError(LumenError, ValueError):
    pass


class EmptyHistogram(LumenError, ValueError):
    pass


class EvenKernel(LumenError, ValueError):
    pass


class BadSigma(LumenError, ValueError):
    pass


class DimensionMismatch(LumenError, ValueError):
    pass


class OutOfBounds(LumenError, IndexError):
    pass


class PatchOutOfBounds(OutOfBounds):
    pass


class KeypointOutOfBounds(OutOfBounds):
    pass


class EmptySet(LumenError, ValueError):
    pass


class ConfigError(LumenError, ValueError):
    pass


class DatasetError(LumenError, OSError):
    """I/O problems with a frame sequence. Messages always carry the offending path."""


class MissingDirectory(DatasetError):
    pass


class MissingIndex(DatasetError):
    pass


class MalformedIndex(DatasetError):
    pass


class UnreadableImage(DatasetError):
    pass


class TooFewFrames(LumenError, ValueError):
    pass


class FrameError(LumenError):
    """Wraps a stage failure with the id of the frame being processed."""

    def __init__(self, frame_id, cause: BaseException):
        super().__init__(f"frame {frame_id}: {cause}")
        self.frame_id = frame_id
        self.cause = cause
