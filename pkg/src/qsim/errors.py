"""Exception types shared across the package."""


class QsimError(Exception):
    """Base class for package errors."""


class WordVectorFormatError(QsimError):
    """Word-vector file could not be parsed; message names file and line."""


class DimensionMismatchError(QsimError):
    """Embeddings of different dimensions were compared."""


class UnknownQuestionError(QsimError):
    """A referenced question id is not present in the index."""


class IngestError(QsimError):
    """Corpus ingestion failed; carries the full per-row report."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class RankedFileError(QsimError):
    """A ranked file or driver manifest is malformed or inconsistent."""


class ArtifactFormatError(QsimError):
    """A persisted index/model file is corrupt or has an unsupported schema."""
