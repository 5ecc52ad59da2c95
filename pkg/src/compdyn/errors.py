"""Exceptions raised by the library."""


class CompDynError(Exception):
    """Base class for all library errors."""


class NonMeasurableSet(CompDynError):
    """An atom set is not a union of blocks of the partition."""


class NonMeasurablePreimage(NonMeasurableSet):
    """The preimage of a measurable set is not measurable, so the map is not
    measurable with respect to the partition sigma-algebra."""


class ExitEncountered(CompDynError):
    """An atom of the set maps outside the truncation window."""


class NotInjective(CompDynError):
    """The (block-level) functional graph has a vertex of in-degree above one."""


class NoSolvablePullback(CompDynError):
    """No measurable set C_j satisfies f^{-k}(C_j) = B_j intersected with B."""


class BudgetTooLoose(CompDynError):
    """The certificate epsilon exceeds the admissibility threshold for eta and M."""
