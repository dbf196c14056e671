"""Exception types raised by the library's validation layers."""

from __future__ import annotations


class ArccatError(ValueError):
    """Base class for all library-specific errors."""


class EmptySetError(ArccatError):
    """A cyclic set ended up with no points."""


class NotMonotoneError(ArccatError):
    """A lift fails weak monotonicity or the degree-one periodicity bound."""


class MismatchError(ArccatError):
    """Structurally incompatible data (wrong lengths, wrong endpoints, ...)."""


class NotComposableError(ArccatError):
    """A sequence of morphisms does not chain source-to-target."""


class InhomogeneousInputError(ArccatError):
    """An element is not homogeneous where a pure degree is required."""


class NotInjectiveError(ArccatError):
    """An operation requiring an injective cyclic morphism got a non-injective one."""


class NotSurjectiveError(ArccatError):
    """An operation requiring a surjective cyclic morphism got a non-surjective one."""


class PropagatedMCError(ArccatError):
    """A functor image of a twist datum fails the Maurer-Cartan equation."""


class MalformedGraphError(ArccatError):
    """A ribbon graph description is inconsistent."""


class ConfigError(ArccatError):
    """Invalid command-line or suite configuration."""
