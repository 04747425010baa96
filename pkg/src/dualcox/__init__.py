"""Dual (noncrossing) machinery for the reflection groups C_n and D_n."""

from dualcox.signed_perm import (
    Cycle,
    CycleDecomposition,
    GroupType,
    ParseError,
    Reflection,
    SignedPermutation,
    compose,
    coxeter_element,
    decompose,
    format_element,
    inverse,
    parse_element,
    reflection_length,
    reflections,
)

__all__ = [
    "Cycle",
    "CycleDecomposition",
    "GroupType",
    "ParseError",
    "Reflection",
    "SignedPermutation",
    "compose",
    "coxeter_element",
    "decompose",
    "format_element",
    "inverse",
    "parse_element",
    "reflection_length",
    "reflections",
]
