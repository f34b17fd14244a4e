"""Trusted core: core terms, evaluation, conversion and type checking."""

from .check import Checker, Ctx, KernelTypeError, check, context, conv, infer, normalize, normalize_at
from .elab import DeclResult, check_decl, check_module, resolve
from .env import Entry, GlobalEnv, NameClash, base_env
from .pretty import show, to_surface

__all__ = [
    "Checker",
    "Ctx",
    "DeclResult",
    "Entry",
    "GlobalEnv",
    "KernelTypeError",
    "NameClash",
    "base_env",
    "check",
    "check_decl",
    "check_module",
    "context",
    "conv",
    "infer",
    "normalize",
    "normalize_at",
    "resolve",
    "show",
    "to_surface",
]
