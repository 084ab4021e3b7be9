"""Python bindings for the whtmlgate C++ library."""

from ._whtmlgate import (
    CompileError,
    EnvelopeError,
    FormatError,
    MediaError,
    ProjectionError,
    ScriptError,
    VerifyError,
    WhtmlError,
    bmp_to_wbmp,
    cache_key,
    canonical,
    compile,
    decode_mbi,
    digest,
    disassemble,
    encode_mbi,
    fetch,
    open,
    project,
    run,
    seal,
    validate,
    wbmp_to_bmp,
)

__all__ = [
    "CompileError",
    "EnvelopeError",
    "FormatError",
    "MediaError",
    "ProjectionError",
    "ScriptError",
    "VerifyError",
    "WhtmlError",
    "bmp_to_wbmp",
    "cache_key",
    "canonical",
    "compile",
    "decode_mbi",
    "digest",
    "disassemble",
    "encode_mbi",
    "fetch",
    "open",
    "project",
    "run",
    "seal",
    "validate",
    "wbmp_to_bmp",
]
