"""Kernel backend selection.

The compiled extension (locis._kernel, built from _kernel.pyx) and the pure
fallback (locis._kernel_py) implement identical contracts; the compiled one
works on unsigned 64-bit masks, so anything with edge ids >= 64 is routed to
the pure implementation regardless of the active backend.  Set LOCIS_PURE=1
to force the pure backend everywhere.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("LOCIS_PURE"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

BACKEND = _impl.BACKEND

FREE = _kernel_py.FREE
CARD = _kernel_py.CARD
PARTITION = _kernel_py.PARTITION
TIMED = _kernel_py.TIMED
SIGN = _kernel_py.SIGN
EXPLICIT = _kernel_py.EXPLICIT


def _route(max_bit: int):
    return _impl if max_bit < 64 else _kernel_py


def system_handle(kind, ground_mask, ground_bits, a=0, b=0, blocks=(),
                  conflict=(), table=b""):
    impl = _route(ground_bits[-1] if ground_bits else 0)
    return impl, impl.make_system(kind, ground_mask, ground_bits, a, b,
                                  blocks, conflict, table)


def local_max(h, F: int) -> int:
    return h[0].local_max(h[1], F)


def sys_member(h, J: int) -> bool:
    return h[0].sys_member(h[1], J)


def sys_add_ok(h, S: int, e: int) -> bool:
    return h[0].sys_add_ok(h[1], S, e)


def local_table(h) -> bytearray:
    return h[0].local_table(h[1])


def instance_handle(system_handles, everts, m_top: int):
    impl = _route(m_top - 1)
    if any(sh[0] is _kernel_py for sh in system_handles):
        impl = _kernel_py
    raw = [impl.make_system(*_fields(sh)) if sh[0] is not impl else sh[1]
           for sh in system_handles]
    return impl, impl.make_instance(raw, everts, m_top)


def _fields(sh):
    # pure handles are plain tuples of the constructor arguments
    if sh[0] is _kernel_py:
        return sh[1]
    return sh[1].fields()


def global_max(H, F: int):
    return H[0].global_max(H[1], F)


def inst_add_ok(H, S: int, e: int) -> bool:
    return H[0].inst_add_ok(H[1], S, e)


def global_table(H, universe: int) -> bytearray:
    return H[0].global_table(H[1], universe)


def ksystem_scan(table, nbits: int):
    if nbits >= 64:
        raise ValueError("k-system scan limited to fewer than 64 positions")
    return _impl.ksystem_scan(table, nbits)
