"""Resolvent workbench for quantum light scattering and quantum antennas.

Thin Python layer over the C++ core: classical resolvent kernels (generic
Fredholm, dielectric layer, dielectric cylinder), the quantum commutator
checks that force the ancillary noise fields, and the two-element quantum
antenna's Fock-state transformations and angular correlation patterns.
"""

try:
    from qscat._core import *  # noqa: F401,F403  (installed wheel layout)
    from qscat._core import __doc__ as _core_doc
except ImportError:  # in-tree build: _core sits on PYTHONPATH directly
    from _core import *  # noqa: F401,F403
    from _core import __doc__ as _core_doc

__version__ = "0.1.0"
