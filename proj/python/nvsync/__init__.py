"""Synchronized electron-nuclear gates for NV registers.

Angular frequencies are rad/s and times are seconds; use from_hz/to_hz at the
boundary. design/simulate/table* take and return plain dicts with Hz keys.
"""

from ._nvsync import (
    ConvergenceError,
    DomainError,
    InfeasibleError,
    admissible,
    assemble_ddrf,
    average_gate_fidelity,
    b1_sync,
    bz_ratios,
    bz_sync,
    design,
    detuned_gate,
    fastest_gate,
    fig2_fidelity,
    from_hz,
    ideal_cnot,
    simulate,
    sync_params,
    table1,
    table2,
    tau_sync,
    to_hz,
    u0_free,
    u0_offres,
    u1_drive,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
