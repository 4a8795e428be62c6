from fluxlab.models.cnot import (  # noqa: F401
    CnotParams, cnot_amplitude_cx, cnot_analytic_fluxes, cnot_analytic_state, cnot_full_pair_oracle,
    cnot_master_equation, cnot_rate_cx,
)
from fluxlab.models.protocol import (  # noqa: F401
    ProtocolParams, ProtocolReport, protocol_exact_step, protocol_first_order, protocol_joint_state,
    protocol_scaling_study,
)
from fluxlab.models.thermal import thermal_qubit_master_equation  # noqa: F401
