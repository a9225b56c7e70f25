"""The semi-random OT protocol, its framework form and its reductions.

The combined protocol lives in ``src.protocol.combined`` and is imported
from there, since it depends on the cheating strategies.
"""

from src.protocol.engine import (
    ClassicalSender,
    HonestReceiver,
    ProtocolConfig,
    ReceiverStrategy,
    SenderStrategy,
    Transcript,
    declared_test_table,
    run_honest,
    run_protocol,
    transcript_summary,
)
from src.protocol.framework import (
    STAR_LABELS,
    GenericFramework,
    degenerate_framework,
    example_framework,
    measured_register_state,
    rot_recast_framework,
    run_framework,
)
from src.protocol.reductions import OtOutputs, reduce_to_one_two_ot, reduce_to_random_ot

__all__ = [
    "STAR_LABELS",
    "ClassicalSender",
    "GenericFramework",
    "HonestReceiver",
    "OtOutputs",
    "ProtocolConfig",
    "ReceiverStrategy",
    "SenderStrategy",
    "Transcript",
    "declared_test_table",
    "degenerate_framework",
    "example_framework",
    "measured_register_state",
    "reduce_to_one_two_ot",
    "reduce_to_random_ot",
    "rot_recast_framework",
    "run_framework",
    "run_honest",
    "run_protocol",
    "transcript_summary",
]
