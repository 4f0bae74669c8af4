"""Link-level simulator and mutual-information audit toolkit for a
rotation-keyed two-stream BPSK scheme over complex AWGN."""

from .builtin_codes import BUILTIN_CODE_NAMES, builtin_code, peg_parity, resolve_code
from .channel import (
    GAUSSIAN_METHOD,
    SNR_CONVENTIONS,
    ChannelConfig,
    SnrPoint,
    block_rng,
    ebn0_to_esn0,
    esn0_to_ebn0,
    noise_block,
    sigma2_to_snr_db,
    snr_to_sigma2,
    transmit,
)
from .linear_code import (
    LLR_MAX,
    AlistFormatError,
    BinaryCode,
    DecodeStatus,
    RankDeficiencyError,
    RepetitionExtendedCode,
    decode_bp,
    decode_repetition,
    decode_soft_batch,
    encode,
    extend_repetition,
    generator_from_parity,
    load_alist,
    save_alist,
)
from .modem import (
    Constellation,
    beta_from_bits,
    demod_v2_hard,
    derotate_and_llr_v1,
    dmm_map,
    llr_v2,
    map_bpsk,
    rotate,
)
from .mutual_info import (
    CLAIMED_GAIN_DB,
    RECORD_GAP_DB,
    DiscreteInput,
    GapRecord,
    MiResult,
    awgn_entropy,
    composite_abr,
    gap_report,
    mi_awgn,
    mi_axis,
    mi_binary_label,
    mi_bpsk,
    mi_joint_4point,
    mi_qpsk,
)
from .receiver import (
    FrameContext,
    FrameResult,
    PairedRun,
    SimResult,
    make_frame,
    paired_genie_vs_bpsk,
    receive_frame,
    run_point,
    snr_at_ber,
    wilson_interval,
)

__version__ = "0.1.0"
