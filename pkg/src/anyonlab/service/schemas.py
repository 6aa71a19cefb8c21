"""Pydantic request/response models for the service and the CLI client."""

from __future__ import annotations

from pydantic import BaseModel, Field


class Range(BaseModel):
    """Inclusive linspace start..stop with num points."""

    start: float
    stop: float
    num: int = Field(ge=1, le=10_000)


class PhaseScanRequest(BaseModel):
    jx: Range
    jy: Range
    jz: Range
    grid_n: int = Field(default=41, ge=3, le=2_000)
    refine_rounds: int = Field(default=4, ge=0, le=40)
    seed: int = 0


class PhaseScanRow(BaseModel):
    jx: float
    jy: float
    jz: float
    label: str
    min_gap: float


class PhaseScanResponse(BaseModel):
    seed: int
    grid_n: int
    rows: list[PhaseScanRow]


class SpectrumRequest(BaseModel):
    jx: float = Field(gt=0)
    jy: float = Field(gt=0)
    jz: float = Field(gt=0)
    hx: float = 0.0
    hy: float = 0.0
    hz: float = 0.0
    grid_n: int = Field(default=32, ge=3, le=256)
    seed: int = 0


class SpectrumRow(BaseModel):
    qx: float
    qy: float
    eps: float
    delta: float
    delta_tilde: float
    energy: float


class SpectrumResponse(BaseModel):
    seed: int
    rows: list[SpectrumRow]


class LatticeShape(BaseModel):
    rows: int = Field(ge=1, le=14)
    cols: int = Field(ge=2, le=14)


class EdVerifyRequest(BaseModel):
    lattices: list[LatticeShape] = Field(min_length=1)
    jx: float = Field(default=1.0, gt=0)
    jy: float = Field(default=1.0, gt=0)
    jz: float = Field(default=1.0, gt=0)
    tolerance: float = Field(default=1e-8, gt=0)
    seed: int = 0


class EdVerifyRow(BaseModel):
    rows: int
    cols: int
    n_spins: int
    max_commutator_norm: float
    ed_ground_energy: float
    jw_ground_energy: float
    abs_difference: float
    ok: bool


class EdVerifyResponse(BaseModel):
    seed: int
    rows: list[EdVerifyRow]
    all_ok: bool


class BraidRunRequest(BaseModel):
    program: str
    qubits: int = Field(default=1, ge=1, le=3)
    initial_bits: list[int] | None = None
    seed: int = 0
    include_state: bool = False


class MeasurementReport(BaseModel):
    label: str
    outcome: int
    probability: float


class BraidRunResponse(BaseModel):
    seed: int
    qubits: int
    n_generators: int
    final_logical_amplitudes: list[list[float]]
    measurements: list[MeasurementReport]
    pauli_frame: dict[str, str]
    constraint_expectations: list[float]
    state: dict | None = None


class ProtocolRequest(BaseModel):
    kind: str = Field(pattern="^(pi8|cz)$")
    epsilons: list[float] = Field(default=[0.0], min_length=1)
    trials: int = Field(default=100, ge=1, le=100_000)
    seed: int = 0
    noise_model: str = Field(
        default="dephase_to_orthogonal",
        pattern="^(dephase_to_orthogonal|depolarize)$",
    )
    input_state: str = Field(default="random", pattern="^(random|plus)$")
    method: str = Field(default="sampled", pattern="^(exact|sampled)$")
    emit_runs: int = Field(default=0, ge=0, le=1_000)


class SweepRow(BaseModel):
    epsilon: float
    fidelity: float
    stderr: float
    samples: int


class ProtocolRunReport(BaseModel):
    protocol: str
    seed: int
    epsilon: float
    outcomes: list[MeasurementReport]
    branch_probability: float
    fidelity: float


class ProtocolResponse(BaseModel):
    kind: str
    seed: int
    noise_model: str
    input_state: str
    method: str
    rows: list[SweepRow]
    runs: list[ProtocolRunReport] = []


class ToricBraidRequest(BaseModel):
    lx: int = Field(default=2, ge=2, le=3)
    ly: int = Field(default=2, ge=2, le=3)
    charges: int = Field(default=1, ge=0)
    fluxes: int = Field(default=1, ge=0)
    wide_loop: bool = False
    seed: int = 0


class ToricBraidResponse(BaseModel):
    seed: int
    charges: int
    fluxes: int
    phase_re: float
    phase_im: float


class HealthResponse(BaseModel):
    status: str
    version: str
