"""Direct characterization of a two-level path state by measuring weak values
with a two-level spin meter at arbitrary coupling strength.

The library simulates the full measurement chain of a polarized matter-wave
interferometer experiment: preselection of the path state, a path-conditioned
spin rotation of strength alpha, postselection on the symmetric path state,
and six postselected meter intensities that invert exactly into the complex
weak value of the path Pauli operator, and hence into the state itself. A
Poisson-noise virtual experiment compares the weak (alpha = 15 deg) and
strong (alpha = 90 deg) regimes in precision and accuracy.
"""

from .extract import (
    PathStateEstimate,
    PointEstimate,
    WeakValue,
    contrast_correct,
    extract_weak_value,
    propagate_errors,
    reconstruct_state,
)
from .fit import FringeFit, fit_sinusoid, fitted_visibility, intensity_at_zero
from .pipeline import AnalyzedCampaign, analyze_campaign
from .protocol import (
    FieldParams,
    IntensitySet,
    alpha_from_field,
    closed_form_fringes,
    ideal_intensities,
    normalization_factor,
    pipeline_fringes,
    postselection_probability,
    projector_weak_values,
    weak_value_sigma_z,
)
from .qcore import (
    DIRECTIONS,
    CompositeState,
    Operator4,
    TwoLevelState,
    apply,
    coupling_unitary,
    make_path_state,
    make_spin_x_plus,
    path_x_plus,
    postselect_path,
    spin_basis_state,
    spin_probability,
    tensor,
    wrap_angle,
)
from .report import ComparisonReport, accuracy_rms, build_comparison, emit_outputs, precision_rms
from .sim import (
    CampaignResult,
    ExperimentConfig,
    FringeScan,
    calibration_scan,
    expected_rate,
    read_campaign,
    run_campaign,
    run_direction_set,
    sample_scan,
    write_campaign,
)

__version__ = "0.1.0"
