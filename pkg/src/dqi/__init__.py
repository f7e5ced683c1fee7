"""No-reference depth quality index for stereoscopic omnidirectional and 3D images.

The pipeline measures interocular discrepancy statistics: the absolute
left/right difference is decomposed into CIELAB channels, local equatorial
viewports (or the planar center crop) are Haar-decomposed, and per-subband
standard deviation and entropy form a 24-value feature vector regressed to
depth-quality scores. Pairing those features with local PSNR/MS-SSIM gives
the 26-value overall-QoE variant.
"""

from .evaluation import (
    Dataset,
    DatasetEntry,
    EvalReport,
    InsufficientDataError,
    Task,
    extract_dataset_features,
    krocc,
    load_manifest,
    plcc,
    run_protocol,
    run_protocol_on_features,
    srocc,
)
from .features import (
    DEPTH_FEATURE_NAMES,
    ExtractionConfig,
    ExtractionMode,
    aggregate_over_viewports,
    depth_features,
    subband_entropy,
    subband_std,
    viewport_statistics,
    write_features_csv,
)
from .geometry import (
    SamplingScheme,
    ViewportSpec,
    center_crop,
    equatorial_centers,
    extract_viewport,
    nonuniform_six_centers,
)
from .image import Geometry, StereoImage, abs_diff, load_stereo, rgb_to_lab
from .iqa import (
    OVERALL_FEATURE_NAMES,
    ImageMetric,
    bt601_luma,
    local_image_features,
    ms_ssim,
    overall_features,
    psnr,
)
from .regression import (
    LogisticFit,
    ModelFormatError,
    SvrHyper,
    SvrModel,
    load_model,
    logistic_apply,
    logistic_fit,
    save_model,
    svr_grid_search,
    svr_predict,
    svr_train,
)
from .synth import (
    DistortionKind,
    SynthConfig,
    build_dataset,
    distort,
    generate_texture,
    render_stereopair,
)
from .wavelet import SubbandQuad, haar_decompose, haar_reconstruct

__version__ = "0.1.0"
