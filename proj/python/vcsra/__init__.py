"""Virtual-carrier-sensing random access: channels, closed forms and Monte-Carlo estimates."""

from ._core import (
    AnalyticParams,
    ResultTable,
    VcsraError,
    __version__,
    asymptotic_rate,
    asymptotic_sinr_cb,
    asymptotic_sinr_zf,
    calibrate_lambda,
    calibrate_lambda_empirical,
    cb_beamformers,
    config_keys,
    describe_config,
    draw_channels,
    estimate_p_av,
    estimate_rates,
    figure_ids,
    hadamard,
    noiseless_strength,
    orthogonal_complement,
    p_av_multi,
    p_av_single,
    pdf_ybar,
    ra_interference_expectation,
    reproduce_figure,
    sample_admitted,
    sweep,
    zf_beamformers,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
