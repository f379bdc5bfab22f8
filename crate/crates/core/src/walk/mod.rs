//! Measures, convolution, sampling, and the exact dynamic programs for walks on `Z`.

mod line;
mod measure;
mod radial;
mod range;
mod step;

pub use line::{line_law, max_law, reflected_line_law, LineLaw};
pub use measure::{
    convolution_power, convolve, line_measure, sample_trajectory, shift_tv_curve, sws_measure, tv_distance,
    FiniteMeasure, DEFAULT_SUPPORT_CAP,
};
pub use radial::{reflected_radial_table, RadialTable};
pub use range::{
    range_table, range_table_forward, range_table_images, range_table_spectral, truncation_width, RangeForward,
    RangeOptions, RangeRoute, RangeTable, DEFAULT_FLOAT_N_CAP, DEFAULT_RATIONAL_N_CAP,
};
pub use step::{BaseStep, StepLawZ, StepLawZ2};
