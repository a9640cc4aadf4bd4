//! Closed-form spectral objects of the walk and the two-vertex eigenphase analysis.

pub mod dense;
pub mod lattice;
pub mod modes;
pub mod predict;
pub mod roots;

pub use dense::{numeric_extreme_eigenphases, overlap_coefficients, DenseSpectrum, OverlapReport, DENSE_MAX_SIDE};
pub use lattice::{b_coefficient, sum_b, sum_c, sum_i, sum_m, BCoefficient};
pub use modes::{coin_overlap_sq, fourier_mode, FourierMode, Sign};
pub use predict::{predicted_success, CaseTag, SpectralPrediction};
pub use roots::{lambda_case_i, lambda_case_ii, lambda_matrix, CaseIIRoots, CaseIRoots, LambdaMatrix, RootPair};
