//! CODATA 2018 exact SI constants.

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Proton gyromagnetic ratio γ/2π, Hz/T (CODATA 2018).
pub const PROTON_GYROMAGNETIC_RATIO: f64 = 42.577_478_518e6;

/// −½·ln(√2 − 1) = ½·asinh(1): the N-independent polarization at which
/// effective pure states first become entanglable.
pub const TWO_QUBIT_ENTANGLEMENT_ALPHA: f64 = 0.440_686_793_509_771_5;
