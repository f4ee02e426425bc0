//! Bell combinations and their classical and quantum bounds.

use crate::scalar::Real;

pub const CLASSICAL_BOUND: f64 = 2.0;
/// Tsirelson bound `2√2` of the two-party combination.
pub const CHSH_QUANTUM_BOUND: f64 = std::f64::consts::SQRT_2 * 2.0;
pub const KLYSHKO_QUANTUM_BOUND: f64 = 4.0;

/// Settings that produced a Bell value.
#[derive(Clone, Debug, PartialEq)]
pub enum Settings<T> {
    Dp(crate::dp::DpSettings<T>),
    Ps(crate::ps::PsSettings<T>),
    Homodyne(crate::homodyne::HomodyneSettings<T>),
    /// Free angle vector returned by an optimizer.
    Angles(Vec<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BellValue<T> {
    pub value: T,
    pub settings: Settings<T>,
}

impl<T: Real> BellValue<T> {
    pub fn violates_local_realism(&self) -> bool {
        self.value.abs() > T::lit(CLASSICAL_BOUND)
    }
}

/// `E(a, b) + E(a, b′) + E(a′, b) − E(a′, b′)` from correlators in that order.
pub fn chsh<T: Real>(e: [T; 4]) -> T {
    e[0] + e[1] + e[2] - e[3]
}

/// `E(a, b, c′) + E(a, b′, c) + E(a′, b, c) − E(a′, b′, c′)` from correlators
/// in that order.
pub fn klyshko<T: Real>(e: [T; 4]) -> T {
    e[0] + e[1] + e[2] - e[3]
}

/// Primed flags per party for the four CHSH terms.
pub const CHSH_TERMS: [[bool; 2]; 4] = [[false, false], [false, true], [true, false], [true, true]];

/// Primed flags per party for the four Klyshko terms.
pub const KLYSHKO_TERMS: [[bool; 3]; 4] = [
    [false, false, true],
    [false, true, false],
    [true, false, false],
    [true, true, true],
];
