//! Bell-diagonal two-qubit state algebra.
//!
//! Every pair tracked through the repeater chain is diagonal in the Bell
//! basis `{|φ+⟩, |φ−⟩, |ψ+⟩, |ψ−⟩}`, so four real weights describe it
//! completely. Entanglement swapping of two Bell-diagonal pairs yields
//! another Bell-diagonal pair whose weights are the group convolution of
//! the input weights under the Klein four-group labelling
//!
//! ```text
//! φ+ ↦ 00    ψ+ ↦ 01    φ− ↦ 10    ψ− ↦ 11
//! ```
//!
//! i.e. `out[k] = Σ_{i⊕j=k} a[i]·b[j]`. The labels are the (Z-error,
//! X-error) bits of the Pauli that maps `|φ+⟩` to the given Bell state;
//! a Bell-state measurement adds error bits modulo two. The closed form
//! is cross-checked against a full density-matrix computation in
//! [`crate::selftest`].

use crate::error::{check_probability, Error, Result};

/// Absolute tolerance on the sum of the four weights of a valid state.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Negative weights of magnitude at most this are treated as rounding
/// artefacts and clamped to zero; anything more negative is rejected.
pub const NEGATIVE_WEIGHT_TOL: f64 = 1e-15;

/// A two-qubit state diagonal in the Bell basis.
///
/// Weights are probabilities that sum to one. The fidelity with respect
/// to `|φ+⟩` is the first weight. Instances are immutable; all
/// operations return new states.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BellDiagonalState {
    p_phi_plus: f64,
    p_phi_minus: f64,
    p_psi_plus: f64,
    p_psi_minus: f64,
}

/// Error rates of a Bell-diagonal pair in the X and Z measurement bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRates {
    pub e_x: f64,
    pub e_z: f64,
}

impl BellDiagonalState {
    /// Builds a state from the four Bell weights, in the order
    /// `(p_φ+, p_φ−, p_ψ+, p_ψ−)`.
    ///
    /// Tiny negative weights (within [`NEGATIVE_WEIGHT_TOL`]) are clamped
    /// to zero and the state renormalized; the sum must be within
    /// [`NORMALIZATION_TOL`] of one.
    pub fn new(
        p_phi_plus: f64,
        p_phi_minus: f64,
        p_psi_plus: f64,
        p_psi_minus: f64,
    ) -> Result<Self> {
        let named = [
            ("p_phi_plus", p_phi_plus),
            ("p_phi_minus", p_phi_minus),
            ("p_psi_plus", p_psi_plus),
            ("p_psi_minus", p_psi_minus),
        ];
        let mut w = [0.0; 4];
        for (slot, (name, value)) in w.iter_mut().zip(named) {
            if !value.is_finite() {
                return Err(Error::not_finite(name, value));
            }
            if value < -NEGATIVE_WEIGHT_TOL {
                return Err(Error::NegativeWeight { name, value });
            }
            *slot = value.max(0.0);
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self {
            p_phi_plus: w[0] / sum,
            p_phi_minus: w[1] / sum,
            p_psi_plus: w[2] / sum,
            p_psi_minus: w[3] / sum,
        })
    }

    /// The pure `|φ+⟩` state.
    pub fn perfect() -> Self {
        Self {
            p_phi_plus: 1.0,
            p_phi_minus: 0.0,
            p_psi_plus: 0.0,
            p_psi_minus: 0.0,
        }
    }

    /// The maximally mixed two-qubit state, `I/4` in the Bell basis.
    pub fn maximally_mixed() -> Self {
        Self {
            p_phi_plus: 0.25,
            p_phi_minus: 0.25,
            p_psi_plus: 0.25,
            p_psi_minus: 0.25,
        }
    }

    /// A depolarized state of fidelity `f`: weight `f` on `|φ+⟩` and
    /// `(1−f)/3` on each of the other three Bell states.
    pub fn depolarized(f: f64) -> Result<Self> {
        check_probability("fidelity", f)?;
        let rest = (1.0 - f) / 3.0;
        Ok(Self {
            p_phi_plus: f,
            p_phi_minus: rest,
            p_psi_plus: rest,
            p_psi_minus: rest,
        })
    }

    pub fn p_phi_plus(&self) -> f64 {
        self.p_phi_plus
    }

    pub fn p_phi_minus(&self) -> f64 {
        self.p_phi_minus
    }

    pub fn p_psi_plus(&self) -> f64 {
        self.p_psi_plus
    }

    pub fn p_psi_minus(&self) -> f64 {
        self.p_psi_minus
    }

    /// Fidelity with respect to `|φ+⟩`.
    pub fn fidelity(&self) -> f64 {
        self.p_phi_plus
    }

    /// The four weights in constructor order `(p_φ+, p_φ−, p_ψ+, p_ψ−)`.
    pub fn weights(&self) -> [f64; 4] {
        [
            self.p_phi_plus,
            self.p_phi_minus,
            self.p_psi_plus,
            self.p_psi_minus,
        ]
    }

    /// Weights indexed by Klein label: `[φ+, ψ+, φ−, ψ−]`.
    fn to_labels(self) -> [f64; 4] {
        [
            self.p_phi_plus,
            self.p_psi_plus,
            self.p_phi_minus,
            self.p_psi_minus,
        ]
    }

    fn from_labels(w: [f64; 4]) -> Self {
        // Convolution of valid states cannot go negative; the sum can
        // drift by a few ulp, so renormalize to keep long chains closed.
        let sum: f64 = w.iter().sum();
        Self {
            p_phi_plus: w[0] / sum,
            p_psi_plus: w[1] / sum,
            p_phi_minus: w[2] / sum,
            p_psi_minus: w[3] / sum,
        }
    }

    /// Mixes the state with white noise: with probability `p` the state
    /// survives, otherwise it is replaced by the maximally mixed state.
    /// Each weight maps to `p·w + (1−p)/4`.
    pub fn mix_white_noise(&self, p: f64) -> Result<Self> {
        check_probability("mixing probability", p)?;
        let iso = (1.0 - p) / 4.0;
        Ok(Self {
            p_phi_plus: p * self.p_phi_plus + iso,
            p_phi_minus: p * self.p_phi_minus + iso,
            p_psi_plus: p * self.p_psi_plus + iso,
            p_psi_minus: p * self.p_psi_minus + iso,
        })
    }

    /// State of the outer pair after an ideal Bell-state measurement on
    /// one qubit of `self` and one of `other`, including the
    /// outcome-conditioned Pauli correction.
    ///
    /// This is the Klein four-group convolution of the weight vectors.
    /// The accumulation is symmetrized term by term so that
    /// `a.swap(&b) == b.swap(&a)` holds bit for bit.
    pub fn swap(&self, other: &Self) -> Self {
        let a = self.to_labels();
        let b = other.to_labels();
        let mut out = [0.0; 4];
        out[0] = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let mut acc = 0.0;
            for i in 0..4 {
                let j = i ^ k;
                if i < j {
                    acc += a[i] * b[j] + a[j] * b[i];
                }
            }
            *slot = acc;
        }
        Self::from_labels(out)
    }

    /// Applies `swap` recursively to identical copies, `n` times:
    /// `s_0 = self`, `s_{k+1} = s_k.swap(s_k)`. With `n = 0` the input
    /// is returned unchanged. Models a chain of `2^n` identically
    /// distributed elementary pairs connected level by level.
    pub fn nest(&self, n: u32) -> Self {
        let mut state = *self;
        for _ in 0..n {
            state = state.swap(&state);
        }
        state
    }

    /// Error rates in the X and Z bases:
    /// `e_X = p_φ− + p_ψ−`, `e_Z = p_ψ+ + p_ψ−`.
    pub fn error_rates(&self) -> ErrorRates {
        ErrorRates {
            e_x: self.p_phi_minus + self.p_psi_minus,
            e_z: self.p_psi_plus + self.p_psi_minus,
        }
    }
}
