//! Density-matrix reference implementation of entanglement swapping.
//!
//! [`swap_density_matrix`] rebuilds the operation from first principles:
//! it forms the full 16×16 four-qubit density matrix of two Bell-diagonal
//! pairs, projects the middle qubits onto each Bell state, applies the
//! outcome-conditioned Pauli correction to the surviving qubit, sums the
//! four branches, and reads off the Bell weights of the end pair. Bell
//! states have real amplitudes and the corrections are real matrices, so
//! the whole computation stays in real arithmetic.
//!
//! Nothing here calls [`BellDiagonalState::swap`]; the closed-form
//! convolution and this module check each other. [`oracle_check`] runs
//! the comparison on seeded random inputs and is exposed through the CLI
//! as a user-runnable self-test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bellstate::BellDiagonalState;
use crate::error::{Error, Result};

/// Maximum absolute weight deviation tolerated between the convolution
/// and the density-matrix route.
pub const ORACLE_TOL: f64 = 1e-12;

type Mat2 = [[f64; 2]; 2];
type Mat4 = [[f64; 4]; 4];
type Mat16 = [[f64; 16]; 16];

/// Amplitudes of the Bell states over the computational basis
/// `(|00⟩, |01⟩, |10⟩, |11⟩)`, ordered by Klein label
/// `[φ+, ψ+, φ−, ψ−]`.
fn bell_amplitudes(label: usize) -> [f64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match label {
        0 => [s, 0.0, 0.0, s],
        1 => [0.0, s, s, 0.0],
        2 => [s, 0.0, 0.0, -s],
        3 => [0.0, s, -s, 0.0],
        _ => unreachable!("four Bell states"),
    }
}

/// Pauli correction applied to the surviving qubit for each measurement
/// outcome, same label order as [`bell_amplitudes`].
fn correction(label: usize) -> Mat2 {
    match label {
        0 => [[1.0, 0.0], [0.0, 1.0]],
        1 => [[0.0, 1.0], [1.0, 0.0]],
        2 => [[1.0, 0.0], [0.0, -1.0]],
        3 => [[0.0, -1.0], [1.0, 0.0]],
        _ => unreachable!("four Bell states"),
    }
}

/// 4×4 density matrix of a Bell-diagonal pair in the computational basis.
fn pair_density(state: &BellDiagonalState) -> Mat4 {
    let weights = [
        state.p_phi_plus(),
        state.p_psi_plus(),
        state.p_phi_minus(),
        state.p_psi_minus(),
    ];
    let mut rho = [[0.0; 4]; 4];
    for (label, w) in weights.iter().enumerate() {
        let beta = bell_amplitudes(label);
        for (i, bi) in beta.iter().enumerate() {
            for (j, bj) in beta.iter().enumerate() {
                rho[i][j] += w * bi * bj;
            }
        }
    }
    rho
}

/// Index of the four-qubit basis state `|a b c d⟩`.
fn idx(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 2 + b) * 2 + c) * 2 + d
}

/// Kronecker product of the two pair states, qubit order `A B C D` with
/// the first pair on `(A, B)` and the second on `(C, D)`.
fn four_qubit_density(ab: &Mat4, cd: &Mat4) -> Box<Mat16> {
    let mut rho = Box::new([[0.0; 16]; 16]);
    for p in 0..4 {
        for q in 0..4 {
            for r in 0..4 {
                for s in 0..4 {
                    rho[p * 4 + r][q * 4 + s] = ab[p][q] * cd[r][s];
                }
            }
        }
    }
    rho
}

/// Projects qubits `B` and `C` onto one Bell state and traces them out,
/// leaving the unnormalized 4×4 state of `(A, D)`.
fn project_middle(rho: &Mat16, beta: &[f64; 4]) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for a in 0..2 {
        for d in 0..2 {
            for a2 in 0..2 {
                for d2 in 0..2 {
                    let mut acc = 0.0;
                    for b in 0..2 {
                        for c in 0..2 {
                            for b2 in 0..2 {
                                for c2 in 0..2 {
                                    acc += beta[b * 2 + c]
                                        * rho[idx(a, b, c, d)][idx(a2, b2, c2, d2)]
                                        * beta[b2 * 2 + c2];
                                }
                            }
                        }
                    }
                    out[a * 2 + d][a2 * 2 + d2] = acc;
                }
            }
        }
    }
    out
}

/// Conjugates the `(A, D)` state by `I ⊗ U`.
fn correct_survivor(rho: &Mat4, u: &Mat2) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for a in 0..2 {
        for d in 0..2 {
            for a2 in 0..2 {
                for d2 in 0..2 {
                    let mut acc = 0.0;
                    for e in 0..2 {
                        for e2 in 0..2 {
                            acc += u[d][e] * rho[a * 2 + e][a2 * 2 + e2] * u[d2][e2];
                        }
                    }
                    out[a * 2 + d][a2 * 2 + d2] = acc;
                }
            }
        }
    }
    out
}

/// Entanglement swapping evaluated on full density matrices.
pub fn swap_density_matrix(a: &BellDiagonalState, b: &BellDiagonalState) -> BellDiagonalState {
    let rho4 = four_qubit_density(&pair_density(a), &pair_density(b));
    let mut total = [[0.0; 4]; 4];
    for label in 0..4 {
        let branch = project_middle(&rho4, &bell_amplitudes(label));
        let corrected = correct_survivor(&branch, &correction(label));
        for i in 0..4 {
            for j in 0..4 {
                total[i][j] += corrected[i][j];
            }
        }
    }
    let mut labels = [0.0; 4];
    for (label, slot) in labels.iter_mut().enumerate() {
        let beta = bell_amplitudes(label);
        let mut w = 0.0;
        for (i, bi) in beta.iter().enumerate() {
            for (j, bj) in beta.iter().enumerate() {
                w += bi * total[i][j] * bj;
            }
        }
        *slot = w;
    }
    BellDiagonalState::new(labels[0], labels[2], labels[1], labels[3])
        .expect("oracle output is a valid state")
}

/// A Bell-diagonal state drawn uniformly from the weight simplex.
pub fn random_state<R: Rng>(rng: &mut R) -> BellDiagonalState {
    let mut draws = [0.0; 4];
    for d in &mut draws {
        // Exponential draws normalize to a flat Dirichlet.
        *d = -(1.0 - rng.gen::<f64>()).ln();
    }
    let sum: f64 = draws.iter().sum();
    BellDiagonalState::new(
        draws[0] / sum,
        draws[1] / sum,
        draws[2] / sum,
        draws[3] / sum,
    )
    .expect("normalized by construction")
}

/// Outcome of one oracle comparison run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub trials: u32,
    /// Largest absolute weight difference seen across all trials.
    pub max_deviation: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_deviation < ORACLE_TOL
    }
}

/// Compares the swap convolution against the density-matrix route on
/// `trials` seeded random input pairs.
pub fn oracle_check(seed: u64, trials: u32) -> Result<OracleReport> {
    if trials == 0 {
        return Err(Error::Invalid {
            name: "trials",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation = 0.0f64;
    for _ in 0..trials {
        let a = random_state(&mut rng);
        let b = random_state(&mut rng);
        let fast = a.swap(&b);
        let reference = swap_density_matrix(&a, &b);
        for (x, y) in fast.weights().iter().zip(reference.weights()) {
            max_deviation = max_deviation.max((x - y).abs());
        }
    }
    Ok(OracleReport {
        seed,
        trials,
        max_deviation,
    })
}
