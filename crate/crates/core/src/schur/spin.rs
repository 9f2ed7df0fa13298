use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{tensor_power, Operator, Tensor, C64};

/// A total-spin label stored as `2j`, so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinLabel {
    two_j: usize,
}

impl SpinLabel {
    /// A spin valid for `n` spin-½ particles: `2j ≤ n` and `2j ≡ n (mod 2)`.
    pub fn new(n: usize, two_j: usize) -> Result<Self> {
        if two_j > n || !(n - two_j).is_multiple_of(2) {
            return Err(Error::InvalidSpin { n, two_j });
        }
        Ok(Self { two_j })
    }

    pub(crate) const fn from_two_j(two_j: usize) -> Self {
        Self { two_j }
    }

    pub const HALF: SpinLabel = SpinLabel { two_j: 1 };

    pub fn two_j(self) -> usize {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// `2j + 1`.
    pub fn dim(self) -> usize {
        self.two_j + 1
    }

    pub fn is_valid_for(self, n: usize) -> bool {
        self.two_j <= n && (n - self.two_j).is_multiple_of(2)
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Collective spin operators `J_a = ½ Σ_i σ_a^{(i)}` for `a = x, y, z`.
pub fn collective_spin(n: usize) -> [Operator; 3] {
    let id = Operator::identity(2);
    let half = C64::from(0.5);
    let paulis = [Operator::pauli_x(), Operator::pauli_y(), Operator::pauli_z()];
    paulis.map(|sigma| {
        let mut total = Operator::zeros(1 << n);
        for site in 0..n {
            let mut term = if site == 0 { sigma.clone() } else { id.clone() };
            for k in 1..n {
                term = term.tensor(if k == site { &sigma } else { &id });
            }
            total = &total + &term;
        }
        total.scale(half)
    })
}

/// `exp(iθ n̂·J) = (exp(iθ n̂·σ/2))^{⊗n}` for a unit axis `n̂`.
pub fn collective_rotation(n: usize, theta: f64, axis: [f64; 3]) -> Operator {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    let [nx, ny, nz] = axis.map(|a| a / norm);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let i = C64::new(0.0, 1.0);
    // cos(θ/2) I + i sin(θ/2) n̂·σ
    let single = Operator::from_row_slice(
        2,
        &[
            C64::from(c) + i * s * nz,
            i * s * C64::new(nx, -ny),
            i * s * C64::new(nx, ny),
            C64::from(c) - i * s * nz,
        ],
    )
    .expect("2x2");
    tensor_power(&single, n)
}
